#include <doctest.h>

#include <cmath>
#include <numbers>

#include <kemax/geometry.hpp>

using namespace kemax;

TEST_CASE("interval: midpoint nodes and exact measure") {
    const Domain dom = build_interval(-1.0, 1.0, 4);
    REQUIRE(dom.node_count() == 4);
    CHECK(dom.node(0)[0] == doctest::Approx(-0.75));
    CHECK(dom.node(1)[0] == doctest::Approx(-0.25));
    CHECK(dom.node(2)[0] == doctest::Approx(0.25));
    CHECK(dom.node(3)[0] == doctest::Approx(0.75));
    for (std::size_t i = 0; i < 4; ++i) CHECK(dom.weights[i] == doctest::Approx(0.5));
    CHECK(dom.intrinsic_dim == 1);
    CHECK(dom.ambient_dim == 1);

    CHECK(build_interval(-1.0, 1.0, 2000).total_measure() == doctest::Approx(2.0).epsilon(1e-14));
    const Domain unit = build_interval(1.0, 2.0, 100);
    CHECK(unit.node_count() == 100);
    CHECK(unit.total_measure() == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(build_interval(1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_interval(2.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_interval(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("interval union: measure, single-segment equivalence, overlap rejection") {
    const Domain two = build_interval_union({{-2.0, -1.0}, {1.0, 2.0}}, 1000);
    CHECK(two.node_count() == 2000);
    CHECK(two.total_measure() == doctest::Approx(2.0).epsilon(1e-14));

    const Domain single = build_interval_union({{-1.0, 1.0}}, 2);  // 4 cells on length 2
    const Domain plain = build_interval(-1.0, 1.0, 4);
    REQUIRE(single.node_count() == plain.node_count());
    for (std::size_t i = 0; i < plain.node_count(); ++i) {
        CHECK(single.node(i)[0] == doctest::Approx(plain.node(i)[0]).epsilon(1e-15));
        CHECK(single.weights[i] == doctest::Approx(plain.weights[i]).epsilon(1e-15));
    }

    CHECK_THROWS_AS(build_interval_union({{-1.0, 0.0}, {0.0, 1.0}}, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_interval_union({{-1.0, 0.5}, {0.0, 1.0}}, 10), std::invalid_argument);
}

TEST_CASE("mask regions: measures within declared bounds, nodes satisfy predicate") {
    const Domain disk = build_mask_region(MaskSpec::disk(1.0), 200);
    CHECK(std::abs(disk.total_measure() - std::numbers::pi) <= 0.01 * std::numbers::pi);
    for (std::size_t i = 0; i < disk.node_count(); ++i)
        CHECK(std::hypot(disk.node(i)[0], disk.node(i)[1]) <= 1.0);
    CHECK(disk.intrinsic_dim == 2);
    CHECK(disk.grid.has_value());

    const Domain ann = build_mask_region(MaskSpec::annulus(0.6, 1.2), 200);
    const double ann_area = std::numbers::pi * (1.2 * 1.2 - 0.6 * 0.6);
    CHECK(std::abs(ann.total_measure() - ann_area) <= 0.01 * ann_area);

    const Domain clover = build_mask_region(MaskSpec::clover(), 200);
    CHECK(clover.total_measure() > 0.0);
    const MaskSpec cmask = MaskSpec::clover();
    for (std::size_t i = 0; i < clover.node_count(); ++i)
        CHECK(cmask.contains(clover.node(i)[0], clover.node(i)[1]));

    // refinement consistency
    const double m100 = build_mask_region(MaskSpec::disk(1.0), 100).total_measure();
    const double m200 = disk.total_measure();
    CHECK(std::abs(m200 - m100) / m100 <= 4.0 / 100.0);

    CHECK_THROWS_AS(build_mask_region(MaskSpec::disk(1.0), {2.0, 3.0, 2.0, 3.0}, 32),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_mask_region(MaskSpec::disk(1.0), 8), std::invalid_argument);
}

TEST_CASE("circle: equispaced nodes, exact measure, chord spacing") {
    CHECK_THROWS_AS(build_circle(4), std::invalid_argument);
    const Domain circ = build_circle(1000);
    CHECK(circ.total_measure() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-13));
    CHECK(circ.node(0)[0] == doctest::Approx(1.0));
    CHECK(circ.node(0)[1] == doctest::Approx(0.0));
    CHECK(circ.intrinsic_dim == 1);
    CHECK(circ.ambient_dim == 2);
    const double chord = node_distance(circ, 0, 1);
    CHECK(chord == doctest::Approx(2 * std::sin(std::numbers::pi / 1000)).epsilon(1e-12));
}

TEST_CASE("cross: measure, manhattan metric dispatch") {
    const Domain cross = build_cross(1.0, 500);
    CHECK(cross.total_measure() == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(cross.metric == Metric::manhattan);
    CHECK(cross.intrinsic_dim == 1);
    CHECK(cross.ambient_dim == 2);

    const double a[2] = {0.5, 0.0}, b[2] = {0.0, 0.5}, c[2] = {0.2, 0.0};
    CHECK(point_distance(a, b, 2, Metric::manhattan) == doctest::Approx(1.0));
    CHECK(point_distance(a, c, 2, Metric::manhattan) == doctest::Approx(0.3));
    CHECK(point_distance(a, c, 2, Metric::euclidean) == doctest::Approx(0.3));
}

TEST_CASE("constructors are deterministic") {
    const Domain a = build_mask_region(MaskSpec::dumbbell(), 64);
    const Domain b = build_mask_region(MaskSpec::dumbbell(), 64);
    CHECK(a.coords == b.coords);
    CHECK(a.weights == b.weights);
    CHECK(a.descriptor == b.descriptor);
}
