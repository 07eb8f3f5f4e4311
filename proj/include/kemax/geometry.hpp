#pragma once

// Quadrature domains: interval, interval unions, raster masks, circle, cross.
// Midpoint/cell-center rule everywhere; nodes are immutable after construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kemax {

enum class Metric { euclidean, manhattan };

inline const char* metric_name(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "manhattan";
}

// Regular-grid bookkeeping for raster-mask domains (drives the FFT fast path
// and PGM rendering). Node k lives at cell (ix[k], iy[k]) of an nx-by-ny grid
// with square cells of side h anchored at (x0, y0).
struct GridInfo {
    int nx = 0, ny = 0;
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<int> ix, iy;
};

struct Domain {
    std::vector<double> coords;   // flattened, ambient_dim values per node
    std::vector<double> weights;  // d-dimensional quadrature weight per node
    int intrinsic_dim = 1;
    int ambient_dim = 1;
    Metric metric = Metric::euclidean;
    std::string descriptor;
    std::optional<GridInfo> grid;

    std::size_t node_count() const { return weights.size(); }

    const double* node(std::size_t i) const { return coords.data() + i * ambient_dim; }

    double total_measure() const {
        long double s = 0.0L;
        for (double w : weights) s += w;
        return static_cast<double>(s);
    }
};

inline double point_distance(const double* a, const double* b, int p, Metric m) {
    if (m == Metric::manhattan) {
        double s = 0.0;
        for (int k = 0; k < p; ++k) s += std::abs(a[k] - b[k]);
        return s;
    }
    if (p == 1) return std::abs(a[0] - b[0]);
    double s = 0.0;
    for (int k = 0; k < p; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double node_distance(const Domain& dom, std::size_t i, std::size_t j) {
    return point_distance(dom.node(i), dom.node(j), dom.ambient_dim, dom.metric);
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

inline Domain build_interval(double a, double b, int n_cells) {
    if (!(a < b)) throw std::invalid_argument("build_interval: requires a < b");
    if (n_cells < 2) throw std::invalid_argument("build_interval: n_cells must be >= 2");
    Domain dom;
    dom.intrinsic_dim = 1;
    dom.ambient_dim = 1;
    const double h = (b - a) / n_cells;
    dom.coords.reserve(n_cells);
    dom.weights.assign(n_cells, h);
    for (int k = 0; k < n_cells; ++k) dom.coords.push_back(a + (k + 0.5) * h);
    std::ostringstream tag;
    tag << "interval[a=" << a << ",b=" << b << ",cells=" << n_cells << "]";
    dom.descriptor = tag.str();
    return dom;
}

inline Domain build_interval_union(const std::vector<std::array<double, 2>>& segments,
                                   int n_cells_per_unit) {
    if (segments.empty()) throw std::invalid_argument("build_interval_union: no segments");
    if (n_cells_per_unit < 1)
        throw std::invalid_argument("build_interval_union: n_cells_per_unit must be >= 1");
    auto sorted = segments;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& s : sorted)
        if (!(s[0] < s[1]))
            throw std::invalid_argument("build_interval_union: segment requires a < b");
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!(sorted[i - 1][1] < sorted[i][0]))
            throw std::invalid_argument("build_interval_union: segments overlap");
    Domain dom;
    dom.intrinsic_dim = 1;
    dom.ambient_dim = 1;
    std::ostringstream tag;
    tag << "interval_union[per_unit=" << n_cells_per_unit;
    for (const auto& s : sorted) {
        const double len = s[1] - s[0];
        const int nc = std::max<int>(1, static_cast<int>(std::llround(len * n_cells_per_unit)));
        const double h = len / nc;
        for (int k = 0; k < nc; ++k) {
            dom.coords.push_back(s[0] + (k + 0.5) * h);
            dom.weights.push_back(h);
        }
        tag << ",[" << s[0] << "," << s[1] << "]";
    }
    tag << "]";
    dom.descriptor = tag.str();
    return dom;
}

// Named raster masks from the experiments; all are subsets of R^2.
struct MaskSpec {
    enum class Shape { disk, annulus, clover, dumbbell, ellipse } shape;
    double p0 = 0.0, p1 = 0.0;  // disk: radius; annulus: inner, outer; ellipse: eps

    static MaskSpec disk(double radius) { return {Shape::disk, radius, 0.0}; }
    static MaskSpec annulus(double inner, double outer) { return {Shape::annulus, inner, outer}; }
    static MaskSpec clover() { return {Shape::clover, 0.0, 0.0}; }
    static MaskSpec dumbbell() { return {Shape::dumbbell, 0.0, 0.0}; }
    static MaskSpec ellipse(double eps) { return {Shape::ellipse, eps, 0.0}; }

    bool contains(double x, double y) const {
        switch (shape) {
            case Shape::disk:
                return x * x + y * y <= p0 * p0;
            case Shape::annulus: {
                const double r2 = x * x + y * y;
                return r2 >= p0 * p0 && r2 <= p1 * p1;
            }
            case Shape::clover:
                return std::hypot(x, y) <= 1.0 + 0.3 * std::cos(4.0 * std::atan2(y, x));
            case Shape::dumbbell:
                return (x - 1) * (x - 1) + y * y <= 0.25 ||
                       (x + 1) * (x + 1) + y * y <= 0.25 ||
                       (std::abs(x) <= 1.0 && std::abs(y) <= 0.1);
            case Shape::ellipse:
                return (1 + p0) * x * x + y * y / (1 + p0) <= 1.0;
        }
        return false;
    }

    // Default bounding boxes, sized to contain each mask with a small margin.
    std::array<double, 4> default_bbox() const {
        switch (shape) {
            case Shape::disk: return {-p0, p0, -p0, p0};
            case Shape::annulus: return {-p1, p1, -p1, p1};
            case Shape::clover: return {-1.3, 1.3, -1.3, 1.3};
            case Shape::dumbbell: return {-1.5, 1.5, -1.5, 1.5};
            case Shape::ellipse: {
                const double s = std::sqrt(1.0 + p0);
                return {-s, s, -s, s};
            }
        }
        return {-1, 1, -1, 1};
    }

    std::string name() const {
        std::ostringstream tag;
        switch (shape) {
            case Shape::disk: tag << "disk[radius=" << p0 << "]"; break;
            case Shape::annulus: tag << "annulus[inner=" << p0 << ",outer=" << p1 << "]"; break;
            case Shape::clover: tag << "clover"; break;
            case Shape::dumbbell: tag << "dumbbell"; break;
            case Shape::ellipse: tag << "ellipse[eps=" << p0 << "]"; break;
        }
        return tag.str();
    }
};

// Square cells over the bbox; a cell belongs to the domain iff its center
// satisfies the mask. Nodes are emitted row-major (y outer, x inner).
inline Domain build_mask_region(const MaskSpec& mask, const std::array<double, 4>& bbox,
                                int resolution) {
    if (resolution < 16) throw std::invalid_argument("build_mask_region: resolution must be >= 16");
    const double xmin = bbox[0], xmax = bbox[1], ymin = bbox[2], ymax = bbox[3];
    if (!(xmin < xmax) || !(ymin < ymax))
        throw std::invalid_argument("build_mask_region: invalid bbox");
    Domain dom;
    dom.intrinsic_dim = 2;
    dom.ambient_dim = 2;
    const double h = (xmax - xmin) / resolution;
    const int ny = static_cast<int>(std::llround((ymax - ymin) / h));
    GridInfo grid;
    grid.nx = resolution;
    grid.ny = ny;
    grid.h = h;
    grid.x0 = xmin;
    grid.y0 = ymin;
    const double cell_area = h * h;
    for (int j = 0; j < ny; ++j) {
        const double y = ymin + (j + 0.5) * h;
        for (int i = 0; i < resolution; ++i) {
            const double x = xmin + (i + 0.5) * h;
            if (!mask.contains(x, y)) continue;
            dom.coords.push_back(x);
            dom.coords.push_back(y);
            dom.weights.push_back(cell_area);
            grid.ix.push_back(i);
            grid.iy.push_back(j);
        }
    }
    if (dom.weights.empty())
        throw std::invalid_argument("build_mask_region: mask is empty within bbox");
    dom.grid = std::move(grid);
    std::ostringstream tag;
    tag << "mask[" << mask.name() << ",res=" << resolution << "]";
    dom.descriptor = tag.str();
    return dom;
}

inline Domain build_mask_region(const MaskSpec& mask, int resolution) {
    return build_mask_region(mask, mask.default_bbox(), resolution);
}

inline Domain build_circle(int n_nodes) {
    if (n_nodes < 8) throw std::invalid_argument("build_circle: n_nodes must be >= 8");
    Domain dom;
    dom.intrinsic_dim = 1;
    dom.ambient_dim = 2;
    const double w = 2.0 * std::numbers::pi / n_nodes;
    for (int k = 0; k < n_nodes; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n_nodes;
        dom.coords.push_back(std::cos(th));
        dom.coords.push_back(std::sin(th));
        dom.weights.push_back(w);
    }
    std::ostringstream tag;
    tag << "circle[nodes=" << n_nodes << "]";
    dom.descriptor = tag.str();
    return dom;
}

// Two coordinate segments [-L,L] on the axes, Manhattan metric. Even cell
// count keeps the two axis discretizations from both placing a node at 0.
inline Domain build_cross(double half_length, int n_cells_per_axis) {
    if (!(half_length > 0)) throw std::invalid_argument("build_cross: half_length must be > 0");
    if (n_cells_per_axis < 2 || n_cells_per_axis % 2 != 0)
        throw std::invalid_argument("build_cross: n_cells_per_axis must be even and >= 2");
    Domain dom;
    dom.intrinsic_dim = 1;
    dom.ambient_dim = 2;
    dom.metric = Metric::manhattan;
    const double h = 2.0 * half_length / n_cells_per_axis;
    for (int k = 0; k < n_cells_per_axis; ++k) {
        dom.coords.push_back(-half_length + (k + 0.5) * h);
        dom.coords.push_back(0.0);
        dom.weights.push_back(h);
    }
    for (int k = 0; k < n_cells_per_axis; ++k) {
        dom.coords.push_back(0.0);
        dom.coords.push_back(-half_length + (k + 0.5) * h);
        dom.weights.push_back(h);
    }
    std::ostringstream tag;
    tag << "cross[half_length=" << half_length << ",cells_per_axis=" << n_cells_per_axis << "]";
    dom.descriptor = tag.str();
    return dom;
}

}  // namespace kemax
