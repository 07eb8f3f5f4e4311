#pragma once

// Experiment configuration (JSON), solver orchestration, artifact emission,
// and the analytic verification suites behind the CLI.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "oracles.hpp"
#include "pointset.hpp"
#include "rearrange.hpp"

namespace kemax {

using json = nlohmann::json;

namespace detail {

// Configs are reproducible recipes: unknown keys are rejected outright.
inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& key : allowed)
            if (it.key() == key) {
                ok = true;
                break;
            }
        if (!ok) throw std::invalid_argument("unknown key \"" + it.key() + "\" in " + where);
    }
}

inline double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw std::invalid_argument("missing numeric \"" + key + "\" in " + where);
    return obj[key].get<double>();
}

inline int require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        throw std::invalid_argument("missing integer \"" + key + "\" in " + where);
    return obj[key].get<int>();
}

}  // namespace detail

inline KernelSpec kernel_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw std::invalid_argument("kernel spec: expected object with \"family\"");
    const std::string family = spec["family"].get<std::string>();
    if (family == "riesz") {
        detail::reject_unknown_keys(spec, {"family", "s"}, "kernel");
        return KernelSpec::riesz(detail::require_number(spec, "s", "kernel"));
    }
    if (family == "exponential") {
        detail::reject_unknown_keys(spec, {"family", "sigma"}, "kernel");
        return KernelSpec::exponential(detail::require_number(spec, "sigma", "kernel"));
    }
    if (family == "gaussian") {
        detail::reject_unknown_keys(spec, {"family", "tau"}, "kernel");
        return KernelSpec::gaussian(detail::require_number(spec, "tau", "kernel"));
    }
    if (family == "truncated_linear") {
        detail::reject_unknown_keys(spec, {"family", "c"}, "kernel");
        return KernelSpec::truncated_linear(detail::require_number(spec, "c", "kernel"));
    }
    if (family == "constant") {
        detail::reject_unknown_keys(spec, {"family"}, "kernel");
        return KernelSpec::constant();
    }
    throw std::invalid_argument("kernel spec: unknown family \"" + family + "\"");
}

inline json kernel_to_json(const KernelSpec& k) {
    switch (k.family) {
        case KernelFamily::riesz: return {{"family", "riesz"}, {"s", k.param}};
        case KernelFamily::exponential: return {{"family", "exponential"}, {"sigma", k.param}};
        case KernelFamily::gaussian: return {{"family", "gaussian"}, {"tau", k.param}};
        case KernelFamily::truncated_linear:
            return {{"family", "truncated_linear"}, {"c", k.param}};
        case KernelFamily::constant: return {{"family", "constant"}};
    }
    return {};
}

inline Domain domain_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("shape"))
        throw std::invalid_argument("domain spec: expected object with \"shape\"");
    const std::string shape = spec["shape"].get<std::string>();
    const std::string where = "domain(" + shape + ")";
    auto bbox_or_default = [&](const MaskSpec& mask) {
        if (!spec.contains("bbox")) return mask.default_bbox();
        const auto& bb = spec["bbox"];
        if (!bb.is_array() || bb.size() != 4)
            throw std::invalid_argument("domain: bbox must be [xmin,xmax,ymin,ymax]");
        return std::array<double, 4>{bb[0].get<double>(), bb[1].get<double>(),
                                     bb[2].get<double>(), bb[3].get<double>()};
    };
    if (shape == "interval") {
        detail::reject_unknown_keys(spec, {"shape", "a", "b", "cells"}, where);
        return build_interval(detail::require_number(spec, "a", where),
                              detail::require_number(spec, "b", where),
                              detail::require_int(spec, "cells", where));
    }
    if (shape == "interval_union") {
        detail::reject_unknown_keys(spec, {"shape", "segments", "cells_per_unit"}, where);
        if (!spec.contains("segments") || !spec["segments"].is_array())
            throw std::invalid_argument("domain: segments must be an array of [a,b]");
        std::vector<std::array<double, 2>> segs;
        for (const auto& s : spec["segments"]) {
            if (!s.is_array() || s.size() != 2)
                throw std::invalid_argument("domain: each segment must be [a,b]");
            segs.push_back({s[0].get<double>(), s[1].get<double>()});
        }
        return build_interval_union(segs, detail::require_int(spec, "cells_per_unit", where));
    }
    if (shape == "disk") {
        detail::reject_unknown_keys(spec, {"shape", "radius", "resolution", "bbox"}, where);
        const MaskSpec mask = MaskSpec::disk(detail::require_number(spec, "radius", where));
        return build_mask_region(mask, bbox_or_default(mask),
                                 detail::require_int(spec, "resolution", where));
    }
    if (shape == "annulus") {
        detail::reject_unknown_keys(spec, {"shape", "inner", "outer", "resolution", "bbox"}, where);
        const MaskSpec mask = MaskSpec::annulus(detail::require_number(spec, "inner", where),
                                                detail::require_number(spec, "outer", where));
        return build_mask_region(mask, bbox_or_default(mask),
                                 detail::require_int(spec, "resolution", where));
    }
    if (shape == "clover") {
        detail::reject_unknown_keys(spec, {"shape", "resolution", "bbox"}, where);
        const MaskSpec mask = MaskSpec::clover();
        return build_mask_region(mask, bbox_or_default(mask),
                                 detail::require_int(spec, "resolution", where));
    }
    if (shape == "dumbbell") {
        detail::reject_unknown_keys(spec, {"shape", "resolution", "bbox"}, where);
        const MaskSpec mask = MaskSpec::dumbbell();
        return build_mask_region(mask, bbox_or_default(mask),
                                 detail::require_int(spec, "resolution", where));
    }
    if (shape == "ellipse") {
        detail::reject_unknown_keys(spec, {"shape", "eps", "resolution", "bbox"}, where);
        const MaskSpec mask = MaskSpec::ellipse(detail::require_number(spec, "eps", where));
        return build_mask_region(mask, bbox_or_default(mask),
                                 detail::require_int(spec, "resolution", where));
    }
    if (shape == "circle") {
        detail::reject_unknown_keys(spec, {"shape", "nodes"}, where);
        return build_circle(detail::require_int(spec, "nodes", where));
    }
    if (shape == "cross") {
        detail::reject_unknown_keys(spec, {"shape", "half_length", "cells_per_axis"}, where);
        return build_cross(detail::require_number(spec, "half_length", where),
                           detail::require_int(spec, "cells_per_axis", where));
    }
    throw std::invalid_argument("domain spec: unknown shape \"" + shape + "\"");
}

struct ExperimentConfig {
    json domain_spec;
    json kernel_spec;
    json bounds_spec;
    double tol = 0.0;
    int max_iter = 500;
    std::uint64_t seed = 0;
    std::string init_mode = "random";  // random | uniform | file
    std::string init_file;
    std::string output_dir;
    int snapshot_every = 0;

    json echo() const {
        json out;
        out["domain"] = domain_spec;
        out["kernel"] = kernel_spec;
        out["bounds"] = bounds_spec;
        out["solver"] = {{"tol", tol},
                         {"max_iter", max_iter},
                         {"seed", seed},
                         {"init", init_mode}};
        if (init_mode == "file") out["solver"]["init_file"] = init_file;
        if (!output_dir.empty()) out["output_dir"] = output_dir;
        if (snapshot_every > 0) out["snapshot_every"] = snapshot_every;
        return out;
    }
};

inline ExperimentConfig experiment_config_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
    detail::reject_unknown_keys(
        doc, {"domain", "kernel", "bounds", "solver", "output_dir", "snapshot_every"}, "config");
    if (!doc.contains("domain") || !doc.contains("kernel") || !doc.contains("bounds"))
        throw std::invalid_argument("config: requires \"domain\", \"kernel\", \"bounds\"");
    ExperimentConfig cfg;
    cfg.domain_spec = doc["domain"];
    cfg.kernel_spec = doc["kernel"];
    cfg.bounds_spec = doc["bounds"];
    const json& bounds = cfg.bounds_spec;
    const bool direct = bounds.contains("rho_plus") || bounds.contains("rho_minus");
    const bool bridged = bounds.contains("r") || bounds.contains("R") || bounds.contains("d");
    if (direct == bridged)
        throw std::invalid_argument(
            "config: bounds must give exactly one of {rho_plus, rho_minus} or {r, R, d}");
    if (direct)
        detail::reject_unknown_keys(bounds, {"rho_plus", "rho_minus"}, "bounds");
    else
        detail::reject_unknown_keys(bounds, {"r", "R", "d"}, "bounds");
    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        detail::reject_unknown_keys(s, {"tol", "max_iter", "seed", "init", "init_file"}, "solver");
        if (s.contains("tol")) cfg.tol = s["tol"].get<double>();
        if (s.contains("max_iter")) cfg.max_iter = s["max_iter"].get<int>();
        if (s.contains("seed")) cfg.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("init")) cfg.init_mode = s["init"].get<std::string>();
        if (s.contains("init_file")) cfg.init_file = s["init_file"].get<std::string>();
        if (cfg.init_mode != "random" && cfg.init_mode != "uniform" && cfg.init_mode != "file")
            throw std::invalid_argument("config: init must be random, uniform, or file");
        if (cfg.init_mode == "file" && cfg.init_file.empty())
            throw std::invalid_argument("config: init=file requires init_file");
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("snapshot_every")) cfg.snapshot_every = doc["snapshot_every"].get<int>();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json doc = json::parse(in);
    return experiment_config_from_json(doc);
}

struct ResolvedBounds {
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

inline ResolvedBounds resolve_bounds(const json& bounds) {
    ResolvedBounds res;
    if (bounds.contains("rho_plus")) {
        res.rho_plus = detail::require_number(bounds, "rho_plus", "bounds");
        res.rho_minus = detail::require_number(bounds, "rho_minus", "bounds");
    } else {
        const BridgeBounds b =
            parameter_bridge(detail::require_number(bounds, "r", "bounds"),
                             detail::require_number(bounds, "R", "bounds"),
                             detail::require_int(bounds, "d", "bounds"));
        res.rho_plus = b.rho_plus;
        res.rho_minus = b.rho_minus;
    }
    return res;
}

// Weighted centroid and measure of the plus set; the summary the report and
// the qualitative tests read.
struct PlusSetSummary {
    double measure = 0.0;
    std::vector<double> centroid;
    int fractional_nodes = 0;
};

inline PlusSetSummary summarize_plus_set(const Domain& dom, const DensityField& rho) {
    PlusSetSummary s;
    s.centroid.assign(dom.ambient_dim, 0.0);
    const auto mask = plus_set_mask(rho);
    const double pad = 1e-12 * std::max(1.0, rho.rho_plus);
    for (std::size_t i = 0; i < dom.node_count(); ++i) {
        const double v = rho.values[i];
        if (v > rho.rho_minus + pad && v < rho.rho_plus - pad) ++s.fractional_nodes;
        if (!mask[i]) continue;
        s.measure += dom.weights[i];
        for (int k = 0; k < dom.ambient_dim; ++k)
            s.centroid[k] += dom.node(i)[k] * dom.weights[i];
    }
    if (s.measure > 0)
        for (double& c : s.centroid) c /= s.measure;
    return s;
}

struct SolveArtifacts {
    DensityField density;
    SolveReport report;
    Domain domain;
    ResolvedBounds bounds;
};

// Runs the configured experiment and, if out_dir is nonempty, writes
// density.csv, density.pgm, trace.csv, report.json, config.echo.json and any
// snapshots. The energy trace is re-checked for monotonicity at write time.
inline SolveArtifacts run_solve_density(const ExperimentConfig& cfg,
                                        const std::string& out_dir_override = "",
                                        int snapshot_override = -1) {
    SolveArtifacts art;
    art.domain = domain_from_json(cfg.domain_spec);
    const KernelSpec kernel = kernel_from_json(cfg.kernel_spec);
    art.bounds = resolve_bounds(cfg.bounds_spec);

    DensityField init;
    if (cfg.init_mode == "uniform") {
        init = uniform_init(art.domain, art.bounds.rho_plus, art.bounds.rho_minus);
    } else if (cfg.init_mode == "file") {
        ParsedDensityCsv parsed = read_domain_csv(cfg.init_file);
        if (parsed.values.size() != art.domain.node_count())
            throw std::invalid_argument("init file does not match the configured domain");
        init.values = std::move(parsed.values);
        init.rho_plus = art.bounds.rho_plus;
        init.rho_minus = art.bounds.rho_minus;
    } else {
        init = random_admissible_init(art.domain, art.bounds.rho_plus, art.bounds.rho_minus,
                                      cfg.seed);
    }

    const std::string out_dir = out_dir_override.empty() ? cfg.output_dir : out_dir_override;
    const int snapshot_every = snapshot_override >= 0 ? snapshot_override : cfg.snapshot_every;
    IterationCallback on_iterate;
    if (!out_dir.empty() && snapshot_every > 0) {
        std::filesystem::create_directories(out_dir);
        on_iterate = [&, out_dir, snapshot_every](int iter, const DensityField& rho,
                                                  const Field&) {
            if (iter % snapshot_every != 0) return;
            char name[32];
            std::snprintf(name, sizeof(name), "density_%04d", iter);
            write_density_csv(art.domain, rho.values,
                              out_dir + "/" + name + ".csv");
            write_text_file(out_dir + "/" + name + ".pgm", density_pgm(art.domain, rho));
        };
    }

    auto [rho, report] = solve(art.domain, kernel, art.bounds.rho_plus, art.bounds.rho_minus,
                               init, cfg.tol, cfg.max_iter, on_iterate);
    art.density = std::move(rho);
    art.report = std::move(report);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        // monotonicity re-check at write time; a violation aborts the run
        for (std::size_t s = 1; s < art.report.energies.size(); ++s) {
            const double prev = art.report.energies[s - 1];
            if (art.report.energies[s] < prev - 1e-12 * std::abs(prev)) {
                std::ostringstream msg;
                msg << "energy trace is not monotone at step " << s << ": "
                    << format_double(prev) << " -> " << format_double(art.report.energies[s]);
                throw std::runtime_error(msg.str());
            }
        }
        write_density_csv(art.domain, art.density.values, out_dir + "/density.csv");
        write_text_file(out_dir + "/density.pgm", density_pgm(art.domain, art.density));
        write_text_file(out_dir + "/trace.csv",
                        trace_csv(art.report.energies, art.report.l1_changes));

        const PlusSetSummary plus = summarize_plus_set(art.domain, art.density);
        json rep;
        rep["domain"] = art.domain.descriptor;
        rep["nodes"] = art.domain.node_count();
        rep["total_measure"] = art.domain.total_measure();
        rep["kernel"] = kernel.name();
        rep["rho_plus"] = art.bounds.rho_plus;
        rep["rho_minus"] = art.bounds.rho_minus;
        rep["target_plus_mass"] =
            target_plus_mass(art.domain, art.bounds.rho_plus, art.bounds.rho_minus);
        rep["iterations"] = art.report.iterations;
        rep["stop_reason"] = stop_reason_name(art.report.stop_reason);
        rep["used_fft"] = art.report.used_fft;
        rep["energies"] = art.report.energies;
        rep["l1_changes"] = art.report.l1_changes;
        rep["final_energy"] = art.report.energies.back();
        rep["kkt_alpha"] = art.report.kkt_alpha;
        rep["kkt_violating_mass"] = art.report.kkt_violating_mass;
        rep["plus_set"] = {{"measure", plus.measure},
                           {"centroid", plus.centroid},
                           {"fractional_nodes", plus.fractional_nodes}};
        write_text_file(out_dir + "/report.json", rep.dump(2) + "\n");
        write_text_file(out_dir + "/config.echo.json", cfg.echo().dump(2) + "\n");
    }
    return art;
}

// ---------------------------------------------------------------------------
// verify-analytic: each suite rebuilds an oracle scenario numerically and
// reports the worst relative (or stated absolute) error against the closed
// form.
// ---------------------------------------------------------------------------

struct VerifyResult {
    std::string name;
    bool pass = false;
    double max_rel_err = 0.0;
    std::string details;
};

namespace detail {

inline DensityField project_by_distance(const Domain& dom, double rho_plus, double rho_minus,
                                        const std::function<double(const double*)>& dist) {
    Field phi(dom.node_count());
    for (std::size_t i = 0; i < dom.node_count(); ++i) phi[i] = -dist(dom.node(i));
    return volume_threshold(dom, phi, rho_plus, rho_minus);
}

}  // namespace detail

inline VerifyResult verify_interval_suite() {
    VerifyResult res;
    res.name = "interval";
    const Domain dom = build_interval(-1.0, 1.0, 800);
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const IntervalOptimum oracle = interval_optimum(1.0, 2.0);
    const DensityField projected = detail::project_by_distance(
        dom, oracle.rho_plus, oracle.rho_minus,
        [&](const double* x) { return std::max(std::abs(x[0]) - oracle.center_length / 2, 0.0); });
    const double e_star = energy(dom, kernel, projected);
    const DensityField init = uniform_init(dom, oracle.rho_plus, oracle.rho_minus);
    auto [rho, report] = solve(dom, kernel, oracle.rho_plus, oracle.rho_minus, init);
    const double e_solver = report.energies.back();
    res.max_rel_err = std::abs(e_solver - e_star) / std::abs(e_star);
    res.pass = report.stop_reason == StopReason::stationary_set && res.max_rel_err <= 1e-6;
    std::ostringstream d;
    d << "solver E=" << format_double(e_solver) << " projected-oracle E=" << format_double(e_star);
    res.details = d.str();
    return res;
}

inline VerifyResult verify_two_interval_suite() {
    VerifyResult res;
    res.name = "two-interval";
    const Domain dom = build_interval_union({{-2.0, -1.0}, {1.0, 2.0}}, 1000);
    const KernelSpec kernel = KernelSpec::truncated_linear(2.0);
    const double rho_plus = 2.0 / 3.0, rho_minus = 1.0 / 3.0;
    for (double t : {0.0, 0.125, 0.25, 0.375, 0.5}) {
        const DensityField rho_t = detail::project_by_distance(
            dom, rho_plus, rho_minus, [&](const double* x) {
                const double dr = std::max(std::abs(x[0] - 1.5) - t, 0.0);
                const double dl = std::max(std::abs(x[0] + 1.5) - (0.5 - t), 0.0);
                return std::min(dr, dl);
            });
        const double e = energy(dom, kernel, rho_t);
        const double oracle = two_interval_energy(t);
        res.max_rel_err = std::max(res.max_rel_err, std::abs(e - oracle) / oracle);
    }
    res.pass = res.max_rel_err <= 1e-3;
    res.details = "E[rho_t] vs quadratic closed form, t in {0,1/8,1/4,3/8,1/2}";
    return res;
}

inline VerifyResult verify_circle_cap_suite() {
    VerifyResult res;
    res.name = "circle-cap";
    const Domain dom = build_circle(1000);
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const double rho_plus = 1.0 / std::numbers::pi, rho_minus = 0.25 / std::numbers::pi;
    const double oracle = circle_cap_measure(rho_plus, rho_minus);
    const DensityField init = random_admissible_init(dom, rho_plus, rho_minus, 0);
    auto [rho, report] = solve(dom, kernel, rho_plus, rho_minus, init);
    const PlusSetSummary plus = summarize_plus_set(dom, rho);
    res.max_rel_err = std::abs(plus.measure - oracle) / oracle;
    // connectivity modulo wraparound
    const auto mask = plus_set_mask(rho);
    int transitions = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] != mask[(i + 1) % mask.size()]) ++transitions;
    res.pass = report.stop_reason == StopReason::stationary_set && transitions == 2 &&
               std::abs(plus.measure - oracle) <= dom.weights[0] + 1e-12;
    std::ostringstream d;
    d << "cap measure " << format_double(plus.measure) << " vs " << format_double(oracle)
      << ", boundary transitions " << transitions;
    res.details = d.str();
    return res;
}

inline VerifyResult verify_disk_suite() {
    VerifyResult res;
    res.name = "disk";
    const Domain dom = build_mask_region(MaskSpec::disk(1.0), 96);
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const double rho_plus = 2.5 / std::numbers::pi, rho_minus = 0.5 / std::numbers::pi;
    const double r_star = ball_optimum_radius(1.0, 2, rho_plus, rho_minus);
    const DensityField init = random_admissible_init(dom, rho_plus, rho_minus, 0);
    auto [rho, report] = solve(dom, kernel, rho_plus, rho_minus, init);
    const auto mask = plus_set_mask(rho);
    double symdiff = 0.0;
    for (std::size_t i = 0; i < dom.node_count(); ++i) {
        const bool inside = std::hypot(dom.node(i)[0], dom.node(i)[1]) <= r_star;
        if (inside != (mask[i] != 0)) symdiff += dom.weights[i];
    }
    res.max_rel_err = symdiff / std::numbers::pi;
    res.pass = report.stop_reason == StopReason::stationary_set && res.max_rel_err <= 0.04;
    std::ostringstream d;
    d << "symmetric difference " << format_double(symdiff) << " vs analytic ball r="
      << format_double(r_star);
    res.details = d.str();
    return res;
}

inline VerifyResult verify_cross_suite() {
    VerifyResult res;
    res.name = "cross";
    const Domain dom = build_cross(1.0, 300);
    const KernelSpec kernel = KernelSpec::truncated_linear(2.0);
    const double rho_plus = 0.5, rho_minus = 0.125;
    const double t_star = cross_optimum_t(rho_plus, rho_minus);
    const DensityField init = uniform_init(dom, rho_plus, rho_minus);
    auto [rho, report] = solve(dom, kernel, rho_plus, rho_minus, init);
    const auto mask = plus_set_mask(rho);
    double max_coord = 0.0;
    for (std::size_t i = 0; i < dom.node_count(); ++i)
        if (mask[i])
            max_coord = std::max(max_coord, std::abs(dom.node(i)[0]) + std::abs(dom.node(i)[1]));
    const double cell = dom.weights[0];
    res.max_rel_err = std::abs(max_coord - t_star) / t_star;
    res.pass = report.stop_reason == StopReason::stationary_set &&
               std::abs(max_coord - t_star) <= 2.0 * cell;
    std::ostringstream d;
    d << "plus segments extend to " << format_double(max_coord) << " vs t=" << format_double(t_star);
    res.details = d.str();
    return res;
}

inline VerifyResult verify_interval4_suite() {
    VerifyResult res;
    res.name = "interval4";
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const Domain covering_grid = build_interval(-1.0, 1.0, 2000);
    bool all_ok = true;
    for (const auto& pr : std::vector<std::array<double, 2>>{
             {2.0, 2.0}, {0.5, 2.5}, {0.5, 1.5}, {0.1, 1.1}}) {
        const Interval4Optimum oracle = interval4_optimum(pr[0], pr[1], kernel);
        const BruteForceResult bf =
            brute_force_interval(4, {pr[0], pr[1], 1}, kernel, 81, 3);
        const double e_oracle = discrete_energy(oracle.config, kernel);
        const double gap = bf.energy - e_oracle;  // >= -1e-9 required
        res.max_rel_err = std::max(res.max_rel_err, std::abs(gap) / std::abs(e_oracle));
        if (gap < -1e-9) all_ok = false;
        const AdmissibilityReport adm =
            is_admissible(oracle.config, {pr[0], pr[1], 1}, covering_grid);
        if (!adm.admissible) all_ok = false;
    }
    res.pass = all_ok;
    res.details = "brute force vs four-point closed form on the four parameter pairs";
    return res;
}

inline VerifyResult verify_delta_limit_suite() {
    VerifyResult res;
    res.name = "delta-limit";
    const Domain dom = build_mask_region(MaskSpec::disk(1.0), 64);
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const std::size_t idx = delta_limit_center(dom, kernel);
    const double dist = std::hypot(dom.node(idx)[0], dom.node(idx)[1]);
    res.max_rel_err = dist;
    res.pass = dist <= dom.grid->h * std::numbers::sqrt2;
    std::ostringstream d;
    d << "potential argmax at distance " << format_double(dist) << " from the center";
    res.details = d.str();
    return res;
}

inline VerifyResult verify_bridge_suite() {
    VerifyResult res;
    res.name = "bridge";
    const KernelSpec kernel = KernelSpec::exponential(1.0);
    const Domain dom = build_interval(-1.0, 1.0, 2000);
    const IntervalOptimum oracle = interval_optimum(1.0, 2.0);
    const DensityField projected = detail::project_by_distance(
        dom, oracle.rho_plus, oracle.rho_minus,
        [&](const double* x) { return std::max(std::abs(x[0]) - oracle.center_length / 2, 0.0); });
    const double e_star = energy(dom, kernel, projected);
    double prev_gap = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::ostringstream d;
    for (int n : {64, 128, 256}) {
        const Configuration X = construct_1d_sequence(n, 1.0, 2.0);
        const AdmissibilityReport adm = is_admissible(X, {1.0, 2.0, 1}, dom);
        const double e_n = discrete_energy(X, kernel);
        const double gap = std::abs(e_star - e_n);
        if (!adm.admissible || gap > prev_gap || e_n > e_star * 1.02) ok = false;
        res.max_rel_err = std::max(res.max_rel_err, gap / e_star);
        prev_gap = gap;
        d << "n=" << n << " gap=" << format_double(gap) << ' ';
    }
    res.pass = ok;
    res.details = d.str();
    return res;
}

inline std::vector<VerifyResult> run_verify_analytic(const std::string& suite) {
    using Runner = VerifyResult (*)();
    const std::vector<std::pair<std::string, Runner>> suites = {
        {"interval", &verify_interval_suite},
        {"two-interval", &verify_two_interval_suite},
        {"circle-cap", &verify_circle_cap_suite},
        {"disk", &verify_disk_suite},
        {"cross", &verify_cross_suite},
        {"interval4", &verify_interval4_suite},
        {"delta-limit", &verify_delta_limit_suite},
        {"bridge", &verify_bridge_suite},
    };
    std::vector<VerifyResult> results;
    if (suite == "all" || suite.empty()) {
        for (const auto& [name, fn] : suites) results.push_back(fn());
        return results;
    }
    for (const auto& [name, fn] : suites)
        if (name == suite) {
            results.push_back(fn());
            return results;
        }
    throw std::invalid_argument("unknown verify suite \"" + suite + "\"");
}

inline json verify_results_to_json(const std::vector<VerifyResult>& results) {
    json arr = json::array();
    for (const auto& r : results)
        arr.push_back({{"suite", r.name},
                       {"pass", r.pass},
                       {"max_rel_err", r.max_rel_err},
                       {"details", r.details}});
    return arr;
}

// ---------------------------------------------------------------------------
// solve-discrete: brute force for tiny n on [-1,1] with admissibility report
// ---------------------------------------------------------------------------

struct DiscreteArtifacts {
    BruteForceResult result;
    AdmissibilityReport admissibility;
    json report;
};

inline DiscreteArtifacts run_solve_discrete(const json& doc, const std::string& out_dir = "") {
    detail::reject_unknown_keys(
        doc, {"n", "r", "R", "kernel", "coarse", "refine_levels", "covering_cells"}, "config");
    const int n = detail::require_int(doc, "n", "config");
    const double r = detail::require_number(doc, "r", "config");
    const double R = detail::require_number(doc, "R", "config");
    const KernelSpec kernel =
        doc.contains("kernel") ? kernel_from_json(doc["kernel"]) : KernelSpec::exponential(1.0);
    const int coarse = doc.contains("coarse") ? doc["coarse"].get<int>() : 81;
    const int levels = doc.contains("refine_levels") ? doc["refine_levels"].get<int>() : 3;
    const int covering_cells =
        doc.contains("covering_cells") ? doc["covering_cells"].get<int>() : 2000;

    DiscreteArtifacts art;
    art.result = brute_force_interval(n, {r, R, 1}, kernel, coarse, levels);
    const Domain grid = build_interval(-1.0, 1.0, covering_cells);
    art.admissibility = is_admissible(art.result.config, {r, R, 1}, grid);
    art.report = {
        {"n", n},
        {"r", r},
        {"R", R},
        {"kernel", kernel.name()},
        {"energy", art.result.energy},
        {"final_lattice_step", art.result.final_step},
        {"points", art.result.config.coords},
        {"admissible", art.admissibility.admissible},
        {"separation_margin", art.admissibility.separation_margin},
        {"covering_margin", art.admissibility.covering_margin},
        {"covering_tolerance", art.admissibility.covering_tolerance},
        {"covering_uncertain", art.admissibility.uncertain},
    };
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/configuration.csv", configuration_csv(art.result.config));
        write_text_file(out_dir + "/report.json", art.report.dump(2) + "\n");
    }
    return art;
}

// eval-energy: E for a (domain, density, kernel) triple read from files.
inline double run_eval_energy(const std::string& domain_csv_path,
                              const std::string& density_csv_path,
                              const std::string& kernel_json_path) {
    const ParsedDensityCsv dom_file = read_domain_csv(domain_csv_path);
    const ParsedDensityCsv den_file = read_domain_csv(density_csv_path);
    if (den_file.values.empty())
        throw std::invalid_argument("density file has no value column: " + density_csv_path);
    if (den_file.values.size() != dom_file.domain.node_count())
        throw std::invalid_argument("density length does not match domain");
    std::ifstream in(kernel_json_path);
    if (!in) throw std::runtime_error("cannot open: " + kernel_json_path);
    const KernelSpec kernel = kernel_from_json(json::parse(in));
    return energy(dom_file.domain, kernel, den_file.values);
}

}  // namespace kemax
