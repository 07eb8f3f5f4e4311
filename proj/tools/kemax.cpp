#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include <kemax/runner.hpp>
#include <kemax/threading.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_not_converged = 2;
constexpr int exit_usage = 64;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kemax: kernel energy maximization under density constraints"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (0 = KEMAX_THREADS or hardware)");

    std::string config_path;
    std::string out_dir;
    int snapshot_every = -1;

    CLI::App* solve_cmd =
        app.add_subcommand("solve-density", "run the volume-preserving threshold solver");
    solve_cmd->add_option("config", config_path, "experiment config JSON")->required();
    solve_cmd->add_option("--out", out_dir, "output directory (overrides the config)");
    solve_cmd->add_option("--snapshot-every", snapshot_every,
                          "write density_%04d.{csv,pgm} every K iterations");

    CLI::App* discrete_cmd =
        app.add_subcommand("solve-discrete", "brute-force small interval configurations");
    discrete_cmd->add_option("config", config_path, "discrete config JSON")->required();
    discrete_cmd->add_option("--out", out_dir, "output directory");

    std::string suite = "all";
    CLI::App* verify_cmd =
        app.add_subcommand("verify-analytic", "compare the solver against closed forms");
    verify_cmd->add_option("suite", suite, "suite name")
        ->check(CLI::IsMember({"all", "interval", "two-interval", "circle-cap", "disk", "cross",
                               "interval4", "delta-limit", "bridge"}));
    verify_cmd->add_option("--out", out_dir, "directory for verify.json");

    std::string domain_path, density_path, kernel_path;
    CLI::App* eval_cmd = app.add_subcommand("eval-energy", "evaluate E for a stored density");
    eval_cmd->add_option("domain", domain_path, "domain CSV")->required();
    eval_cmd->add_option("density", density_path, "density CSV")->required();
    eval_cmd->add_option("kernel", kernel_path, "kernel JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (threads > 0) kemax::set_thread_limit(threads);

        if (*solve_cmd) {
            const kemax::ExperimentConfig cfg = kemax::load_experiment_config(config_path);
            const kemax::SolveArtifacts art =
                kemax::run_solve_density(cfg, out_dir, snapshot_every);
            std::printf("stop=%s iterations=%d final_energy=%s kkt_violating_mass=%s\n",
                        kemax::stop_reason_name(art.report.stop_reason), art.report.iterations,
                        kemax::format_double(art.report.energies.back()).c_str(),
                        kemax::format_double(art.report.kkt_violating_mass).c_str());
            return art.report.stop_reason == kemax::StopReason::max_iter ? exit_not_converged
                                                                         : exit_ok;
        }
        if (*discrete_cmd) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config: " + config_path);
            const kemax::json doc = kemax::json::parse(in);
            const kemax::DiscreteArtifacts art = kemax::run_solve_discrete(doc, out_dir);
            std::printf("energy=%s admissible=%s\n",
                        kemax::format_double(art.result.energy).c_str(),
                        art.admissibility.admissible ? "true" : "false");
            return exit_ok;
        }
        if (*verify_cmd) {
            const std::vector<kemax::VerifyResult> results = kemax::run_verify_analytic(suite);
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("%-14s %s  max_rel_err=%s  %s\n", r.name.c_str(),
                            r.pass ? "PASS" : "FAIL", kemax::format_double(r.max_rel_err).c_str(),
                            r.details.c_str());
                all_pass = all_pass && r.pass;
            }
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                kemax::write_text_file(out_dir + "/verify.json",
                                       kemax::verify_results_to_json(results).dump(2) + "\n");
            }
            return all_pass ? exit_ok : exit_error;
        }
        if (*eval_cmd) {
            const double e = kemax::run_eval_energy(domain_path, density_path, kernel_path);
            std::printf("%s\n", kemax::format_double(e).c_str());
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_error;
    }
    return exit_usage;
}
