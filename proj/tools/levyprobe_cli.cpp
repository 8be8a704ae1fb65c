// Batch front end: parses an experiment config, runs the requested
// experiment, and writes CSV to --out (or stdout).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "levyprobe/config.hpp"
#include "levyprobe/errors.hpp"
#include "levyprobe/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--threads", args.threads, "worker threads for replicated experiments");
}

levyprobe::ExperimentConfig load(const CommonArgs& args) {
    levyprobe::ExperimentConfig config = levyprobe::load_config(args.config_path);
    if (args.seed) config.seed = *args.seed;
    return config;
}

template <typename WriteFn>
void emit(const CommonArgs& args, WriteFn&& write) {
    if (args.out_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + args.out_path + "'");
    write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and input estimation for Levy-driven storage systems"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* simulate = app.add_subcommand("simulate", "simulate one path and export the grid");
    auto* estimate = app.add_subcommand("estimate", "one simulated path, one probe draw");
    auto* consistency =
        app.add_subcommand("consistency", "estimation error over a doubling-horizon schedule");
    auto* coverage =
        app.add_subcommand("coverage", "confidence interval coverage over replications");
    auto* resample = app.add_subcommand("resample", "resampling estimator dispersion");
    auto* figures = app.add_subcommand("figures", "exponent and estimator curves");
    for (auto* cmd : {simulate, estimate, consistency, coverage, resample, figures})
        add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const levyprobe::RunOptions options{args.threads};
        if (simulate->parsed()) {
            const auto grid = levyprobe::run_simulate(load(args));
            emit(args, [&](std::ostream& out) { levyprobe::write_grid_csv(grid, out); });
        } else if (estimate->parsed()) {
            const auto report = levyprobe::run_estimate(load(args));
            emit(args, [&](std::ostream& out) { levyprobe::write_report_csv(report, out); });
        } else if (consistency->parsed()) {
            const auto report = levyprobe::run_consistency(load(args));
            emit(args, [&](std::ostream& out) { levyprobe::write_report_csv(report, out); });
        } else if (coverage->parsed()) {
            const auto report = levyprobe::run_coverage(load(args), options);
            emit(args, [&](std::ostream& out) { levyprobe::write_report_csv(report, out); });
        } else if (resample->parsed()) {
            const auto report = levyprobe::run_resampling(load(args), options);
            emit(args, [&](std::ostream& out) { levyprobe::write_report_csv(report, out); });
        } else if (figures->parsed()) {
            const auto report = levyprobe::run_figures(load(args));
            emit(args, [&](std::ostream& out) { levyprobe::write_figure_csv(report, out); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
