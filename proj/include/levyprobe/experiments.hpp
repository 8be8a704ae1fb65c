#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyprobe/config.hpp"
#include "levyprobe/levy_density.hpp"
#include "levyprobe/probing.hpp"
#include "levyprobe/workload.hpp"

namespace levyprobe {

struct ReportRow {
    std::string experiment;
    double alpha = 0.0;
    double delta = 0.0;
    double xi = 0.0;
    double horizon = 0.0;
    std::size_t n = 0;
    double phi_hat = 0.0;
    std::optional<double> sigma_hat_sq;
    std::optional<double> ci_lo;
    std::optional<double> ci_hi;
    std::optional<double> phi_true;
    std::uint64_t seed = 0;  // substream that produced the row
};

struct ExperimentReport {
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<ReportRow> rows;
};

struct FigureCurvePoint {
    std::string setup;  // "coarse" (T=25, delta=1) or "fine" (T=100, delta=4e-4)
    std::size_t realisation = 0;
    double alpha = 0.0;
    double phi = 0.0;      // closed-form exponent of the configured model
    double phi_eps = 0.0;  // exponent of the truncated approximation
    double phi_hat = 0.0;
    std::optional<double> ci_lo;
    std::optional<double> ci_hi;
    std::size_t n = 0;
};

struct FigureReport {
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<FigureCurvePoint> points;
};

struct RunOptions {
    unsigned threads = 1;
};

// Simulable decomposition of a model: exact compound Poisson parts plus one
// truncated surrogate covering the infinite-activity parts.
struct SimulableModel {
    std::vector<CompoundPoissonSpec> components;
    std::optional<TruncatedCPSpec> truncation;
    double total_rate = 0.0;
    double mean_rate = 0.0;  // E J(1) of the simulated process
};

SimulableModel prepare_simulable(const SubordinatorSpec& spec, double epsilon,
                                 std::size_t table_size);

// Grid width from the config, or the heuristic when delta = auto.
double resolve_delta(const ExperimentConfig& config);

GridObservations run_simulate(const ExperimentConfig& config);
ExperimentReport run_estimate(const ExperimentConfig& config);
ExperimentReport run_consistency(const ExperimentConfig& config);
ExperimentReport run_coverage(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentReport run_resampling(const ExperimentConfig& config, const RunOptions& options = {});
FigureReport run_figures(const ExperimentConfig& config);

void write_report_csv(const ExperimentReport& report, std::ostream& out);
void write_figure_csv(const FigureReport& report, std::ostream& out);

}  // namespace levyprobe
