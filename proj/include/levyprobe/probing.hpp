#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "levyprobe/rng.hpp"
#include "levyprobe/workload.hpp"

namespace levyprobe {

// Exponential probe epochs rounded to the observation grid. Probes landing on
// the same grid point are all kept; the estimator sums over probe indices.
struct ProbeSample {
    double xi = 0.0;
    double delta = 0.0;
    std::vector<double> probe_times;           // S_1 < S_2 < ... (exact epochs)
    std::vector<std::size_t> rounded_indices;  // k_i with S_i^Delta = k_i delta
    std::vector<double> values;                // size n+1; values[0] = V(0)
    double zero_tolerance = 0.0;               // 0: bit-exact zero test
    std::size_t n() const { return probe_times.size(); }
};

struct Estimate {
    double alpha = 0.0;
    double phi_hat = 0.0;
    std::size_t n = 0;
    double zero_fraction = 0.0;  // n^-1 sum 1{V_i = 0}, i = 1..n
    double lst_mean = 0.0;       // n^-1 sum exp(-alpha V_i), i = 1..n
    std::optional<double> sigma_hat_sq;
    struct ConfidenceInterval {
        double lo;
        double hi;
        double level;
    };
    std::optional<ConfidenceInterval> ci;
};

struct ResampleEstimate {
    struct Iteration {
        double phi_hat;
        std::size_t n;
    };
    std::vector<Iteration> per_iteration;
    double mean_phi = 0.0;  // plain average of per-iteration phi_hat
    std::size_t k() const { return per_iteration.size(); }
};

// Nearest multiple of delta, ties rounded up (deterministic even though ties
// happen with probability zero for exponential epochs).
std::size_t nearest_grid_index(double t, double delta);

// Cumulates rate-xi exponentials, rounds each epoch to the nearest grid index
// (half up), and stops at the first epoch whose rounded time exceeds the
// horizon. Throws EmptyProbeSample when no probe lands in [0, horizon].
ProbeSample draw_probes(const GridObservations& grid, double horizon, double xi, Philox& rng);

// The moment-equation estimator from a value vector (values[0] = V at time
// zero, values[1..n] at the probe epochs).
Estimate estimate_from_values(std::span<const double> values, double xi, double alpha,
                              double zero_tolerance = 0.0);
Estimate estimate_grid(const ProbeSample& sample, double alpha);
// Same statistic on exact (unrounded) probe values; the Delta -> 0 reference.
Estimate estimate_poisson(std::span<const double> values, double xi, double alpha);

// Martingale-difference residuals at a hypothesised exponent value:
// Z_i = (xi - p) e^{-a V_i} - xi e^{-a V_{i-1}} + a 1{V_i = 0}, i = 1..n.
std::vector<double> residuals(const ProbeSample& sample, double alpha, double phi_value);

// CLT variance with the exponent and atom replaced by their plug-ins from the
// same sample; requires at least one observed emptiness.
double plugin_variance(const ProbeSample& sample, double alpha);

std::pair<double, double> confidence_interval(const ProbeSample& sample, double alpha,
                                              double level);

// estimate_grid plus plug-in variance and symmetric normal interval.
Estimate estimate_with_ci(const ProbeSample& sample, double alpha, double level);

// Average of k independent probe draws on the same fixed grid. Empty draws
// are retried up to 100 times each.
ResampleEstimate resample_estimate(const GridObservations& grid, double horizon, double xi,
                                   std::size_t k, double alpha, Philox& rng);

}  // namespace levyprobe
