#include "levyprobe/probing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levyprobe/errors.hpp"
#include "levyprobe/exponent.hpp"
#include "levyprobe/normal.hpp"

namespace levyprobe {

std::size_t nearest_grid_index(double t, double delta) {
    return static_cast<std::size_t>(std::floor(t / delta + 0.5));
}

ProbeSample draw_probes(const GridObservations& grid, double horizon, double xi, Philox& rng) {
    if (!(xi > 0.0)) throw std::invalid_argument("draw_probes: xi must be positive");
    if (grid.values.empty()) throw std::invalid_argument("draw_probes: empty grid");
    const double delta = grid.delta;
    // last grid index inside the horizon
    std::size_t m = static_cast<std::size_t>(std::floor(horizon / delta));
    while ((static_cast<double>(m) + 1.0) * delta <= horizon) ++m;
    while (m > 0 && static_cast<double>(m) * delta > horizon) --m;
    if (m > grid.max_index()) {
        std::ostringstream msg;
        msg << "draw_probes: grid covers up to " << static_cast<double>(grid.max_index()) * delta
            << " but horizon is " << horizon;
        throw std::invalid_argument(msg.str());
    }

    ProbeSample sample;
    sample.xi = xi;
    sample.delta = delta;
    sample.values.push_back(grid.values[0]);
    double s = 0.0;
    for (;;) {
        s += rng.exponential(xi);
        const std::size_t k = nearest_grid_index(s, delta);
        if (k > m) break;  // first epoch beyond the horizon is discarded
        sample.probe_times.push_back(s);
        sample.rounded_indices.push_back(k);
        sample.values.push_back(grid.values[k]);
    }
    if (sample.probe_times.empty())
        throw EmptyProbeSample("draw_probes: no probe landed in [0, horizon]");
    return sample;
}

Estimate estimate_from_values(std::span<const double> values, double xi, double alpha,
                              double zero_tolerance) {
    if (values.size() < 2)
        throw std::invalid_argument("estimate_from_values: need V(0) plus at least one probe");
    if (!(alpha > 0.0)) throw std::invalid_argument("estimate_from_values: alpha must be positive");
    const std::size_t n = values.size() - 1;
    double lst_sum = 0.0;
    std::size_t zeros = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        lst_sum += std::exp(-alpha * values[i]);
        if (values[i] <= zero_tolerance) ++zeros;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    Estimate est;
    est.alpha = alpha;
    est.n = n;
    est.zero_fraction = static_cast<double>(zeros) * inv_n;
    est.lst_mean = lst_sum * inv_n;
    // positive in exact arithmetic; can only vanish through exp() underflow
    if (!(est.lst_mean > 0.0))
        throw NumericError("estimate: transform average underflowed to zero; reduce alpha");
    const double endpoint =
        xi * inv_n * (std::exp(-alpha * values[n]) - std::exp(-alpha * values[0]));
    est.phi_hat = (endpoint + alpha * est.zero_fraction) / est.lst_mean;
    return est;
}

Estimate estimate_grid(const ProbeSample& sample, double alpha) {
    return estimate_from_values(sample.values, sample.xi, alpha, sample.zero_tolerance);
}

Estimate estimate_poisson(std::span<const double> values, double xi, double alpha) {
    return estimate_from_values(values, xi, alpha, 0.0);
}

std::vector<double> residuals(const ProbeSample& sample, double alpha, double phi_value) {
    const std::size_t n = sample.n();
    if (n == 0) throw std::invalid_argument("residuals: empty sample");
    std::vector<double> z(n);
    double prev = std::exp(-alpha * sample.values[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        const double cur = std::exp(-alpha * sample.values[i]);
        const double zero = sample.values[i] <= sample.zero_tolerance ? 1.0 : 0.0;
        z[i - 1] = (sample.xi - phi_value) * cur - sample.xi * prev + alpha * zero;
        prev = cur;
    }
    return z;
}

double plugin_variance(const ProbeSample& sample, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("plugin_variance: alpha must be positive");
    const Estimate at_alpha = estimate_grid(sample, alpha);
    if (at_alpha.zero_fraction <= 0.0)
        throw NumericError("plugin_variance: no emptiness observed; variance plug-in unavailable");
    const Estimate at_double = estimate_grid(sample, 2.0 * alpha);
    if (at_double.phi_hat == 0.0)
        throw NumericError("plugin_variance: degenerate plug-in at 2 alpha");
    // finite-sample plug-ins can push the formula slightly negative
    return std::max(avar_formula(at_alpha.phi_hat, at_double.phi_hat, at_alpha.zero_fraction,
                                 alpha, sample.xi),
                    0.0);
}

std::pair<double, double> confidence_interval(const ProbeSample& sample, double alpha,
                                              double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval: level in (0,1)");
    const Estimate est = estimate_grid(sample, alpha);
    const double var = plugin_variance(sample, alpha);
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(std::max(var, 0.0) / static_cast<double>(est.n));
    return {est.phi_hat - half, est.phi_hat + half};
}

Estimate estimate_with_ci(const ProbeSample& sample, double alpha, double level) {
    Estimate est = estimate_grid(sample, alpha);
    const double var = plugin_variance(sample, alpha);
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(std::max(var, 0.0) / static_cast<double>(est.n));
    est.sigma_hat_sq = var;
    est.ci = Estimate::ConfidenceInterval{est.phi_hat - half, est.phi_hat + half, level};
    return est;
}

ResampleEstimate resample_estimate(const GridObservations& grid, double horizon, double xi,
                                   std::size_t k, double alpha, Philox& rng) {
    if (k == 0) throw std::invalid_argument("resample_estimate: k >= 1");
    ResampleEstimate result;
    result.per_iteration.reserve(k);
    double sum = 0.0;
    for (std::size_t iter = 0; iter < k; ++iter) {
        ProbeSample sample;
        bool drawn = false;
        for (int attempt = 0; attempt < 100 && !drawn; ++attempt) {
            try {
                sample = draw_probes(grid, horizon, xi, rng);
                drawn = true;
            } catch (const EmptyProbeSample&) {
            }
        }
        if (!drawn)
            throw EmptyProbeSample(
                "resample_estimate: 100 consecutive empty probe draws; horizon too short");
        const Estimate est = estimate_grid(sample, alpha);
        result.per_iteration.push_back({est.phi_hat, est.n});
        sum += est.phi_hat;
    }
    result.mean_phi = sum / static_cast<double>(k);
    return result;
}

}  // namespace levyprobe
