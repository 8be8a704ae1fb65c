#include "levyprobe/workload.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "levyprobe/csv.hpp"
#include "levyprobe/errors.hpp"

namespace levyprobe {

WorkloadPath simulate_path(std::span<const CompoundPoissonSpec> inputs, double horizon,
                           double v0, Philox& rng, const SimulationLimits& limits) {
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_path: horizon must be positive");
    if (v0 < 0.0) throw std::invalid_argument("simulate_path: v0 must be nonnegative");
    double total_rate = 0.0;
    for (const auto& cp : inputs) total_rate += cp.rate;
    if (total_rate * horizon > limits.max_expected_events) {
        std::ostringstream msg;
        msg << "simulate_path: expected event count " << total_rate * horizon
            << " exceeds cap " << limits.max_expected_events;
        throw NumericError(msg.str());
    }

    WorkloadPath path;
    path.v0 = v0;
    path.horizon = horizon;
    path.events.reserve(static_cast<std::size_t>(total_rate * horizon * 1.1) + 16);
    for (const auto& cp : inputs) {
        if (!(cp.rate > 0.0)) continue;
        double t = rng.exponential(cp.rate);
        while (t <= horizon) {
            path.events.push_back({t, cp.jobs.sample(rng)});
            t += rng.exponential(cp.rate);
        }
    }
    if (inputs.size() > 1) {
        std::sort(path.events.begin(), path.events.end(),
                  [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    }
    return path;
}

WorkloadPath simulate_path(const CompoundPoissonSpec& input, double horizon, double v0,
                           Philox& rng, const SimulationLimits& limits) {
    return simulate_path(std::span<const CompoundPoissonSpec>(&input, 1), horizon, v0, rng,
                         limits);
}

double workload_at(const WorkloadPath& path, double t) {
    if (t < 0.0 || t > path.horizon)
        throw std::domain_error("workload_at: t outside [0, horizon]");
    double v = path.v0;
    double clock = 0.0;
    for (const auto& ev : path.events) {
        if (ev.time > t) break;
        v = std::max(v - (ev.time - clock), 0.0) + ev.size;
        clock = ev.time;
    }
    return std::max(v - (t - clock), 0.0);
}

std::vector<double> workload_at(const WorkloadPath& path, std::span<const double> sorted_times) {
    std::vector<double> out;
    out.reserve(sorted_times.size());
    double v = path.v0;   // value right after the last applied event
    double clock = 0.0;   // time of the last applied event
    std::size_t next = 0;
    for (double t : sorted_times) {
        if (t < 0.0 || t > path.horizon)
            throw std::domain_error("workload_at: t outside [0, horizon]");
        if (!out.empty() && t < clock)
            throw std::invalid_argument("workload_at: query times must be nondecreasing");
        while (next < path.events.size() && path.events[next].time <= t) {
            const auto& ev = path.events[next];
            v = std::max(v - (ev.time - clock), 0.0) + ev.size;
            clock = ev.time;
            ++next;
        }
        out.push_back(std::max(v - (t - clock), 0.0));
    }
    return out;
}

GridObservations sample_grid(const WorkloadPath& path, double delta) {
    if (!(delta > 0.0) || delta > path.horizon)
        throw std::invalid_argument("sample_grid: need 0 < delta <= horizon");
    // grid times are exact multiples i*delta; the floor computation is nudged
    // so that a representable endpoint is never dropped
    std::size_t m = static_cast<std::size_t>(std::floor(path.horizon / delta));
    while ((static_cast<double>(m) + 1.0) * delta <= path.horizon) ++m;
    while (m > 0 && static_cast<double>(m) * delta > path.horizon) --m;
    std::vector<double> times(m + 1);
    for (std::size_t i = 0; i <= m; ++i) times[i] = static_cast<double>(i) * delta;
    GridObservations grid;
    grid.delta = delta;
    grid.values = workload_at(path, times);
    return grid;
}

double stationary_init(const CompoundPoissonSpec& input, Philox& rng) {
    if (input.jobs.kind() != JobDistribution::Kind::Exponential)
        throw std::invalid_argument(
            "stationary_init: exact sampler requires exponential jobs; use burn_in");
    const double eta = input.jobs.exponential_rate();
    const double rho = input.rate / eta;
    if (!(rho < 1.0)) throw std::invalid_argument("stationary_init: unstable input");
    // Geometric number of ladder heights; the integrated tail of an
    // exponential is the same exponential.
    double v = 0.0;
    while (rng.bernoulli(rho)) v += rng.exponential(eta);
    return v;
}

double burn_in(std::span<const CompoundPoissonSpec> inputs, Philox& rng,
               std::optional<double> warmup) {
    double mean_rate = 0.0;
    for (const auto& cp : inputs) mean_rate += cp.rate * cp.jobs.mean();
    if (!(mean_rate < 1.0)) throw std::invalid_argument("burn_in: unstable input");
    const double horizon = warmup.value_or(50.0 / (1.0 - mean_rate));
    WorkloadPath path = simulate_path(inputs, horizon, 0.0, rng);
    return workload_at(path, horizon);
}

double burn_in(const CompoundPoissonSpec& input, Philox& rng, std::optional<double> warmup) {
    return burn_in(std::span<const CompoundPoissonSpec>(&input, 1), rng, warmup);
}

void write_grid_csv(const GridObservations& grid, std::ostream& out) {
    out << "i,t,v\n";
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        out << i << ',' << format_double(static_cast<double>(i) * grid.delta) << ','
            << format_double(grid.values[i]) << '\n';
    }
}

}  // namespace levyprobe
