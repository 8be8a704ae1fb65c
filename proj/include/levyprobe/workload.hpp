#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "levyprobe/rng.hpp"
#include "levyprobe/subordinator.hpp"

namespace levyprobe {

struct JumpEvent {
    double time;
    double size;
};

// Exact event representation of the reflected workload over [0, horizon]:
// between jumps the workload drains at unit rate and sticks at zero, at a
// jump it increases by the jump size (cadlag: the post-jump value is V at
// the jump epoch). Everything about the path is reconstructible from
// (v0, events), with no time discretization anywhere.
struct WorkloadPath {
    double v0 = 0.0;
    std::vector<JumpEvent> events;  // strictly increasing times in (0, horizon]
    double horizon = 0.0;
};

struct GridObservations {
    double delta = 0.0;
    std::vector<double> values;  // values[i] = V(i delta), exact zeros preserved
    std::size_t max_index() const { return values.empty() ? 0 : values.size() - 1; }
};

struct SimulationLimits {
    double max_expected_events = 2e7;
};

// Superposition of independent compound Poisson inputs minus unit drain.
WorkloadPath simulate_path(std::span<const CompoundPoissonSpec> inputs, double horizon,
                           double v0, Philox& rng, const SimulationLimits& limits = {});
WorkloadPath simulate_path(const CompoundPoissonSpec& input, double horizon, double v0,
                           Philox& rng, const SimulationLimits& limits = {});

// Exact workload value at t in [0, horizon] by replaying the events.
double workload_at(const WorkloadPath& path, double t);

// One-pass evaluation at nondecreasing query times; bit-identical to the
// single-query replay.
std::vector<double> workload_at(const WorkloadPath& path, std::span<const double> sorted_times);

// values[i] = V(i delta) for i = 0..floor(horizon/delta), single sweep.
GridObservations sample_grid(const WorkloadPath& path, double delta);

// Exact stationary draw for exponential jobs: zero with probability 1 - rho,
// otherwise a geometric number of exponential ladder heights.
double stationary_init(const CompoundPoissonSpec& input, Philox& rng);

// Approximate stationary start for general jobs: simulate from empty for
// warmup time (default 50 relaxation times 1/phi'(0)) and return the
// terminal workload.
double burn_in(std::span<const CompoundPoissonSpec> inputs, Philox& rng,
               std::optional<double> warmup = std::nullopt);
double burn_in(const CompoundPoissonSpec& input, Philox& rng,
               std::optional<double> warmup = std::nullopt);

// CSV with header i,t,v at full double precision.
void write_grid_csv(const GridObservations& grid, std::ostream& out);

}  // namespace levyprobe
