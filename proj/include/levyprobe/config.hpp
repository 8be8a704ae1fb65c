#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levyprobe/subordinator.hpp"

namespace levyprobe {

enum class InitKind { Stationary, BurnIn, Fixed };

// Parsed experiment description; see the README for the config grammar.
struct ExperimentConfig {
    SubordinatorSpec model;
    double epsilon = 1e-5;                // truncation threshold for gamma/IG parts
    double xi = 1.0;                      // probe rate
    std::optional<double> delta;          // absent: grid-width heuristic
    double horizon = 0.0;                 // T
    std::vector<double> alpha_grid;
    std::size_t resamples = 1;            // K
    std::size_t replications = 1;         // R
    std::uint64_t seed = 0;
    InitKind init = InitKind::BurnIn;
    double init_value = 0.0;              // used when init = fixed
    // optional extensions
    std::vector<double> delta_grid;       // empty: use {delta}
    std::vector<std::size_t> k_grid;      // empty: use {resamples}
    double ci_level = 0.95;
    std::size_t table_size = 1024;
    std::optional<double> burn_in_time;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace levyprobe
