#pragma once

#include <stdexcept>
#include <string>

namespace levyprobe {

// Numeric failure at runtime: quadrature non-convergence, bracket/overflow
// guards, degenerate tables.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Config file rejected; message carries line/field diagnostics.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Probe drawing found no epoch inside the observation window.
struct EmptyProbeSample : std::runtime_error {
    explicit EmptyProbeSample(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levyprobe
