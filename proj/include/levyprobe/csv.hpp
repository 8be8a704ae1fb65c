#pragma once

#include <optional>
#include <string>

namespace levyprobe {

// Shortest representation that round-trips a double (17 significant digits).
std::string format_double(double v);

// Human-oriented formatting for labels and summary keys.
std::string format_compact(double v);

// Empty string for absent values.
std::string format_optional(const std::optional<double>& v);

}  // namespace levyprobe
