#include "levyprobe/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace levyprobe {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;  // target in (0, 0.5]
    // Newton on the lower tail with a bisection safeguard.
    double lo = -40.0, hi = 0.0;
    double z = -std::sqrt(std::max(-2.0 * std::log(q), 1e-12));
    if (z <= lo || z >= hi) z = -1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double diff = normal_cdf(z) - q;
        if (diff > 0.0) hi = z; else lo = z;
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * z * z);
        double next = z - diff / pdf;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z))) {
            z = next;
            break;
        }
        z = next;
    }
    return upper ? -z : z;
}

}  // namespace levyprobe
