#include "levyprobe/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levyprobe {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2)
        throw std::invalid_argument("MonotoneCubic: need at least two matching knots");
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("MonotoneCubic: knots must be strictly increasing");
        if (y_[i] < y_[i - 1])
            throw std::invalid_argument("MonotoneCubic: values must be nondecreasing");
    }
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    slope_[0] = d[0];
    slope_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] <= 0.0 || d[i] <= 0.0) {
            slope_[i] = 0.0;  // flat or sign change: clamp to preserve monotonicity
        } else {
            // Fritsch-Butland weighted harmonic mean, <= 3 min(d_{i-1}, d_i)
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = 3.0 * (h[i - 1] + h[i]) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

double MonotoneCubic::integral() const {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
        const double h = x_[k + 1] - x_[k];
        total += h * 0.5 * (y_[k] + y_[k + 1]) + h * h * (slope_[k] - slope_[k + 1]) / 12.0;
    }
    return total;
}

}  // namespace levyprobe
