#pragma once

#include <cstddef>
#include <vector>

namespace levyprobe {

// Monotone cubic Hermite interpolant (Fritsch-Butland slopes). Given strictly
// increasing knots x and nondecreasing values y, the interpolant is
// nondecreasing on the whole range; evaluation clamps outside [x0, xN].
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    // Exact integral of the interpolant over [x0, xN].
    double integral() const;

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::vector<double> x_, y_, slope_;
};

}  // namespace levyprobe
