#pragma once

#include <functional>

namespace levyprobe {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    int intervals = 0;
};

// Adaptive Gauss-Kronrod 7-15 on [a,b], worst-interval-first subdivision.
// Throws NumericError when the tolerance cannot be met within max_intervals,
// reporting the tolerance actually achieved.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_tol = 1e-300,
                           int max_intervals = 2000);

// Integral over (a, infinity) for a > 0, after the substitution x = a e^t.
// The substitution tames x^-1 and x^-3/2 blowups at the left endpoint; the
// window-doubling tail scan handles (super)exponential decay on the right.
// Intended for nonnegative integrands.
QuadratureResult integrate_upper_tail(const std::function<double(double)>& f, double a,
                                      double rel_tol = 1e-9);

}  // namespace levyprobe
