#pragma once

#include "levyprobe/subordinator.hpp"

namespace levyprobe {

// Levy exponent phi(alpha) = log E exp(-alpha X(1)) of the net input
// X(t) = J(t) - t. phi(0) = 0, phi is strictly increasing and unbounded for
// stable models. Closed forms per component; truncated components evaluated
// by quadrature of the jump density.
double phi(const NetInputModel& model, double alpha);

// Inverse of phi on (0, infinity); |phi(psi(xi)) - xi| <= 1e-10 max(1, xi).
double psi(const NetInputModel& model, double xi);

// E exp(-alpha V(infinity)) = alpha phi'(0) / phi(alpha); equals 1 at alpha=0.
double stationary_lst(const NetInputModel& model, double alpha);

// pi({0}) = phi'(0) = 1 - E J(1).
double stationary_atom(const NetInputModel& model);

// E_x exp(-alpha V(T)) for T exponential with rate xi, started at V(0) = x.
// Rejects xi within 1e-8 max(1, xi) of phi(alpha) (removable singularity);
// perturb alpha instead.
double transient_lst(const NetInputModel& model, double alpha, double x, double xi);

// P_x(V(T) = 0) = xi / psi(xi) * exp(-psi(xi) x).
double zero_prob(const NetInputModel& model, double x, double xi);

// Admissible grid exponents (1/(2 - 2 sqrt(bg)), 1); empty when the lower
// bound reaches 1, i.e. bg >= 1/4.
struct GammaRange {
    double lower;
    double upper;
    bool empty;
};
GammaRange clt_gamma_range(double bg);

// Grid-width heuristic (xi T)^(-1/(2 - 2 sqrt(bg))); requires xi T > 1.
double suggest_delta(double xi, double horizon, double bg);

// sigma^2 of the estimator CLT given phi(alpha), phi(2 alpha) and phi'(0);
// shared between the closed-form evaluation and the plug-in estimate.
double avar_formula(double phi_a, double phi_2a, double phi_prime0, double alpha, double xi);

// Requires alpha >= 1e-6 (the alpha -> 0 limit is not implemented).
double asymptotic_variance(const NetInputModel& model, double alpha, double xi);

}  // namespace levyprobe
