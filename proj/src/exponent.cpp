#include "levyprobe/exponent.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "levyprobe/errors.hpp"
#include "levyprobe/levy_density.hpp"

namespace levyprobe {

namespace {

// log E exp(-alpha J(1)) for one component; nonpositive for alpha >= 0.
double log_lst(const SubordinatorSpec& spec, double alpha) {
    return std::visit(
        [alpha](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GammaSpec>) {
                return v.shape * std::log(v.rate / (v.rate + alpha));
            } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                const double mu = v.mean, lambda = v.shape;
                return lambda / mu * (1.0 - std::sqrt(1.0 + 2.0 * mu * mu * alpha / lambda));
            } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
                return -v.rate * (1.0 - v.jobs.lst(alpha));
            } else if constexpr (std::is_same_v<T, SumSpec>) {
                double total = 0.0;
                for (const auto& c : v.components) total += log_lst(c, alpha);
                return total;
            } else {
                return -truncated_exponent_integral(density_of(*v.base), v.epsilon, alpha);
            }
        },
        spec.value);
}

}  // namespace

double phi(const NetInputModel& model, double alpha) {
    if (alpha < 0.0) throw std::domain_error("phi: alpha must be nonnegative");
    if (alpha == 0.0) return 0.0;
    return alpha + log_lst(model.input(), alpha);
}

double psi(const NetInputModel& model, double xi) {
    if (!(xi > 0.0)) throw std::domain_error("psi: xi must be positive");
    // phi is strictly increasing with phi(0) = 0: bracket by doubling, then
    // bisect. Convexity is not assumed.
    double hi = 1.0;
    while (phi(model, hi) < xi) {
        hi *= 2.0;
        if (hi > 1e300) throw NumericError("psi: bracket expansion exceeded overflow guard");
    }
    double lo = 0.0;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (phi(model, mid) < xi)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double stationary_lst(const NetInputModel& model, double alpha) {
    if (alpha < 0.0) throw std::domain_error("stationary_lst: alpha must be nonnegative");
    if (alpha == 0.0) return 1.0;
    return alpha * model.phi_prime_zero() / phi(model, alpha);
}

double stationary_atom(const NetInputModel& model) { return model.phi_prime_zero(); }

double transient_lst(const NetInputModel& model, double alpha, double x, double xi) {
    if (alpha < 0.0 || x < 0.0) throw std::domain_error("transient_lst: alpha, x >= 0 required");
    if (!(xi > 0.0)) throw std::domain_error("transient_lst: xi must be positive");
    const double phi_a = phi(model, alpha);
    if (std::abs(xi - phi_a) <= 1e-8 * std::max(1.0, xi)) {
        std::ostringstream msg;
        msg << "transient_lst: xi = " << xi << " within guard of phi(alpha) = " << phi_a
            << "; perturb alpha to step off the removable singularity";
        throw NumericError(msg.str());
    }
    const double psi_xi = psi(model, xi);
    return xi / (xi - phi_a) *
           (std::exp(-alpha * x) - alpha / psi_xi * std::exp(-psi_xi * x));
}

double zero_prob(const NetInputModel& model, double x, double xi) {
    if (x < 0.0) throw std::domain_error("zero_prob: x must be nonnegative");
    if (!(xi > 0.0)) throw std::domain_error("zero_prob: xi must be positive");
    const double psi_xi = psi(model, xi);
    return xi / psi_xi * std::exp(-psi_xi * x);
}

GammaRange clt_gamma_range(double bg) {
    if (bg < 0.0 || bg > 1.0) throw std::domain_error("clt_gamma_range: index in [0,1]");
    const double denom = 2.0 - 2.0 * std::sqrt(bg);
    const double lower = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
    return {lower, 1.0, lower >= 1.0};
}

double suggest_delta(double xi, double horizon, double bg) {
    if (bg < 0.0 || bg > 1.0) throw std::domain_error("suggest_delta: index in [0,1]");
    const double denom = 2.0 - 2.0 * std::sqrt(bg);
    if (!(denom > 0.0)) throw std::domain_error("suggest_delta: undefined at index 1");
    const double product = xi * horizon;
    if (!(product > 1.0))
        throw std::domain_error("suggest_delta: requires xi * horizon > 1");
    return std::pow(product, -1.0 / denom);
}

double avar_formula(double phi_a, double phi_2a, double phi_prime0, double alpha, double xi) {
    const double ratio = 2.0 * phi_a / phi_2a;
    return phi_a * phi_a / (alpha * phi_prime0) *
           (alpha + 2.0 * xi * (1.0 - ratio) + ratio * (phi_a - phi_2a));
}

double asymptotic_variance(const NetInputModel& model, double alpha, double xi) {
    if (!(alpha >= 1e-6))
        throw std::domain_error("asymptotic_variance: alpha >= 1e-6 required");
    if (!(xi > 0.0)) throw std::domain_error("asymptotic_variance: xi must be positive");
    return avar_formula(phi(model, alpha), phi(model, 2.0 * alpha), model.phi_prime_zero(),
                        alpha, xi);
}

}  // namespace levyprobe
