#include "levyprobe/levy_density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "levyprobe/errors.hpp"
#include "levyprobe/quadrature.hpp"

namespace levyprobe {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double LevyDensity::operator()(double x) const {
    double v = 0.0;
    for (const auto& g : gamma_terms) v += g.shape / x * std::exp(-g.rate * x);
    for (const auto& t : ig_terms) {
        const double c = t.shape / (2.0 * t.mean * t.mean);
        v += std::sqrt(t.shape / kTwoPi) * std::pow(x, -1.5) * std::exp(-c * x);
    }
    return v;
}

LevyDensity gamma_density_term(double shape, double rate) {
    LevyDensity d;
    d.gamma_terms.push_back({shape, rate});
    return d;
}

LevyDensity ig_density_term(double mean, double shape) {
    LevyDensity d;
    d.ig_terms.push_back({mean, shape});
    return d;
}

LevyDensity density_of(const SubordinatorSpec& spec) {
    LevyDensity density;
    const auto collect = [&density](const SubordinatorSpec& s, const auto& self) -> void {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, GammaSpec>) {
                    density.gamma_terms.push_back({v.shape, v.rate});
                } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                    density.ig_terms.push_back({v.mean, v.shape});
                } else if constexpr (std::is_same_v<T, SumSpec>) {
                    for (const auto& c : v.components) self(c, self);
                } else {
                    throw std::invalid_argument(
                        "no closed-form Levy density for this subordinator variant");
                }
            },
            s.value);
    };
    collect(spec, collect);
    return density;
}

double truncated_rate(const LevyDensity& density, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("truncated_rate: epsilon must be positive");
    return integrate_upper_tail([&density](double x) { return density(x); }, epsilon, 1e-9)
        .value;
}

double truncated_mean(const LevyDensity& density, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("truncated_mean: epsilon must be positive");
    return integrate_upper_tail([&density](double x) { return x * density(x); }, epsilon, 1e-9)
        .value;
}

double truncated_exponent_integral(const LevyDensity& density, double epsilon, double alpha) {
    if (alpha == 0.0) return 0.0;
    return integrate_upper_tail(
               [&density, alpha](double x) { return -std::expm1(-alpha * x) * density(x); },
               epsilon, 1e-9)
        .value;
}

TruncatedCPSpec build_truncated_cp(const LevyDensity& density, double epsilon,
                                   std::size_t table_size) {
    if (table_size < 256) throw std::invalid_argument("build_truncated_cp: table_size >= 256");
    const double rate = truncated_rate(density, epsilon);
    if (!(rate > 0.0)) {
        std::ostringstream msg;
        msg << "build_truncated_cp: measure beyond epsilon = " << epsilon
            << " carries no mass (rate " << rate << ")";
        throw NumericError(msg.str());
    }

    // Expand the table cutoff until the leftover mass is negligible.
    double x_max = std::max(2.0 * epsilon, 1.0);
    double tail = truncated_rate(density, x_max);
    while (tail > 1e-12 * rate) {
        x_max *= 2.0;
        if (x_max > 1e290)
            throw NumericError("build_truncated_cp: tail cutoff not found below overflow guard");
        tail = truncated_rate(density, x_max);
    }

    // Cumulative masses on a log-spaced grid from epsilon to x_max.
    const double log_ratio = std::log(x_max / epsilon);
    std::vector<double> xs(table_size + 1), cumulative(table_size + 1, 0.0);
    for (std::size_t k = 0; k <= table_size; ++k)
        xs[k] = epsilon * std::exp(log_ratio * static_cast<double>(k) /
                                   static_cast<double>(table_size));
    xs[0] = epsilon;
    xs[table_size] = x_max;
    for (std::size_t k = 1; k <= table_size; ++k) {
        const double mass =
            integrate([&density](double x) { return density(x); }, xs[k - 1], xs[k], 1e-10,
                      1e-300, 800)
                .value;
        cumulative[k] = cumulative[k - 1] + mass;
    }
    const double total = cumulative[table_size];
    if (!(total > 0.0)) throw NumericError("build_truncated_cp: degenerate CDF table");

    // Keep knots with strictly increasing CDF values; interpolate the inverse.
    std::vector<double> us, qs;
    us.reserve(table_size + 1);
    qs.reserve(table_size + 1);
    us.push_back(0.0);
    qs.push_back(epsilon);
    for (std::size_t k = 1; k <= table_size; ++k) {
        const double u = cumulative[k] / total;
        if (u > us.back() && u <= 1.0) {
            us.push_back(u);
            qs.push_back(xs[k]);
        }
    }
    us.back() = 1.0;

    TruncatedCPSpec spec;
    spec.rate = rate;
    spec.epsilon = epsilon;
    spec.inverse_cdf = MonotoneCubic(std::move(us), std::move(qs));
    spec.tail_mass_beyond_table = tail / rate;
    return spec;
}

CompoundPoissonSpec to_compound_poisson(const TruncatedCPSpec& spec) {
    return {spec.rate, JobDistribution::tabulated(spec.inverse_cdf)};
}

}  // namespace levyprobe
