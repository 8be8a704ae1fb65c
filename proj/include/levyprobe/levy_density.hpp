#pragma once

#include <cstddef>
#include <vector>

#include "levyprobe/interp.hpp"
#include "levyprobe/subordinator.hpp"

namespace levyprobe {

struct GammaDensityTerm {
    double shape;  // contributes shape * x^-1 * exp(-rate x)
    double rate;
};

struct IgDensityTerm {
    double mean;   // contributes sqrt(shape/(2 pi)) x^-3/2 exp(-shape x / (2 mean^2))
    double shape;
};

// Levy density on (0, infinity) assembled from closed-form terms.
struct LevyDensity {
    std::vector<GammaDensityTerm> gamma_terms;
    std::vector<IgDensityTerm> ig_terms;

    double operator()(double x) const;
    bool empty() const { return gamma_terms.empty() && ig_terms.empty(); }
};

LevyDensity gamma_density_term(double shape, double rate);
LevyDensity ig_density_term(double mean, double shape);

// Density of a spec composed of gamma / inverse Gaussian parts and sums
// thereof; throws std::invalid_argument for compound Poisson or truncated
// variants (no closed-form density in the supported sense).
LevyDensity density_of(const SubordinatorSpec& spec);

double truncated_rate(const LevyDensity& density, double epsilon);  // nu(eps, inf)
double truncated_mean(const LevyDensity& density, double epsilon);  // int_eps^inf x nu(dx)
// int_eps^inf (1 - e^{-alpha x}) nu(dx)
double truncated_exponent_integral(const LevyDensity& density, double epsilon, double alpha);

// Samplable compound Poisson surrogate for the truncated measure.
struct TruncatedCPSpec {
    double rate = 0.0;     // r_eps
    double epsilon = 0.0;
    MonotoneCubic inverse_cdf;              // u in [0,1] -> jump size in (eps, x_max]
    double tail_mass_beyond_table = 0.0;    // relative to rate
};

TruncatedCPSpec build_truncated_cp(const LevyDensity& density, double epsilon,
                                   std::size_t table_size = 1024);

CompoundPoissonSpec to_compound_poisson(const TruncatedCPSpec& spec);

}  // namespace levyprobe
