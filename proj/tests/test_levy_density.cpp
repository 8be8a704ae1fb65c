#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyprobe/errors.hpp"
#include "levyprobe/exponent.hpp"
#include "levyprobe/levy_density.hpp"
#include "levyprobe/rng.hpp"
#include "oracles.hpp"

using namespace levyprobe;

namespace {

LevyDensity canonical_density() {
    LevyDensity d = gamma_density_term(2.0, 5.0);
    d.ig_terms.push_back({0.4, 1.0});
    return d;
}

}  // namespace

TEST_CASE("density evaluation matches the closed forms") {
    const LevyDensity d = canonical_density();
    const double x = 0.3;
    const double expected = 2.0 / x * std::exp(-5.0 * x) +
                            std::sqrt(1.0 / (2.0 * std::acos(-1.0))) * std::pow(x, -1.5) *
                                std::exp(-x / (2.0 * 0.16));
    CHECK(d(x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("density_of extracts terms from gamma/IG specs and rejects others") {
    const auto spec = sum_of({gamma_process(2.0, 5.0), inverse_gaussian_process(0.4, 1.0)});
    const LevyDensity d = density_of(spec);
    CHECK(d.gamma_terms.size() == 1);
    CHECK(d.ig_terms.size() == 1);
    CHECK_THROWS_AS(density_of(compound_poisson(1.0, JobDistribution::exponential(2.0))),
                    std::invalid_argument);
}

TEST_CASE("truncated rate against the exponential-integral identity") {
    // int_1^inf 2 x^-1 e^{-5x} dx = 2 E1(5)
    const LevyDensity d = gamma_density_term(2.0, 5.0);
    const double value = truncated_rate(d, 1.0);
    const double brute = oracle::integral_tail([&](double x) { return d(x); }, 1.0);
    CHECK(value == doctest::Approx(brute).epsilon(1e-9));
    CHECK(value == doctest::Approx(2.0 * 1.1482955912753257e-3).epsilon(1e-9));

    // far truncation underflows cleanly to zero
    CHECK(truncated_rate(d, 1e3) == 0.0);
}

TEST_CASE("truncated rate and mean are strictly decreasing in epsilon") {
    const LevyDensity d = canonical_density();
    double prev_rate = truncated_rate(d, 1e-6);
    double prev_mean = truncated_mean(d, 1e-6);
    for (double eps : {1e-5, 1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
        const double rate = truncated_rate(d, eps);
        const double mean = truncated_mean(d, eps);
        CHECK(rate < prev_rate);
        CHECK(mean < prev_mean);
        prev_rate = rate;
        prev_mean = mean;
    }
}

TEST_CASE("truncated mean limits toward the component means") {
    const LevyDensity gamma_only = gamma_density_term(2.0, 5.0);
    // closed form (shape/rate) e^{-rate eps}
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        CHECK(truncated_mean(gamma_only, eps) ==
              doctest::Approx(0.4 * std::exp(-5.0 * eps)).epsilon(1e-9));
    }
    const LevyDensity ig_only = ig_density_term(0.4, 1.0);
    CHECK(truncated_mean(ig_only, 1e-10) == doctest::Approx(0.4).epsilon(1e-5));
    const double brute = oracle::integral_tail([&](double x) { return x * ig_only(x); }, 1e-4);
    CHECK(truncated_mean(ig_only, 1e-4) == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("canonical truncated drift") {
    // the workhorse number for the whole simulation study
    const double mean = truncated_mean(canonical_density(), 1e-5);
    CHECK(std::abs((mean - 1.0) - (-0.202543)) <= 5e-6);
    CHECK(mean < 0.8);
}

TEST_CASE("truncated compound Poisson surrogate") {
    const LevyDensity density = canonical_density();
    const double eps = 1e-5;
    const TruncatedCPSpec spec = build_truncated_cp(density, eps, 1024);

    SUBCASE("rate matches the tail mass and the table starts at epsilon") {
        CHECK(spec.rate == doctest::Approx(truncated_rate(density, eps)).epsilon(1e-9));
        CHECK(spec.inverse_cdf(0.0) == eps);
        CHECK(spec.tail_mass_beyond_table <= 1e-12);
        CHECK(spec.epsilon == eps);
    }

    SUBCASE("sampled jobs reproduce the truncated mean") {
        const CompoundPoissonSpec cp = to_compound_poisson(spec);
        Philox rng(2024, 0);
        const int n = 1000000;
        std::vector<double> draws;
        draws.reserve(n);
        for (int i = 0; i < n; ++i) draws.push_back(cp.jobs.sample(rng));
        const double target = truncated_mean(density, eps) / spec.rate;
        const double se = oracle::std_error(draws);
        CHECK(std::abs(oracle::mean(draws) - target) <= 3.0 * se);
        // the interpolant's exact mean should agree even tighter
        CHECK(cp.jobs.mean() == doctest::Approx(target).epsilon(1e-6));
    }

    SUBCASE("sampled jobs pass a Kolmogorov-Smirnov check against the table") {
        // forward CDF interpolated on the same knots
        const MonotoneCubic forward(spec.inverse_cdf.values(), spec.inverse_cdf.knots());
        const CompoundPoissonSpec cp = to_compound_poisson(spec);
        Philox rng(7, 0);
        const int n = 100000;
        std::vector<double> draws;
        draws.reserve(n);
        for (int i = 0; i < n; ++i) draws.push_back(cp.jobs.sample(rng));
        const double d = oracle::ks_distance(draws, [&](double x) { return forward(x); });
        const double critical_1pct = 1.6276 / std::sqrt(static_cast<double>(n));
        CHECK(d < critical_1pct);
    }
}

TEST_CASE("gamma-only surrogate mean via Monte Carlo") {
    const LevyDensity density = gamma_density_term(2.0, 5.0);
    const double eps = 0.01;
    const TruncatedCPSpec spec = build_truncated_cp(density, eps, 512);
    const CompoundPoissonSpec cp = to_compound_poisson(spec);
    Philox rng(11, 3);
    const int n = 200000;
    std::vector<double> draws;
    draws.reserve(n);
    for (int i = 0; i < n; ++i) draws.push_back(cp.jobs.sample(rng));
    const double target = truncated_mean(density, eps) / spec.rate;
    CHECK(std::abs(oracle::mean(draws) - target) <= 3.0 * oracle::std_error(draws));
}

TEST_CASE("surrogate exponent agrees with the truncated-variant exponent") {
    // two routes to the truncated exponent: quadrature of the restricted
    // density versus the surrogate's tabulated job transform
    const double eps = 1e-5;
    const TruncatedCPSpec spec = build_truncated_cp(canonical_density(), eps, 1024);
    const auto base = sum_of({gamma_process(2.0, 5.0), inverse_gaussian_process(0.4, 1.0)});
    const NetInputModel by_quadrature(truncated(base, eps));
    const NetInputModel by_table(compound_poisson(spec.rate, to_compound_poisson(spec).jobs));
    for (double alpha : {0.5, 2.0, 10.0}) {
        CHECK(phi(by_table, alpha) ==
              doctest::Approx(phi(by_quadrature, alpha)).epsilon(1e-5));
    }
}

TEST_CASE("surrogate construction failure modes") {
    CHECK_THROWS_AS(build_truncated_cp(gamma_density_term(2.0, 5.0), 1e3, 512), NumericError);
    CHECK_THROWS_AS(build_truncated_cp(canonical_density(), 1e-5, 16), std::invalid_argument);
    CHECK_THROWS_AS(truncated_rate(canonical_density(), -1.0), std::invalid_argument);
}
