#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "levyprobe/interp.hpp"
#include "levyprobe/rng.hpp"

namespace levyprobe {

// Job size distribution of a compound Poisson component.
class JobDistribution {
public:
    enum class Kind { Exponential, Deterministic, Tabulated };

    static JobDistribution exponential(double rate);
    static JobDistribution deterministic(double size);
    // Inverse CDF table: strictly increasing probabilities spanning [0,1]
    // against strictly increasing positive quantiles.
    static JobDistribution tabulated(std::vector<double> probabilities,
                                     std::vector<double> quantiles);
    static JobDistribution tabulated(MonotoneCubic quantile_function);

    Kind kind() const { return kind_; }
    double exponential_rate() const { return rate_; }
    double deterministic_size() const { return size_; }
    const MonotoneCubic& quantile_function() const { return quantile_; }

    double mean() const;
    double lst(double alpha) const;  // E exp(-alpha B)
    double sample(Philox& rng) const;

private:
    JobDistribution() = default;
    Kind kind_ = Kind::Deterministic;
    double rate_ = 0.0;
    double size_ = 0.0;
    MonotoneCubic quantile_;
};

struct GammaSpec {
    double shape;  // gamma
    double rate;   // beta
};

struct InverseGaussianSpec {
    double mean;   // mu
    double shape;  // lambda
};

struct CompoundPoissonSpec {
    double rate;
    JobDistribution jobs;
};

struct SubordinatorSpec;

struct SumSpec {
    std::vector<SubordinatorSpec> components;
};

// Jumps below epsilon removed from the base process.
struct TruncatedSpec {
    std::shared_ptr<const SubordinatorSpec> base;
    double epsilon;
};

struct SubordinatorSpec {
    std::variant<GammaSpec, InverseGaussianSpec, CompoundPoissonSpec, SumSpec, TruncatedSpec>
        value;
};

SubordinatorSpec gamma_process(double shape, double rate);
SubordinatorSpec inverse_gaussian_process(double mean, double shape);
SubordinatorSpec compound_poisson(double rate, JobDistribution jobs);
// Flattens nested sums; rejects empty component lists.
SubordinatorSpec sum_of(std::vector<SubordinatorSpec> components);
// Requires a base with closed-form Levy density (gamma / inverse Gaussian /
// sums thereof).
SubordinatorSpec truncated(SubordinatorSpec base, double epsilon);

double mean_input_rate(const SubordinatorSpec& spec);  // E J(1)
double bg_index(const SubordinatorSpec& spec);         // Blumenthal-Getoor index
bool spec_equal(const SubordinatorSpec& a, const SubordinatorSpec& b);

// Net input X(t) = J(t) - t with unit drain; construction enforces the
// stability condition E J(1) < 1.
class NetInputModel {
public:
    explicit NetInputModel(SubordinatorSpec input);

    const SubordinatorSpec& input() const { return input_; }
    double mean_rate() const { return mean_rate_; }
    double phi_prime_zero() const { return 1.0 - mean_rate_; }

private:
    SubordinatorSpec input_;
    double mean_rate_;
};

}  // namespace levyprobe
