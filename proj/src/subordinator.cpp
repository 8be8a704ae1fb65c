#include "levyprobe/subordinator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "levyprobe/levy_density.hpp"
#include "levyprobe/quadrature.hpp"

namespace levyprobe {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be strictly positive, got " << v;
        throw std::invalid_argument(msg.str());
    }
}
}  // namespace

JobDistribution JobDistribution::exponential(double rate) {
    require_positive(rate, "job rate");
    JobDistribution d;
    d.kind_ = Kind::Exponential;
    d.rate_ = rate;
    return d;
}

JobDistribution JobDistribution::deterministic(double size) {
    require_positive(size, "job size");
    JobDistribution d;
    d.kind_ = Kind::Deterministic;
    d.size_ = size;
    return d;
}

JobDistribution JobDistribution::tabulated(std::vector<double> probabilities,
                                           std::vector<double> quantiles) {
    if (probabilities.size() != quantiles.size() || probabilities.size() < 2)
        throw std::invalid_argument("tabulated jobs: need matching probability/quantile grids");
    if (probabilities.front() != 0.0 || probabilities.back() != 1.0)
        throw std::invalid_argument("tabulated jobs: probabilities must span [0,1]");
    for (double q : quantiles) require_positive(q, "job quantile");
    return tabulated(MonotoneCubic(std::move(probabilities), std::move(quantiles)));
}

JobDistribution JobDistribution::tabulated(MonotoneCubic quantile_function) {
    JobDistribution d;
    d.kind_ = Kind::Tabulated;
    d.quantile_ = std::move(quantile_function);
    return d;
}

double JobDistribution::mean() const {
    switch (kind_) {
        case Kind::Exponential: return 1.0 / rate_;
        case Kind::Deterministic: return size_;
        case Kind::Tabulated: return quantile_.integral();
    }
    return 0.0;
}

double JobDistribution::lst(double alpha) const {
    if (alpha == 0.0) return 1.0;
    switch (kind_) {
        case Kind::Exponential: return rate_ / (rate_ + alpha);
        case Kind::Deterministic: return std::exp(-alpha * size_);
        case Kind::Tabulated: {
            const auto& q = quantile_;
            return integrate([&](double u) { return std::exp(-alpha * q(u)); }, 0.0, 1.0,
                             1e-10, 1e-14, 4000)
                .value;
        }
    }
    return 0.0;
}

double JobDistribution::sample(Philox& rng) const {
    switch (kind_) {
        case Kind::Exponential: return rng.exponential(rate_);
        case Kind::Deterministic: return size_;
        case Kind::Tabulated: return quantile_(rng.uniform());
    }
    return 0.0;
}

SubordinatorSpec gamma_process(double shape, double rate) {
    require_positive(shape, "gamma shape");
    require_positive(rate, "gamma rate");
    return {GammaSpec{shape, rate}};
}

SubordinatorSpec inverse_gaussian_process(double mean, double shape) {
    require_positive(mean, "inverse Gaussian mean");
    require_positive(shape, "inverse Gaussian shape");
    return {InverseGaussianSpec{mean, shape}};
}

SubordinatorSpec compound_poisson(double rate, JobDistribution jobs) {
    require_positive(rate, "compound Poisson rate");
    return {CompoundPoissonSpec{rate, std::move(jobs)}};
}

SubordinatorSpec sum_of(std::vector<SubordinatorSpec> components) {
    if (components.empty()) throw std::invalid_argument("sum_of: at least one component");
    SumSpec sum;
    for (auto& c : components) {
        if (auto* nested = std::get_if<SumSpec>(&c.value)) {
            for (auto& inner : nested->components) sum.components.push_back(std::move(inner));
        } else {
            sum.components.push_back(std::move(c));
        }
    }
    if (sum.components.size() == 1) return std::move(sum.components.front());
    return {std::move(sum)};
}

SubordinatorSpec truncated(SubordinatorSpec base, double epsilon) {
    require_positive(epsilon, "truncation epsilon");
    density_of(base);  // validates that a closed-form density exists
    TruncatedSpec t{std::make_shared<const SubordinatorSpec>(std::move(base)), epsilon};
    return {std::move(t)};
}

double mean_input_rate(const SubordinatorSpec& spec) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GammaSpec>) {
                return v.shape / v.rate;
            } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                return v.mean;
            } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
                return v.rate * v.jobs.mean();
            } else if constexpr (std::is_same_v<T, SumSpec>) {
                double total = 0.0;
                for (const auto& c : v.components) total += mean_input_rate(c);
                return total;
            } else {
                return truncated_mean(density_of(*v.base), v.epsilon);
            }
        },
        spec.value);
}

double bg_index(const SubordinatorSpec& spec) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GammaSpec>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                return 0.5;
            } else if constexpr (std::is_same_v<T, SumSpec>) {
                double worst = 0.0;
                for (const auto& c : v.components) worst = std::max(worst, bg_index(c));
                return worst;
            } else {
                // compound Poisson and truncated processes have finite activity
                return 0.0;
            }
        },
        spec.value);
}

bool spec_equal(const SubordinatorSpec& a, const SubordinatorSpec& b) {
    if (a.value.index() != b.value.index()) return false;
    if (const auto* g = std::get_if<GammaSpec>(&a.value)) {
        const auto& o = std::get<GammaSpec>(b.value);
        return g->shape == o.shape && g->rate == o.rate;
    }
    if (const auto* ig = std::get_if<InverseGaussianSpec>(&a.value)) {
        const auto& o = std::get<InverseGaussianSpec>(b.value);
        return ig->mean == o.mean && ig->shape == o.shape;
    }
    if (const auto* cp = std::get_if<CompoundPoissonSpec>(&a.value)) {
        const auto& o = std::get<CompoundPoissonSpec>(b.value);
        if (cp->rate != o.rate || cp->jobs.kind() != o.jobs.kind()) return false;
        switch (cp->jobs.kind()) {
            case JobDistribution::Kind::Exponential:
                return cp->jobs.exponential_rate() == o.jobs.exponential_rate();
            case JobDistribution::Kind::Deterministic:
                return cp->jobs.deterministic_size() == o.jobs.deterministic_size();
            case JobDistribution::Kind::Tabulated:
                return cp->jobs.quantile_function().knots() ==
                           o.jobs.quantile_function().knots() &&
                       cp->jobs.quantile_function().values() ==
                           o.jobs.quantile_function().values();
        }
    }
    if (const auto* s = std::get_if<SumSpec>(&a.value)) {
        const auto& o = std::get<SumSpec>(b.value);
        if (s->components.size() != o.components.size()) return false;
        for (std::size_t i = 0; i < s->components.size(); ++i)
            if (!spec_equal(s->components[i], o.components[i])) return false;
        return true;
    }
    const auto& t = std::get<TruncatedSpec>(a.value);
    const auto& o = std::get<TruncatedSpec>(b.value);
    return t.epsilon == o.epsilon && spec_equal(*t.base, *o.base);
}

NetInputModel::NetInputModel(SubordinatorSpec input)
    : input_(std::move(input)), mean_rate_(mean_input_rate(input_)) {
    if (!(mean_rate_ < 1.0)) {
        std::ostringstream msg;
        msg << "unstable model: E J(1) = " << mean_rate_ << " >= 1";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace levyprobe
