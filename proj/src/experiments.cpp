#include "levyprobe/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "levyprobe/csv.hpp"
#include "levyprobe/errors.hpp"
#include "levyprobe/exponent.hpp"

namespace levyprobe {

namespace {

void collect_components(const SubordinatorSpec& spec, std::vector<CompoundPoissonSpec>& cps,
                        LevyDensity& density, SimulableModel& sm, std::size_t table_size) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GammaSpec>) {
                density.gamma_terms.push_back({v.shape, v.rate});
            } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                density.ig_terms.push_back({v.mean, v.shape});
            } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
                cps.push_back(v);
            } else if constexpr (std::is_same_v<T, SumSpec>) {
                for (const auto& c : v.components)
                    collect_components(c, cps, density, sm, table_size);
            } else {
                TruncatedCPSpec t =
                    build_truncated_cp(density_of(*v.base), v.epsilon, table_size);
                cps.push_back(to_compound_poisson(t));
                if (!sm.truncation) sm.truncation = std::move(t);
            }
        },
        spec.value);
}

// Run fn(0..total-1) on the requested number of threads; any exception is
// rethrown on the caller thread.
void parallel_for(std::size_t total, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(total));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double draw_initial(const SimulableModel& sm, const ExperimentConfig& config, Philox& rng) {
    switch (config.init) {
        case InitKind::Fixed:
            return config.init_value;
        case InitKind::Stationary:
            if (sm.components.size() == 1 &&
                sm.components[0].jobs.kind() == JobDistribution::Kind::Exponential)
                return stationary_init(sm.components[0], rng);
            throw std::invalid_argument(
                "init = stationary: no exact stationary sampler for this model; use "
                "init = burn_in (the normality hypothesis then holds only approximately)");
        case InitKind::BurnIn:
            return burn_in(std::span<const CompoundPoissonSpec>(sm.components), rng,
                           config.burn_in_time);
    }
    return 0.0;
}

const char* init_name(InitKind init) {
    switch (init) {
        case InitKind::Stationary: return "stationary";
        case InitKind::BurnIn: return "burn_in";
        case InitKind::Fixed: return "fixed";
    }
    return "?";
}

void common_summary(const ExperimentConfig& config, const SimulableModel& sm,
                    std::vector<std::pair<std::string, std::string>>& summary) {
    summary.emplace_back("seed", std::to_string(config.seed));
    summary.emplace_back("init", init_name(config.init));
    if (sm.truncation) {
        summary.emplace_back("epsilon", format_double(sm.truncation->epsilon));
        summary.emplace_back("r_epsilon", format_double(sm.truncation->rate));
    }
}

double sample_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return s / static_cast<double>(xs.size() - 1);
}

std::string key_with(const std::string& name, double alpha) {
    return name + " alpha=" + format_compact(alpha);
}

}  // namespace

SimulableModel prepare_simulable(const SubordinatorSpec& spec, double epsilon,
                                 std::size_t table_size) {
    SimulableModel sm;
    LevyDensity density;
    collect_components(spec, sm.components, density, sm, table_size);
    if (!density.empty()) {
        TruncatedCPSpec t = build_truncated_cp(density, epsilon, table_size);
        sm.components.push_back(to_compound_poisson(t));
        if (!sm.truncation) sm.truncation = t;
    }
    for (const auto& cp : sm.components) {
        sm.total_rate += cp.rate;
        sm.mean_rate += cp.rate * cp.jobs.mean();
    }
    return sm;
}

double resolve_delta(const ExperimentConfig& config) {
    if (config.delta) return *config.delta;
    return suggest_delta(config.xi, config.horizon, bg_index(config.model));
}

GridObservations run_simulate(const ExperimentConfig& config) {
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);
    Philox rng(config.seed, substream::make(substream::kPath, 0));
    const double v0 = draw_initial(sm, config, rng);
    const WorkloadPath path =
        simulate_path(std::span<const CompoundPoissonSpec>(sm.components), config.horizon, v0,
                      rng);
    return sample_grid(path, resolve_delta(config));
}

ExperimentReport run_estimate(const ExperimentConfig& config) {
    const NetInputModel analytic(config.model);
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);
    const double delta = resolve_delta(config);

    Philox rng_path(config.seed, substream::make(substream::kPath, 0));
    const double v0 = draw_initial(sm, config, rng_path);
    const WorkloadPath path = simulate_path(std::span<const CompoundPoissonSpec>(sm.components),
                                            config.horizon, v0, rng_path);
    const GridObservations grid = sample_grid(path, delta);

    const std::uint64_t probe_stream = substream::make(substream::kProbes, 0);
    Philox rng_probes(config.seed, probe_stream);
    const ProbeSample sample = draw_probes(grid, config.horizon, config.xi, rng_probes);

    ExperimentReport report;
    common_summary(config, sm, report.summary);
    report.summary.emplace_back("delta", format_double(delta));
    report.summary.emplace_back("n", std::to_string(sample.n()));
    for (double alpha : config.alpha_grid) {
        Estimate est;
        try {
            est = estimate_with_ci(sample, alpha, config.ci_level);
        } catch (const NumericError&) {
            est = estimate_grid(sample, alpha);  // no emptiness observed: no interval
        }
        ReportRow row;
        row.experiment = "estimate";
        row.alpha = alpha;
        row.delta = delta;
        row.xi = config.xi;
        row.horizon = config.horizon;
        row.n = est.n;
        row.phi_hat = est.phi_hat;
        row.sigma_hat_sq = est.sigma_hat_sq;
        if (est.ci) {
            row.ci_lo = est.ci->lo;
            row.ci_hi = est.ci->hi;
        }
        row.phi_true = phi(analytic, alpha);
        row.seed = probe_stream;
        report.rows.push_back(std::move(row));
    }
    return report;
}

ExperimentReport run_consistency(const ExperimentConfig& config) {
    const NetInputModel analytic(config.model);
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);
    std::vector<double> deltas = config.delta_grid;
    if (deltas.empty()) deltas.push_back(resolve_delta(config));

    Philox rng_path(config.seed, substream::make(substream::kPath, 0));
    const double v0 = draw_initial(sm, config, rng_path);
    const WorkloadPath path = simulate_path(std::span<const CompoundPoissonSpec>(sm.components),
                                            config.horizon, v0, rng_path);

    // doubling horizons up to T
    std::vector<double> horizons;
    for (int k = 4; k >= 0; --k) horizons.push_back(config.horizon / std::pow(2.0, k));

    ExperimentReport report;
    common_summary(config, sm, report.summary);
    std::uint64_t probe_counter = 0;
    for (double delta : deltas) {
        const GridObservations grid = sample_grid(path, delta);
        for (double horizon : horizons) {
            if (horizon < delta || horizon * config.xi < 2.0) continue;
            const std::uint64_t stream =
                substream::make(substream::kProbes, probe_counter++);
            Philox rng(config.seed, stream);
            const ProbeSample sample = draw_probes(grid, horizon, config.xi, rng);
            for (double alpha : config.alpha_grid) {
                const Estimate est = estimate_grid(sample, alpha);
                const double truth = phi(analytic, alpha);
                ReportRow row;
                row.experiment = "consistency";
                row.alpha = alpha;
                row.delta = delta;
                row.xi = config.xi;
                row.horizon = horizon;
                row.n = est.n;
                row.phi_hat = est.phi_hat;
                row.phi_true = truth;
                row.seed = stream;
                report.rows.push_back(std::move(row));
                if (horizon == config.horizon) {
                    std::ostringstream key;
                    key << "final_abs_error delta=" << format_compact(delta)
                        << " alpha=" << format_compact(alpha);
                    report.summary.emplace_back(key.str(),
                                                format_double(std::abs(est.phi_hat - truth)));
                }
            }
        }
    }
    return report;
}

ExperimentReport run_coverage(const ExperimentConfig& config, const RunOptions& options) {
    const NetInputModel analytic(config.model);
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);
    const double delta = resolve_delta(config);
    const std::size_t reps = config.replications;
    const std::size_t n_alpha = config.alpha_grid.size();

    struct Slot {
        Estimate est;
        bool has_ci = false;
    };
    std::vector<Slot> slots(reps * n_alpha);

    parallel_for(reps, options.threads, [&](std::size_t r) {
        Philox rng(config.seed, substream::make(substream::kReplication, r));
        const double v0 = draw_initial(sm, config, rng);
        const WorkloadPath path = simulate_path(
            std::span<const CompoundPoissonSpec>(sm.components), config.horizon, v0, rng);
        const GridObservations grid = sample_grid(path, delta);
        const ProbeSample sample = draw_probes(grid, config.horizon, config.xi, rng);
        for (std::size_t a = 0; a < n_alpha; ++a) {
            Slot& slot = slots[r * n_alpha + a];
            try {
                slot.est = estimate_with_ci(sample, config.alpha_grid[a], config.ci_level);
                slot.has_ci = true;
            } catch (const NumericError&) {
                slot.est = estimate_grid(sample, config.alpha_grid[a]);
            }
        }
    });

    ExperimentReport report;
    common_summary(config, sm, report.summary);
    report.summary.emplace_back("delta", format_double(delta));
    report.summary.emplace_back("ci_level", format_double(config.ci_level));
    if (config.init != InitKind::Stationary)
        report.summary.emplace_back("warning",
                                    "non-stationary start: normality is only approximate");

    for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t a = 0; a < n_alpha; ++a) {
            const Slot& slot = slots[r * n_alpha + a];
            ReportRow row;
            row.experiment = "coverage";
            row.alpha = config.alpha_grid[a];
            row.delta = delta;
            row.xi = config.xi;
            row.horizon = config.horizon;
            row.n = slot.est.n;
            row.phi_hat = slot.est.phi_hat;
            row.sigma_hat_sq = slot.est.sigma_hat_sq;
            if (slot.has_ci) {
                row.ci_lo = slot.est.ci->lo;
                row.ci_hi = slot.est.ci->hi;
            }
            row.phi_true = phi(analytic, config.alpha_grid[a]);
            row.seed = substream::make(substream::kReplication, r);
            report.rows.push_back(std::move(row));
        }
    }

    for (std::size_t a = 0; a < n_alpha; ++a) {
        const double alpha = config.alpha_grid[a];
        const double truth = phi(analytic, alpha);
        std::vector<double> scaled_errors, estimates;
        std::size_t covered = 0, with_ci = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const Slot& slot = slots[r * n_alpha + a];
            estimates.push_back(slot.est.phi_hat);
            scaled_errors.push_back(std::sqrt(static_cast<double>(slot.est.n)) *
                                    (slot.est.phi_hat - truth));
            if (slot.has_ci) {
                ++with_ci;
                if (slot.est.ci->lo <= truth && truth <= slot.est.ci->hi) ++covered;
            }
        }
        report.summary.emplace_back(
            key_with("coverage", alpha),
            with_ci ? format_double(static_cast<double>(covered) / static_cast<double>(with_ci))
                    : "nan");
        report.summary.emplace_back(key_with("ci_missing", alpha),
                                    std::to_string(reps - with_ci));
        report.summary.emplace_back(key_with("empirical_var_sqrt_n_error", alpha),
                                    format_double(sample_variance(scaled_errors)));
        report.summary.emplace_back(
            key_with("asymptotic_var", alpha),
            format_double(asymptotic_variance(analytic, alpha, config.xi)));
        report.summary.emplace_back(key_with("bias", alpha),
                                    format_double(sample_mean(estimates) - truth));
    }
    return report;
}

ExperimentReport run_resampling(const ExperimentConfig& config, const RunOptions& options) {
    const NetInputModel analytic(config.model);
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);
    std::vector<double> deltas = config.delta_grid;
    if (deltas.empty()) deltas.push_back(resolve_delta(config));
    std::vector<std::size_t> ks = config.k_grid;
    if (ks.empty()) ks.push_back(config.resamples);
    const std::size_t reps = config.replications;
    const std::size_t n_alpha = config.alpha_grid.size();

    Philox rng_path(config.seed, substream::make(substream::kPath, 0));
    const double v0 = draw_initial(sm, config, rng_path);
    const WorkloadPath path = simulate_path(std::span<const CompoundPoissonSpec>(sm.components),
                                            config.horizon, v0, rng_path);
    std::vector<GridObservations> grids;
    grids.reserve(deltas.size());
    for (double delta : deltas) grids.push_back(sample_grid(path, delta));

    struct Cell {
        double mean_phi = 0.0;
        double mean_n = 0.0;
    };
    std::vector<Cell> cells(deltas.size() * ks.size() * reps * n_alpha);
    const auto cell_index = [&](std::size_t d, std::size_t k, std::size_t r, std::size_t a) {
        return ((d * ks.size() + k) * reps + r) * n_alpha + a;
    };

    parallel_for(deltas.size() * ks.size() * reps, options.threads, [&](std::size_t flat) {
        const std::size_t r = flat % reps;
        const std::size_t k = (flat / reps) % ks.size();
        const std::size_t d = flat / (reps * ks.size());
        Philox rng(config.seed, substream::make(substream::kResample, flat));
        for (std::size_t a = 0; a < n_alpha; ++a) {
            const ResampleEstimate re = resample_estimate(
                grids[d], config.horizon, config.xi, ks[k], config.alpha_grid[a], rng);
            double total_n = 0.0;
            for (const auto& iter : re.per_iteration)
                total_n += static_cast<double>(iter.n);
            cells[cell_index(d, k, r, a)] = {re.mean_phi,
                                             total_n / static_cast<double>(re.k())};
        }
    });

    ExperimentReport report;
    common_summary(config, sm, report.summary);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        for (std::size_t k = 0; k < ks.size(); ++k) {
            for (std::size_t r = 0; r < reps; ++r) {
                for (std::size_t a = 0; a < n_alpha; ++a) {
                    const Cell& cell = cells[cell_index(d, k, r, a)];
                    ReportRow row;
                    row.experiment = "resample k=" + std::to_string(ks[k]);
                    row.alpha = config.alpha_grid[a];
                    row.delta = deltas[d];
                    row.xi = config.xi;
                    row.horizon = config.horizon;
                    row.n = static_cast<std::size_t>(std::llround(cell.mean_n));
                    row.phi_hat = cell.mean_phi;
                    row.phi_true = phi(analytic, config.alpha_grid[a]);
                    row.seed = substream::make(
                        substream::kResample, (d * ks.size() + k) * reps + r);
                    report.rows.push_back(std::move(row));
                }
            }
            for (std::size_t a = 0; a < n_alpha; ++a) {
                std::vector<double> values;
                values.reserve(reps);
                for (std::size_t r = 0; r < reps; ++r)
                    values.push_back(cells[cell_index(d, k, r, a)].mean_phi);
                std::ostringstream key;
                key << "dispersion delta=" << format_compact(deltas[d]) << " k=" << ks[k]
                    << " alpha=" << format_compact(config.alpha_grid[a]);
                report.summary.emplace_back(key.str(), format_double(sample_variance(values)));
            }
        }
    }
    return report;
}

FigureReport run_figures(const ExperimentConfig& config) {
    const NetInputModel analytic(config.model);
    // Exponent of the truncated approximation; coincides with phi when the
    // model has no infinite-activity part to truncate.
    std::optional<NetInputModel> truncated_model;
    try {
        truncated_model.emplace(truncated(config.model, config.epsilon));
    } catch (const std::invalid_argument&) {
    }
    const SimulableModel sm = prepare_simulable(config.model, config.epsilon, config.table_size);

    std::vector<double> alphas;
    for (int i = 0; i <= 100; ++i) alphas.push_back(static_cast<double>(i) * 0.1);
    std::vector<double> phi_curve, phi_eps_curve;
    for (double alpha : alphas) {
        phi_curve.push_back(phi(analytic, alpha));
        phi_eps_curve.push_back(truncated_model ? phi(*truncated_model, alpha)
                                                : phi_curve.back());
    }

    FigureReport report;
    common_summary(config, sm, report.summary);

    struct Setup {
        const char* name;
        double horizon;
        double delta;
        std::uint64_t path_stream;
        std::size_t realisations;
        std::uint64_t first_probe_stream;
    };
    const Setup setups[] = {
        {"coarse", 25.0, 1.0, substream::make(substream::kPath, 0), 5, 0},
        {"fine", 100.0, 4e-4, substream::make(substream::kPath, 1), 1, 5},
    };
    const double xi = 1.0;  // both figure setups probe at unit rate

    for (const Setup& setup : setups) {
        Philox rng_path(config.seed, setup.path_stream);
        const double v0 = draw_initial(sm, config, rng_path);
        const WorkloadPath path = simulate_path(
            std::span<const CompoundPoissonSpec>(sm.components), setup.horizon, v0, rng_path);
        const GridObservations grid = sample_grid(path, setup.delta);
        for (std::size_t k = 0; k < setup.realisations; ++k) {
            Philox rng(config.seed,
                       substream::make(substream::kFigure, setup.first_probe_stream + k));
            const ProbeSample sample = draw_probes(grid, setup.horizon, xi, rng);
            {
                std::ostringstream key;
                key << "n " << setup.name << " r" << k;
                report.summary.emplace_back(key.str(), std::to_string(sample.n()));
            }
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                FigureCurvePoint point;
                point.setup = setup.name;
                point.realisation = k;
                point.alpha = alphas[i];
                point.phi = phi_curve[i];
                point.phi_eps = phi_eps_curve[i];
                point.n = sample.n();
                if (alphas[i] == 0.0) {
                    point.phi_hat = 0.0;  // the estimator is identically zero at alpha = 0
                } else {
                    try {
                        const Estimate est =
                            estimate_with_ci(sample, alphas[i], config.ci_level);
                        point.phi_hat = est.phi_hat;
                        point.ci_lo = est.ci->lo;
                        point.ci_hi = est.ci->hi;
                    } catch (const NumericError&) {
                        point.phi_hat = estimate_grid(sample, alphas[i]).phi_hat;
                    }
                }
                report.points.push_back(std::move(point));
            }
        }
    }
    return report;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    for (const auto& [key, value] : report.summary) out << "# " << key << " = " << value << "\n";
    out << "experiment,alpha,delta,xi,horizon,n,phi_hat,sigma_hat_sq,ci_lo,ci_hi,phi_true,seed\n";
    for (const auto& row : report.rows) {
        out << row.experiment << ',' << format_double(row.alpha) << ','
            << format_double(row.delta) << ',' << format_double(row.xi) << ','
            << format_double(row.horizon) << ',' << row.n << ',' << format_double(row.phi_hat)
            << ',' << format_optional(row.sigma_hat_sq) << ',' << format_optional(row.ci_lo)
            << ',' << format_optional(row.ci_hi) << ',' << format_optional(row.phi_true) << ','
            << row.seed << '\n';
    }
}

void write_figure_csv(const FigureReport& report, std::ostream& out) {
    for (const auto& [key, value] : report.summary) out << "# " << key << " = " << value << "\n";
    out << "setup,realisation,alpha,phi,phi_eps,phi_hat,ci_lo,ci_hi,n\n";
    for (const auto& point : report.points) {
        out << point.setup << ',' << point.realisation << ',' << format_double(point.alpha)
            << ',' << format_double(point.phi) << ',' << format_double(point.phi_eps) << ','
            << format_double(point.phi_hat) << ',' << format_optional(point.ci_lo) << ','
            << format_optional(point.ci_hi) << ',' << point.n << '\n';
    }
}

}  // namespace levyprobe
