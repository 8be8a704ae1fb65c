#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "levyprobe/config.hpp"
#include "levyprobe/experiments.hpp"
#include "levyprobe/exponent.hpp"

using namespace levyprobe;

namespace {

ExperimentConfig mm1_config() {
    return parse_config_string(R"(
[component]
kind = compound_poisson
rate = 1
job = exponential
job_rate = 2

[experiment]
xi = 1
delta = 0.5
horizon = 400
alpha_grid = 0.5, 1, 2
seed = 7
init = stationary
replications = 5
)");
}

ExperimentConfig canonical_config() {
    return parse_config_string(R"(
[component]
kind = gamma
shape = 2
rate = 5

[component]
kind = inverse_gaussian
mean = 0.4
shape = 1

[experiment]
epsilon = 1e-5
xi = 1
delta = 0.5
horizon = 25
alpha_grid = 1
seed = 11
init = burn_in
)");
}

std::string report_to_string(const ExperimentReport& report) {
    std::ostringstream out;
    write_report_csv(report, out);
    return out.str();
}

}  // namespace

TEST_CASE("simulable decomposition") {
    SUBCASE("a compound Poisson model passes through untouched") {
        const auto config = mm1_config();
        const SimulableModel sm = prepare_simulable(config.model, config.epsilon, 1024);
        CHECK(sm.components.size() == 1);
        CHECK(!sm.truncation.has_value());
        CHECK(sm.total_rate == 1.0);
        CHECK(sm.mean_rate == doctest::Approx(0.5));
    }
    SUBCASE("gamma/IG parts become one truncated surrogate") {
        const auto config = canonical_config();
        const SimulableModel sm = prepare_simulable(config.model, config.epsilon, 1024);
        CHECK(sm.components.size() == 1);
        REQUIRE(sm.truncation.has_value());
        CHECK(sm.truncation->epsilon == 1e-5);
        // E J_eps(1) reproduces the truncated drift
        CHECK(std::abs(sm.mean_rate - (1.0 - 0.202543)) < 1e-4);
        CHECK(sm.total_rate == doctest::Approx(sm.truncation->rate));
    }
    SUBCASE("mixed models keep exact parts exact") {
        const auto spec = sum_of({gamma_process(1.0, 4.0),
                                  compound_poisson(0.3, JobDistribution::exponential(2.0))});
        const SimulableModel sm = prepare_simulable(spec, 1e-5, 1024);
        CHECK(sm.components.size() == 2);
        REQUIRE(sm.truncation.has_value());
        CHECK(std::abs(sm.mean_rate - (0.25 + 0.15)) < 1e-3);
    }
}

TEST_CASE("reports are byte-identical for identical configs") {
    const std::string a = report_to_string(run_estimate(mm1_config()));
    const std::string b = report_to_string(run_estimate(mm1_config()));
    CHECK(a == b);
    CHECK(a.find("experiment,alpha,delta,xi,horizon,n,phi_hat,sigma_hat_sq,ci_lo,ci_hi,"
                 "phi_true,seed") != std::string::npos);

    // a different seed changes the body
    ExperimentConfig other = mm1_config();
    other.seed = 8;
    CHECK(report_to_string(run_estimate(other)) != a);
}

TEST_CASE("replication substreams do not depend on the replication count") {
    ExperimentConfig small = mm1_config();
    small.horizon = 100.0;
    small.replications = 3;
    ExperimentConfig large = small;
    large.replications = 5;
    const ExperimentReport rs = run_coverage(small);
    const ExperimentReport rl = run_coverage(large);
    REQUIRE(rs.rows.size() == 3 * small.alpha_grid.size());
    for (std::size_t i = 0; i < rs.rows.size(); ++i) {
        CHECK(rs.rows[i].phi_hat == rl.rows[i].phi_hat);
        CHECK(rs.rows[i].n == rl.rows[i].n);
        CHECK(rs.rows[i].seed == rl.rows[i].seed);
    }
}

TEST_CASE("worker threads do not change the report") {
    ExperimentConfig config = mm1_config();
    config.horizon = 100.0;
    config.replications = 6;
    const std::string serial = report_to_string(run_coverage(config, {1}));
    const std::string threaded = report_to_string(run_coverage(config, {2}));
    CHECK(serial == threaded);
}

TEST_CASE("coverage experiment output") {
    ExperimentConfig config = mm1_config();
    config.horizon = 200.0;
    config.delta = 0.1;
    config.replications = 8;
    const ExperimentReport report = run_coverage(config, {2});
    CHECK(report.rows.size() == 8 * config.alpha_grid.size());
    bool found_coverage = false, found_var = false;
    for (const auto& [key, value] : report.summary) {
        if (key.rfind("coverage", 0) == 0) {
            found_coverage = true;
            const double v = std::stod(value);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        if (key.rfind("asymptotic_var", 0) == 0) found_var = true;
    }
    CHECK(found_coverage);
    CHECK(found_var);
    for (const auto& row : report.rows) {
        REQUIRE(row.phi_true.has_value());
        if (row.ci_lo) CHECK(*row.ci_lo <= row.phi_hat);
        if (row.ci_hi) CHECK(*row.ci_hi >= row.phi_hat);
    }
}

TEST_CASE("a single replication yields all-or-nothing coverage") {
    ExperimentConfig config = mm1_config();
    config.horizon = 150.0;
    config.delta = 0.1;
    config.alpha_grid = {1.0};
    config.replications = 1;
    const ExperimentReport report = run_coverage(config);
    bool found = false;
    for (const auto& [key, value] : report.summary) {
        if (key == "coverage alpha=1") {
            found = true;
            CHECK((value == "0" || value == "1"));
        }
    }
    CHECK(found);
}

TEST_CASE("consistency experiment shrinks the error on a null input") {
    // drain-only input: every observation is zero, so phi_hat is exactly alpha
    const ExperimentConfig config = parse_config_string(R"(
[component]
kind = compound_poisson
rate = 1e-12
job = deterministic
job_size = 1

[experiment]
xi = 1
delta = 0.5
horizon = 80
alpha_grid = 0.5, 1, 2
seed = 3
init = fixed
init_value = 0
)");
    const ExperimentReport report = run_consistency(config);
    REQUIRE(!report.rows.empty());
    for (const auto& row : report.rows) {
        CHECK(row.phi_hat == row.alpha);
        CHECK(*row.phi_true == doctest::Approx(row.alpha).epsilon(1e-9));
    }
}

TEST_CASE("consistency experiment on the exponential-jobs queue") {
    ExperimentConfig config = mm1_config();
    config.horizon = 2000.0;
    config.delta_grid = {0.1, 0.5, 2.0};
    const ExperimentReport report = run_consistency(config);
    const NetInputModel model(config.model);
    // rows exist for every delta at the full horizon and the error is small
    int final_rows = 0;
    for (const auto& row : report.rows) {
        if (row.horizon == config.horizon) {
            ++final_rows;
            CHECK(std::abs(row.phi_hat - *row.phi_true) < 0.15);
        }
    }
    CHECK(final_rows == 9);  // 3 deltas x 3 alphas
    int summaries = 0;
    for (const auto& [key, value] : report.summary)
        if (key.rfind("final_abs_error", 0) == 0) ++summaries;
    CHECK(summaries == 9);
}

TEST_CASE("resampling experiment reduces dispersion with larger K") {
    ExperimentConfig config = mm1_config();
    config.horizon = 25.0;
    config.delta = 0.5;
    config.alpha_grid = {1.0};
    config.replications = 40;  // dispersion sample size
    config.k_grid = {1, 25};
    config.init = InitKind::Fixed;
    config.init_value = 0.0;
    const ExperimentReport report = run_resampling(config, {2});
    double disp_k1 = -1.0, disp_k25 = -1.0;
    for (const auto& [key, value] : report.summary) {
        if (key.rfind("dispersion", 0) == 0) {
            if (key.find("k=1 ") != std::string::npos) disp_k1 = std::stod(value);
            if (key.find("k=25") != std::string::npos) disp_k25 = std::stod(value);
        }
    }
    REQUIRE(disp_k1 > 0.0);
    REQUIRE(disp_k25 > 0.0);
    CHECK(disp_k25 < 0.5 * disp_k1);
    CHECK(report.rows.size() == 2 * 40);
}

TEST_CASE("heavy resampling makes repeated realisations nearly coincide") {
    ExperimentConfig config = canonical_config();
    config.delta_grid = {0.2, 1.0};
    config.k_grid = {1000};
    config.replications = 2;
    const ExperimentReport report = run_resampling(config, {2});
    // per delta: two repetitions of the K=1000 average
    for (double delta : config.delta_grid) {
        std::vector<double> pair;
        for (const auto& row : report.rows)
            if (row.delta == delta) pair.push_back(row.phi_hat);
        REQUIRE(pair.size() == 2);
        CHECK(std::abs(pair[0] - pair[1]) < 0.05);
    }
}

TEST_CASE("figure curves") {
    const FigureReport report = run_figures(canonical_config());
    const NetInputModel model(canonical_config().model);
    // 5 coarse-setup realisations plus one fine-setup realisation, 101 points each
    CHECK(report.points.size() == 6 * 101);
    for (const auto& point : report.points) {
        if (point.alpha == 0.0) {
            CHECK(point.phi == 0.0);
            CHECK(point.phi_eps == 0.0);
            CHECK(point.phi_hat == 0.0);
        }
        CHECK(point.phi_eps >= point.phi);
    }
    // the fine-grid setup sees emptiness, so its band is present away from 0
    for (const auto& point : report.points) {
        if (point.setup == "fine" && point.alpha >= 0.5) {
            REQUIRE(point.ci_lo.has_value());
            CHECK(*point.ci_lo <= point.phi_hat);
            CHECK(*point.ci_hi >= point.phi_hat);
        }
    }
    // truncation gap at alpha = 10 is positive but small
    const auto& last = report.points[100];
    CHECK(last.alpha == doctest::Approx(10.0));
    CHECK(last.phi == doctest::Approx(phi(model, 10.0)).epsilon(1e-12));
    CHECK(last.phi_eps - last.phi > 0.0);
    CHECK(last.phi_eps - last.phi < 0.05);
    // coarse-setup probe counts concentrate around xi T = 25
    for (const auto& [key, value] : report.summary) {
        if (key.rfind("n coarse", 0) == 0) {
            const double n = std::stod(value);
            CHECK(n > 5.0);
            CHECK(n < 50.0);
        }
    }
    std::ostringstream out;
    write_figure_csv(report, out);
    CHECK(out.str().find("setup,realisation,alpha,phi,phi_eps,phi_hat,ci_lo,ci_hi,n") !=
          std::string::npos);
}

TEST_CASE("estimation runs end to end on a mixed exact/truncated model") {
    const ExperimentConfig config = parse_config_string(R"(
[component]
kind = gamma
shape = 1
rate = 4

[component]
kind = compound_poisson
rate = 0.3
job = exponential
job_rate = 2

[experiment]
epsilon = 1e-4
xi = 1
delta = 0.25
horizon = 2000
alpha_grid = 1
seed = 17
init = burn_in
)");
    const ExperimentReport report = run_estimate(config);
    REQUIRE(report.rows.size() == 1);
    const ReportRow& row = report.rows[0];
    const NetInputModel model(config.model);
    // E J(1) = 0.25 + 0.15; a long run should land near the true exponent
    CHECK(std::abs(row.phi_hat - phi(model, 1.0)) < 0.08);
    REQUIRE(row.ci_lo.has_value());
    CHECK(*row.ci_lo < *row.phi_true);
    CHECK(*row.ci_hi > *row.phi_true);
}

TEST_CASE("grid export uses the documented header") {
    ExperimentConfig config = mm1_config();
    config.horizon = 10.0;
    const GridObservations grid = run_simulate(config);
    std::ostringstream out;
    write_grid_csv(grid, out);
    const std::string text = out.str();
    CHECK(text.rfind("i,t,v\n", 0) == 0);
    CHECK(grid.values.size() == 21);  // horizon 10, delta 0.5
}
