// Acceptance gate: one numbered check per release criterion, each printing a
// single [PASS]/[FAIL] line ([SKIP] when optional input is absent).  The exit
// code is the number of failed criteria.  All tolerances are literal in the
// criterion bodies; the master seed fixes every random stream.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <stdexcept>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spectest/bootstrap.hpp"
#include "spectest/competitors.hpp"
#include "spectest/dataio.hpp"
#include "spectest/fit.hpp"
#include "spectest/model.hpp"
#include "spectest/projection.hpp"
#include "spectest/rng.hpp"
#include "spectest/simulation.hpp"
#include "spectest/statistic.hpp"

#include "oracles.hpp"

using namespace spectest;

namespace {

constexpr std::uint64_t kSeed = 20240819;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const char* name, const std::function<Outcome()>& body) {
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& ex) {
        out.pass = false;
        out.detail = std::string("exception: ") + ex.what();
    }
    if (!out.pass) ++g_failures;
    std::printf("[%s] %2d %-24s %s\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

ScenarioSpec scenario(int id, int p, double a, int n,
                      CovKind cov = CovKind::identity, double rho = 0.5) {
    ScenarioSpec spec;
    spec.id = id;
    spec.p = p;
    spec.a = a;
    spec.n = n;
    spec.cov = cov;
    spec.rho = rho;
    return spec;
}

PowerTable run_cells(const std::vector<ScenarioSpec>& grid,
                     const std::vector<StatisticKind>& kinds, int reps, int workers) {
    std::vector<StatisticSpec> stats;
    for (auto kind : kinds) {
        StatisticSpec s;
        s.kind = kind;
        stats.push_back(s);
    }
    PowerStudyOptions opts;
    opts.reps = reps;
    opts.B = 300;
    opts.level = 0.05;
    opts.seed = kSeed;
    opts.workers = workers;
    return run_power_study(grid, stats, opts);
}

double rate_of(const PowerTable& table, std::size_t row) { return table.rows.at(row).rate; }

// Cached criterion tables so the determinism criterion can re-use the
// single-worker runs instead of repeating them.
PowerTable g_size_table;      // criterion 2
PowerTable g_dep_null_table;  // criterion 5, a = 0
PowerTable g_dep_alt_table;   // criterion 5, a = 1

Outcome kernel_certification() {
    const auto start = std::chrono::steady_clock::now();
    const auto report = validate_kernel(50, 1000000, kSeed);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome out;
    out.pass = report.pass && seconds <= 120.0;
    out.detail = fmt("closed form within 4 SE in %d/50 cases, %.1fs (limit 120s)",
                     50 - report.failures, seconds);
    return out;
}

Outcome empirical_size() {
    g_size_table = run_cells({scenario(1, 2, 0.0, 200)}, {StatisticKind::tn}, 500, 1);
    const double rate = rate_of(g_size_table, 0);
    Outcome out;
    out.pass = rate >= 0.03 && rate <= 0.08 && !g_size_table.rows[0].failed;
    out.detail = fmt("size %.4f at nominal 0.05, expected window [0.03, 0.08]", rate);
    return out;
}

Outcome low_dim_power() {
    const auto table = run_cells({scenario(1, 2, 1.0, 200)}, {StatisticKind::tn}, 200, 1);
    const double rate = rate_of(table, 0);
    Outcome out;
    out.pass = rate >= 0.95;
    out.detail = fmt("power %.4f, expected >= 0.95", rate);
    return out;
}

Outcome high_dim_power() {
    const auto table = run_cells({scenario(1, 8, 0.6, 200)}, {StatisticKind::tn}, 500, 1);
    const double rate = rate_of(table, 0);
    Outcome out;
    out.pass = rate >= 0.87 && rate <= 0.99;
    out.detail = fmt("power %.4f, expected window [0.87, 0.99]", rate);
    return out;
}

Outcome dependent_design() {
    g_dep_null_table = run_cells({scenario(3, 8, 0.0, 200, CovKind::ar1, 0.5)},
                                 {StatisticKind::tn}, 500, 1);
    g_dep_alt_table = run_cells({scenario(3, 8, 1.0, 200, CovKind::ar1, 0.5)},
                                {StatisticKind::tn}, 200, 1);
    const double size = rate_of(g_dep_null_table, 0);
    const double power = rate_of(g_dep_alt_table, 0);
    Outcome out;
    out.pass = size >= 0.02 && size <= 0.08 && power >= 0.95;
    out.detail = fmt("ar1(0.5) size %.4f in [0.02, 0.08], power %.4f >= 0.95", size, power);
    return out;
}

Outcome relative_power() {
    const auto s1 = run_cells({scenario(1, 8, 0.6, 200)},
                              {StatisticKind::tn, StatisticKind::zheng, StatisticKind::stute},
                              300, 1);
    const auto s2 = run_cells({scenario(2, 8, 1.0, 200)},
                              {StatisticKind::tn, StatisticKind::stute}, 300, 1);
    const double tn1 = rate_of(s1, 0), zh1 = rate_of(s1, 1), st1 = rate_of(s1, 2);
    const double tn2 = rate_of(s2, 0), st2 = rate_of(s2, 1);
    Outcome out;
    out.pass = tn1 > st1 && tn1 > zh1 && tn2 > st2;
    out.detail = fmt("scenario 1: tn %.3f vs zheng %.3f, stute %.3f; "
                     "scenario 2: tn %.3f vs stute %.3f",
                     tn1, zh1, st1, tn2, st2);
    return out;
}

Outcome drift_law() {
    const auto spec = scenario(1, 2, 1.0, 200);
    const auto oracle = global_drift_oracle(spec, 1000000, kSeed);

    struct Level {
        int n;
        RunningMoments stats;
    };
    std::vector<Level> levels = {{100, {}}, {200, {}}, {400, {}}};
    for (auto& level : levels) {
        const auto gen = make_scenario(scenario(1, 2, 1.0, level.n));
        for (std::uint64_t rep = 0; rep < 200; ++rep) {
            const auto sample = sample_scenario(
                gen, level.n, rng::derive(kSeed, {1007, static_cast<std::uint64_t>(level.n), rep}));
            const auto fit = fit_least_squares(gen.null_model, sample.data);
            level.stats.add(tn_statistic(fit.residuals, pairwise_weights(sample.data.X)) /
                            level.n);
        }
    }

    bool pass = true;
    for (const auto& level : levels) {
        const double gap = std::abs(level.stats.mean - oracle.estimate);
        if (gap > 4.0 * std::hypot(level.stats.std_error(), oracle.std_error)) pass = false;
    }
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = i + 1; j < levels.size(); ++j) {
            const double gap = std::abs(levels[i].stats.mean - levels[j].stats.mean);
            if (gap > 4.0 * std::hypot(levels[i].stats.std_error(), levels[j].stats.std_error()))
                pass = false;
        }

    Outcome out;
    out.pass = pass;
    out.detail = fmt("mean T_n/n = %.4f/%.4f/%.4f at n=100/200/400 vs drift %.4f +- %.4f",
                     levels[0].stats.mean, levels[1].stats.mean, levels[2].stats.mean,
                     oracle.estimate, oracle.std_error);
    return out;
}

Outcome root_n_consistency() {
    auto rmse_at = [&](int n) {
        const auto gen = make_scenario(scenario(4, 6, 0.0, n));
        RunningMoments sq;
        int skipped = 0;
        for (std::uint64_t rep = 0; rep < 200; ++rep) {
            const auto sample =
                sample_scenario(gen, n, rng::derive(kSeed, {1008, static_cast<std::uint64_t>(n), rep}));
            FitOptions opts;
            opts.init = gen.true_theta;
            // A few replicates stall a hair above the default 1e-8 stationarity
            // tolerance once the SSR decrease hits the double-precision floor;
            // 1e-7 is still orders below the n^{-1/2} statistical error.
            opts.grad_tol = 1e-7;
            const auto fit = fit_least_squares(gen.null_model, sample.data, opts);
            if (!fit.converged) {
                ++skipped;
                continue;
            }
            sq.add((fit.theta - sample.true_theta).squaredNorm());
        }
        if (skipped > 4) throw std::runtime_error(fmt("%d/200 fits failed to converge", skipped));
        return std::sqrt(sq.mean);
    };
    const double coarse = rmse_at(100);
    const double fine = rmse_at(400);
    const double ratio = coarse / fine;
    Outcome out;
    out.pass = ratio >= 1.4 && ratio <= 2.6;
    out.detail = fmt("RMSE ratio n=100/n=400 = %.3f (%.4f / %.4f), expected [1.4, 2.6]",
                     ratio, coarse, fine);
    return out;
}

Outcome oracle_equivalence() {
    double worst = 0.0;
    const auto rel = [&](double got, double want) {
        const double scale = std::max({std::abs(got), std::abs(want), 1e-30});
        worst = std::max(worst, std::abs(got - want) / scale);
    };
    for (std::uint64_t k = 0; k < 20; ++k) {
        const int n = 4 + static_cast<int>(k % 5);
        const int p = 1 + static_cast<int>(k % 4);
        const double h = 0.5 + 0.1 * static_cast<double>(k % 7);
        const Eigen::MatrixXd X = oracles::random_matrix(n, p, rng::derive(kSeed, {1009, k, 1}));
        const Eigen::VectorXd e = oracles::random_vector(n, rng::derive(kSeed, {1009, k, 2}));
        const std::uint64_t dir_seed = rng::derive(kSeed, {1009, k, 3});
        const Eigen::MatrixXd dirs = lavergne_directions(p, 48, dir_seed);

        rel(tn_statistic(e, pairwise_weights(X)), oracles::tn(e, X));
        rel(zheng_statistic(e, X, h), oracles::zheng(e, X, h));
        rel(lavergne_statistic(e, X, h, 48, dir_seed), oracles::lavergne(e, X, h, dirs));
        rel(stute_cvm_statistic(e, X), oracles::stute(e, X));
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    out.detail = fmt("worst relative gap %.3g over 20 instances x 4 statistics (tol 1e-12)",
                     worst);
    return out;
}

Outcome autompg_pvalue(const std::string& path) {
    LoadReport report;
    const DataSet data = with_intercept(load_autompg(path, &report));
    const auto model = make_builtin(ModelFamily::linear, static_cast<int>(data.p()));
    StatisticSpec stat;
    stat.kind = StatisticKind::tn;
    BootstrapOptions opts;
    opts.B = 300;
    opts.seed = kSeed;
    const auto result = wild_bootstrap_test(model, data, stat, opts);
    Outcome out;
    out.pass = result.p_value <= 0.01;
    out.detail = fmt("n=%ld (dropped %d), T_n=%.4f, p=%.6f, expected p <= 0.01",
                     static_cast<long>(data.n()), report.dropped_rows, result.observed,
                     result.p_value);
    return out;
}

Outcome determinism() {
    if (g_size_table.rows.empty() || g_dep_null_table.rows.empty() ||
        g_dep_alt_table.rows.empty())
        throw std::runtime_error("prerequisite tables missing (criteria 2/5 did not run)");
    const auto size3 = run_cells({scenario(1, 2, 0.0, 200)}, {StatisticKind::tn}, 500, 3);
    const auto null3 = run_cells({scenario(3, 8, 0.0, 200, CovKind::ar1, 0.5)},
                                 {StatisticKind::tn}, 500, 3);
    const auto alt3 = run_cells({scenario(3, 8, 1.0, 200, CovKind::ar1, 0.5)},
                                {StatisticKind::tn}, 200, 3);
    const bool same = power_csv_string(size3) == power_csv_string(g_size_table) &&
                      power_csv_string(null3) == power_csv_string(g_dep_null_table) &&
                      power_csv_string(alt3) == power_csv_string(g_dep_alt_table);
    Outcome out;
    out.pass = same;
    out.detail = same ? "1-worker and 3-worker tables byte-identical across 3 studies"
                      : "tables differ between worker counts";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::string autompg_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--autompg") autompg_path = argv[i + 1];

    std::printf("acceptance checks (master seed %llu)\n",
                static_cast<unsigned long long>(kSeed));

    run_criterion(1, "kernel certification", kernel_certification);
    run_criterion(2, "empirical size", empirical_size);
    run_criterion(3, "low-dimension power", low_dim_power);
    run_criterion(4, "high-dimension power", high_dim_power);
    run_criterion(5, "dependent design", dependent_design);
    run_criterion(6, "relative power", relative_power);
    run_criterion(7, "drift law", drift_law);
    run_criterion(8, "root-n consistency", root_n_consistency);
    run_criterion(9, "oracle equivalence", oracle_equivalence);
    if (autompg_path.empty() || !std::filesystem::exists(autompg_path)) {
        std::printf("[SKIP] 10 auto mpg                 data file not found (pass --autompg <path>)\n");
    } else {
        run_criterion(10, "auto mpg", [&] { return autompg_pvalue(autompg_path); });
    }
    run_criterion(11, "determinism", determinism);

    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
