#include "spectest/simulation.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectest/parallel.hpp"
#include "spectest/projection.hpp"
#include "spectest/rng.hpp"

namespace spectest {

namespace {

void check_spec(const ScenarioSpec& spec) {
    if (spec.id < 1 || spec.id > 4)
        throw std::invalid_argument("scenario: id must be 1..4, got " + std::to_string(spec.id));
    if (spec.p < 1) throw std::invalid_argument("scenario: p must be positive");
    if (spec.id == 2 && spec.p % 2 != 0)
        throw std::invalid_argument("scenario 2: p must be even, got " + std::to_string(spec.p));
    if (spec.id == 4 && spec.p != 6)
        throw std::invalid_argument("scenario 4: p must be 6, got " + std::to_string(spec.p));
    if (spec.a < 0.0) throw std::invalid_argument("scenario: amplitude a must be >= 0");
    if (spec.n < 2) throw std::invalid_argument("scenario: n must be at least 2");
}

} // namespace

Eigen::MatrixXd ar1_covariance(Eigen::Index p, double rho) {
    if (p < 1) throw std::invalid_argument("ar1_covariance: p must be positive");
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("ar1_covariance: need |rho| < 1");
    Eigen::MatrixXd cov(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            cov(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    return cov;
}

ScenarioGenerator make_scenario(const ScenarioSpec& spec) {
    check_spec(spec);
    const int p = spec.p;

    ScenarioGenerator gen;
    gen.spec = spec;
    gen.cov = spec.cov == CovKind::ar1 ? ar1_covariance(p, spec.rho)
                                       : Eigen::MatrixXd::Identity(p, p);
    gen.chol = Eigen::LLT<Eigen::MatrixXd>(gen.cov).matrixL();

    switch (spec.id) {
        case 1: {
            // Y = b'X + a cos(b'X) + eps, b = (1,..,1)/sqrt(p)
            gen.beta = Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
            gen.true_theta = gen.beta;
            gen.null_model = make_builtin(ModelFamily::linear, p);
            const Eigen::VectorXd b = gen.beta;
            gen.departure = [b](const Eigen::VectorXd& x) { return std::cos(b.dot(x)); };
            break;
        }
        case 2: {
            // Y = b1'X + a 0.3 (0.5 + b2'X)^3 + eps, directions on disjoint halves
            const int half = p / 2;
            const double scale = 1.0 / std::sqrt(static_cast<double>(half));
            gen.beta = Eigen::VectorXd::Zero(p);
            gen.beta2 = Eigen::VectorXd::Zero(p);
            gen.beta.head(half).setConstant(scale);
            gen.beta2.tail(half).setConstant(scale);
            gen.true_theta = gen.beta;
            gen.null_model = make_builtin(ModelFamily::linear, p);
            const Eigen::VectorXd b2 = gen.beta2;
            gen.departure = [b2](const Eigen::VectorXd& x) {
                const double u = 0.5 + b2.dot(x);
                return 0.3 * u * u * u;
            };
            break;
        }
        case 3: {
            // Y = b'X + a exp(-(b'X)^2) + eps
            gen.beta = Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
            gen.true_theta = gen.beta;
            gen.null_model = make_builtin(ModelFamily::linear, p);
            const Eigen::VectorXd b = gen.beta;
            gen.departure = [b](const Eigen::VectorXd& x) {
                const double u = b.dot(x);
                return std::exp(-u * u);
            };
            break;
        }
        case 4: {
            // Nonlinear null with departure a cos(x2 + x3)
            gen.beta = Eigen::VectorXd::Zero(p);
            gen.beta[1] = 1.0;
            gen.beta[2] = 1.0;
            gen.true_theta = Eigen::VectorXd::Constant(5, 1.0 / std::sqrt(6.0));
            gen.null_model = make_builtin(ModelFamily::scenario4_null, p);
            const Eigen::VectorXd b = gen.beta;
            gen.departure = [b](const Eigen::VectorXd& x) { return std::cos(b.dot(x)); };
            break;
        }
    }

    const ParametricModel model = gen.null_model;
    const Eigen::VectorXd theta0 = gen.true_theta;
    gen.null_mean = [model, theta0](const Eigen::VectorXd& x) { return model.mean(x, theta0); };
    return gen;
}

ScenarioSample sample_scenario(const ScenarioGenerator& gen, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_scenario: n must be at least 2");
    const int p = gen.spec.p;
    auto engine = rng::stream(seed, {rng::kScenarioSample});
    std::normal_distribution<double> normal(0.0, 1.0);

    // Fixed draw order: all predictor rows first, then the noise vector.
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd z(p);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < p; ++c) z[c] = normal(engine);
        X.row(i) = (gen.chol * z).transpose();
    }
    Eigen::VectorXd eps(n);
    for (int i = 0; i < n; ++i) eps[i] = normal(engine);

    Eigen::VectorXd ell(n), y(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = X.row(i).transpose();
        ell[i] = gen.departure(x);
        y[i] = gen.null_mean(x) + gen.spec.a * ell[i] + eps[i];
    }

    ScenarioSample sample;
    sample.data = make_dataset(std::move(X), std::move(y));
    sample.true_theta = gen.true_theta;
    sample.ell = std::move(ell);
    return sample;
}

PowerTable run_power_study(const std::vector<ScenarioSpec>& grid,
                           const std::vector<StatisticSpec>& statistics,
                           const PowerStudyOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("power study: empty scenario grid");
    if (statistics.empty()) throw std::invalid_argument("power study: no statistics given");
    if (opts.reps < 1) throw std::invalid_argument("power study: reps must be at least 1");
    if (opts.B < 1) throw std::invalid_argument("power study: B must be at least 1");
    if (!(opts.level > 0.0 && opts.level < 1.0))
        throw std::invalid_argument("power study: level must lie in (0, 1)");

    std::vector<ScenarioGenerator> gens;
    gens.reserve(grid.size());
    for (const auto& spec : grid) gens.push_back(make_scenario(spec));

    const std::size_t n_cells = grid.size();
    const std::size_t n_stats = statistics.size();
    const std::size_t reps = static_cast<std::size_t>(opts.reps);
    const std::size_t n_jobs = n_cells * reps;

    // Per (job, statistic) outcome: 1 reject, 0 accept, -1 failed replicate.
    std::vector<std::int8_t> outcome(n_jobs * n_stats, 0);
    std::vector<double> spent(n_jobs * n_stats, 0.0);

    parallel_for(n_jobs, opts.workers, [&](std::size_t job) {
        const std::size_t cell = job / reps;
        const std::uint64_t rep = static_cast<std::uint64_t>(job % reps);
        const std::uint64_t cell_id = static_cast<std::uint64_t>(cell);
        const ScenarioGenerator& gen = gens[cell];

        const ScenarioSample sample = sample_scenario(
            gen, gen.spec.n, rng::derive(opts.seed, {rng::kScenarioSample, cell_id, rep}));

        FitOptions fit;
        if (gen.null_model.family != ModelFamily::linear) {
            // Start near the generating parameter, lightly perturbed.
            auto init_engine = rng::stream(opts.seed, {rng::kFitInit, cell_id, rep});
            std::normal_distribution<double> normal(0.0, 0.01);
            Eigen::VectorXd init = gen.true_theta;
            for (Eigen::Index k = 0; k < init.size(); ++k) init[k] += normal(init_engine);
            fit.init = std::move(init);
        }

        for (std::size_t s = 0; s < n_stats; ++s) {
            StatisticSpec stat = statistics[s];
            if (stat.kind == StatisticKind::lavergne)
                stat.direction_seed = rng::derive(opts.seed, {rng::kDirections, cell_id, rep});

            BootstrapOptions bopts;
            bopts.B = opts.B;
            bopts.law = opts.law;
            bopts.level = opts.level;
            bopts.seed = rng::derive(opts.seed, {rng::kBootstrap, cell_id, rep});
            bopts.workers = 1;  // parallelism lives at the replicate level
            bopts.fit = fit;

            const auto start = std::chrono::steady_clock::now();
            std::int8_t flag;
            try {
                flag = wild_bootstrap_test(gen.null_model, sample.data, stat, bopts).reject
                           ? std::int8_t{1}
                           : std::int8_t{0};
            } catch (const std::exception&) {
                flag = -1;
            }
            outcome[job * n_stats + s] = flag;
            spent[job * n_stats + s] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });

    PowerTable table;
    table.rows.reserve(n_cells * n_stats);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        for (std::size_t s = 0; s < n_stats; ++s) {
            PowerCell row;
            row.scenario = grid[cell].id;
            row.p = grid[cell].p;
            row.a = grid[cell].a;
            row.n = grid[cell].n;
            row.stat = statistic_name(statistics[s].kind);
            for (std::size_t r = 0; r < reps; ++r) {
                const std::size_t idx = (cell * reps + r) * n_stats + s;
                row.elapsed_seconds += spent[idx];
                if (outcome[idx] < 0) {
                    ++row.failed_reps;
                    continue;
                }
                ++row.reps;
                if (outcome[idx] > 0) ++row.rejections;
            }
            row.failed = row.failed_reps > 0.02 * opts.reps;
            if (row.reps > 0) {
                row.rate = static_cast<double>(row.rejections) / row.reps;
                row.mc_stderr = std::sqrt(row.rate * (1.0 - row.rate) / row.reps);
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

MonteCarloEstimate global_drift_oracle(const ScenarioSpec& spec, long mc_pairs,
                                       std::uint64_t seed,
                                       const std::function<double(const Eigen::VectorXd&)>&
                                           ell_override) {
    if (!(spec.a > 0.0))
        throw std::invalid_argument("drift oracle: amplitude a must be positive");
    if (mc_pairs < 10000)
        throw std::invalid_argument("drift oracle: need at least 10000 pairs");

    const ScenarioGenerator gen = make_scenario(spec);
    const auto& ell = ell_override ? ell_override : gen.departure;
    const int p = spec.p;

    auto engine = rng::stream(seed, {rng::kOraclePairs});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(p), xi(p), xj(p);

    // mu1 = E[a^2 ell(X) ell(X') (1 + ||X - X'||^2)^{-1/2}] over iid pairs.
    RunningMoments acc;
    for (long k = 0; k < mc_pairs; ++k) {
        for (int c = 0; c < p; ++c) z[c] = normal(engine);
        xi = gen.chol * z;
        for (int c = 0; c < p; ++c) z[c] = normal(engine);
        xj = gen.chol * z;
        const double w = 1.0 / std::sqrt(1.0 + (xi - xj).squaredNorm());
        acc.add(spec.a * spec.a * ell(xi) * ell(xj) * w);
    }
    return MonteCarloEstimate{acc.mean, acc.std_error()};
}

} // namespace spectest
