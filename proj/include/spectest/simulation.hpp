// Monte Carlo study harness: the four benchmark data-generating scenarios,
// size/power tables over (scenario, p, a, n) grids, and the large-sample
// drift oracle for the statistic under fixed alternatives.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectest/bootstrap.hpp"
#include "spectest/dataset.hpp"
#include "spectest/model.hpp"
#include "spectest/moments.hpp"
#include "spectest/statistic.hpp"

namespace spectest {

enum class CovKind { identity, ar1 };

/// One simulation cell.  Data follow Y = g0(X) + a * ell(X) + eps with
/// X ~ N(0, Sigma), eps ~ N(0, 1); a = 0 is the null.
struct ScenarioSpec {
    int id = 1;           ///< scenario 1..4
    int n = 200;
    int p = 2;            ///< scenario 4 requires p = 6; scenario 2 an even p
    double a = 0.0;       ///< departure amplitude, >= 0
    CovKind cov = CovKind::identity;
    double rho = 0.5;     ///< AR(1) parameter when cov == ar1
};

/// Scenario recipe: null mean, departure direction(s), predictor covariance
/// (with its Cholesky factor), the null model to fit, and the generating theta.
struct ScenarioGenerator {
    ScenarioSpec spec;
    Eigen::VectorXd beta;        ///< primary direction
    Eigen::VectorXd beta2;       ///< secondary direction (scenario 2), else empty
    Eigen::VectorXd true_theta;  ///< theta_0 of the null mean
    Eigen::MatrixXd cov;         ///< Sigma_X
    Eigen::MatrixXd chol;        ///< lower Cholesky factor of Sigma_X
    ParametricModel null_model;
    std::function<double(const Eigen::VectorXd&)> null_mean;  ///< g0(x) = g(x, theta_0)
    std::function<double(const Eigen::VectorXd&)> departure;  ///< ell(x)
};

/// Scenarios:
///  1: Y = b'X + a cos(b'X) + eps,                 b = (1,..,1)/sqrt(p)
///  2: Y = b1'X + a 0.3 (0.5 + b2'X)^3 + eps,      b1/b2 split half and half
///  3: Y = b'X + a exp(-(b'X)^2) + eps,            identity or AR(1) X
///  4: Y = exp(c x1) + (c x2)^3 + c sin(pi x3) + c|x4| + c x5 x6
///         + a cos(x2 + x3) + eps,                 c = 1/sqrt(6), p = 6
ScenarioGenerator make_scenario(const ScenarioSpec& spec);

/// AR(1) covariance with entries rho^|i-j|; requires |rho| < 1.
Eigen::MatrixXd ar1_covariance(Eigen::Index p, double rho);

struct ScenarioSample {
    DataSet data;
    Eigen::VectorXd true_theta;
    Eigen::VectorXd ell;  ///< departure values ell(x_i)
};

/// Deterministic sample of size n from the scenario at the given seed.
ScenarioSample sample_scenario(const ScenarioGenerator& gen, int n, std::uint64_t seed);

struct PowerCell {
    int scenario = 0;
    int p = 0;
    double a = 0.0;
    int n = 0;
    std::string stat;
    int reps = 0;          ///< successful replicates
    int rejections = 0;
    double rate = 0.0;
    double mc_stderr = 0.0;  ///< sqrt(rate (1 - rate) / reps)
    double elapsed_seconds = 0.0;  ///< summed replicate wall time (not serialized)
    int failed_reps = 0;
    bool failed = false;   ///< more than 2% of replicates failed
};

struct PowerTable {
    std::vector<PowerCell> rows;
};

struct PowerStudyOptions {
    int reps = 500;
    int B = 300;
    double level = 0.05;
    std::uint64_t seed = 1;
    int workers = 1;       ///< <= 0 means auto
    WildWeightLaw law = WildWeightLaw::mammen;
};

/// Runs every grid cell against every statistic.  Per replicate: sample the
/// scenario, then wild-bootstrap each statistic on the same sample.  All
/// random streams derive from (seed, cell, replicate), so the table is
/// invariant to the worker count.  Nonlinear fits start at the generating
/// theta perturbed by N(0, 0.01^2) noise.
PowerTable run_power_study(const std::vector<ScenarioSpec>& grid,
                           const std::vector<StatisticSpec>& statistics,
                           const PowerStudyOptions& opts);

/// Monte Carlo estimate of the fixed-alternative drift
///     mu1 = E[a^2 ell(X) ell(X') w(X, X')],  X, X' iid N(0, Sigma_X),
/// the large-sample limit of T_n / n under the scenario's alternative.
/// Requires a > 0 and mc_pairs >= 10000.  `ell_override` (test hook)
/// replaces the scenario departure, e.g. by a constant.
MonteCarloEstimate global_drift_oracle(const ScenarioSpec& spec, long mc_pairs,
                                       std::uint64_t seed,
                                       const std::function<double(const Eigen::VectorXd&)>&
                                           ell_override = {});

} // namespace spectest
