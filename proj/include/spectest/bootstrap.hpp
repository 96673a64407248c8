// Wild bootstrap calibration of residual-based specification statistics.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectest/dataset.hpp"
#include "spectest/fit.hpp"
#include "spectest/model.hpp"
#include "spectest/statistic.hpp"

namespace spectest {

/// Two-point wild weight laws with mean 0 and variance 1.
///  - mammen:     v = -(sqrt5-1)/2 w.p. (sqrt5+1)/(2 sqrt5), else (sqrt5+1)/2
///                (matches the third moment E v^3 = 1)
///  - rademacher: v = +-1 with equal probability
enum class WildWeightLaw { mammen, rademacher };

std::string law_name(WildWeightLaw law);
WildWeightLaw parse_law(const std::string& name);

Eigen::VectorXd draw_wild_weights(Eigen::Index n, WildWeightLaw law, std::mt19937_64& engine);
Eigen::VectorXd draw_wild_weights(Eigen::Index n, WildWeightLaw law, std::uint64_t seed);

struct BootstrapOptions {
    int B = 300;
    WildWeightLaw law = WildWeightLaw::mammen;
    double level = 0.05;
    std::uint64_t seed = 1;
    int workers = 1;       ///< replicate-level threads; <= 0 means auto
    FitOptions fit{};      ///< options for the parent fit
};

struct TestResult {
    std::string statistic;           ///< "tn", "zheng", "stute", "lavergne"
    double observed = 0.0;
    std::vector<double> boot_values; ///< successful replicates, replicate order
    double p_value = 1.0;            ///< (1 + #{boot >= observed}) / (B + 1)
    bool reject = false;             ///< p_value <= level
    double level = 0.05;
    int B = 0;                       ///< successful replicate count
    std::uint64_t seed = 0;
    WildWeightLaw law = WildWeightLaw::mammen;
    double bandwidth = 0.0;          ///< resolved h when the statistic uses one
    int failed_replicates = 0;
    int nonconverged_refits = 0;     ///< refits that ran out of iterations
};

/// Fits the null model, then calibrates the statistic by the wild bootstrap:
/// y*_i = g(x_i, theta_hat) + v_i e_hat_i with fresh weights per replicate,
/// refitting from theta_hat and re-evaluating the statistic on the refit
/// residuals.  Replicates whose refit throws are dropped and counted; more
/// than 2% of B failing raises CalibrationError.  Results are identical for
/// any worker count.
TestResult wild_bootstrap_test(const ParametricModel& model, const DataSet& data,
                               const StatisticSpec& statistic, const BootstrapOptions& opts);

} // namespace spectest
