// The projection-averaged specification statistic T_n and the Monte Carlo
// oracle certifying its closed-form pairwise weight.
//
// Averaging the scaled Gaussian kernel (1/h) K(a'(x_i - x_j)/h) over random
// directions a ~ N(0, h^2 I_p) has the closed form
//
//     (1/(h sqrt(2 pi))) * (d_ij + 1)^{-1/2},   d_ij = ||x_i - x_j||^2,
//
// so the projection-based statistic needs no bandwidth or direction sampling:
//
//     V_n = (1/(n(n-1))) sum_{i != j} e_i e_j w_ij,  w_ij = (d_ij + 1)^{-1/2},
//     T_n = n V_n.
//
// The constant prefactor 1/(h sqrt(2 pi)) is dropped from w_ij; it rescales
// V_n without affecting a bootstrap-calibrated decision.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spectest/moments.hpp"

namespace spectest {

/// Symmetric pairwise weight matrix with zero diagonal; w_ij in (0, 1],
/// equal to 1 exactly when x_i = x_j.
struct PairwiseWeights {
    Eigen::MatrixXd W;

    [[nodiscard]] Eigen::Index n() const { return W.rows(); }
};

/// w_ij = (1 + ||x_i - x_j||^2)^{-1/2} for i != j, zero diagonal.
PairwiseWeights pairwise_weights(const Eigen::MatrixXd& X);

/// T_n = n V_n = e'We / (n - 1).  The second overload evaluates the same
/// expression against a raw weight matrix (shared with cached fast paths).
double tn_statistic(const Eigen::VectorXd& residuals, const PairwiseWeights& weights);
double tn_statistic(const Eigen::VectorXd& residuals, const Eigen::MatrixXd& W);

/// Closed form of the direction-averaged kernel at bandwidth h:
/// (1/(h sqrt(2 pi))) (||xi - xj||^2 + 1)^{-1/2}.
double projected_kernel_closed_form(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                                    double h);

/// Monte Carlo certificate for the closed form: averages
/// (1/h) K(a'(xi - xj)/h) over draws a ~ N(0, h^2 I_p) with K the standard
/// Gaussian kernel.  Requires h > 0 and draws >= 10000.
MonteCarloEstimate kernel_integral_oracle(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                                          double h, long draws, std::uint64_t seed);

// --- kernel validation (backs the `validate-kernel` command) ---------------

struct KernelValidationCase {
    int p = 0;
    double h = 0.0;
    double dist_sq = 0.0;     ///< ||xi - xj||^2
    double closed_form = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    bool pass = false;        ///< |estimate - closed_form| <= 4 std errors
};

struct KernelValidationReport {
    std::vector<KernelValidationCase> cases;
    int failures = 0;
    bool pass = false;        ///< failures <= 5% of cases
};

/// Checks the closed form against the oracle on random cases with
/// p in {1, 2, 4, 8}, h in [0.2, 2], and points drawn from N(0, I_p).
KernelValidationReport validate_kernel(int n_cases, long draws, std::uint64_t seed);

} // namespace spectest
