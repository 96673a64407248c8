// Benchmark specification statistics: Zheng's full-dimensional smoothing
// statistic, a Monte Carlo single-index projection statistic, and the
// Cramer-von Mises marked-empirical-process statistic.
#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace spectest {

enum class BandwidthKind { fixed, power_rule };

/// Bandwidth selection: `fixed` uses `value` as h directly; `power_rule`
/// uses h = value * n^{-1/(4+p)} (default constant 1.5).
struct BandwidthRule {
    BandwidthKind kind = BandwidthKind::power_rule;
    double value = 1.5;
};

double default_bandwidth(Eigen::Index n, Eigen::Index p, const BandwidthRule& rule);

/// (1/(n(n-1))) e'Ae -- the common i != j double-sum shape.  A must have a
/// zero diagonal for the exclusion to hold.
double pair_average_quadform(const Eigen::VectorXd& e, const Eigen::MatrixXd& A);

// Each statistic splits into a per-design weight-matrix precomputation and a
// cheap quadratic form in the residuals, so bootstrap loops can reuse the
// matrix across replicates.

/// A_ij = h^{-p} prod_k phi((x_ik - x_jk)/h) for i != j, zero diagonal.
Eigen::MatrixXd zheng_weight_matrix(const Eigen::MatrixXd& X, double h);

/// Full-dimensional kernel statistic:
/// (1/(n(n-1))) sum_{i != j} e_i e_j h^{-p} prod_k phi((x_ik - x_jk)/h).
double zheng_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X, double h);

/// Directions a_1..a_{n_dirs} uniform on the unit sphere (normalized
/// Gaussians) from the given seed; one row per direction.
Eigen::MatrixXd lavergne_directions(Eigen::Index p, int n_dirs, std::uint64_t seed);

/// A_ij = (1/n_dirs) sum_k (1/h) phi(a_k'(x_i - x_j)/h), zero diagonal.
Eigen::MatrixXd lavergne_weight_matrix(const Eigen::MatrixXd& X, double h, int n_dirs,
                                       std::uint64_t seed);

/// Single-index projection statistic averaged over Monte Carlo directions:
/// (1/(n(n-1))) sum_{i != j} e_i e_j (1/n_dirs) sum_k (1/h) phi(a_k'(x_i - x_j)/h).
/// At p = 1 the sphere is {-1, +1} and phi is even, so this equals
/// zheng_statistic for any directions.
double lavergne_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X, double h,
                          int n_dirs, std::uint64_t seed);

/// M_ik = 1{x_i <= x_k componentwise} (diagonal included).
Eigen::MatrixXd stute_indicator_matrix(const Eigen::MatrixXd& X);

/// Cramer-von Mises statistic of the marked empirical process
/// R(x) = n^{-1/2} sum_i e_i 1{x_i <= x}:  S = (1/n) sum_k R(x_k)^2.
double stute_cvm_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X);
double stute_cvm_from_indicators(const Eigen::VectorXd& e, const Eigen::MatrixXd& M);

} // namespace spectest
