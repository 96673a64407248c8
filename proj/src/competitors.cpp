#include "spectest/competitors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spectest/rng.hpp"

namespace spectest {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_design(const Eigen::MatrixXd& X) {
    if (X.rows() < 2) throw std::invalid_argument("statistic: need at least 2 rows");
    if (X.cols() < 1) throw std::invalid_argument("statistic: need at least 1 column");
}

void check_bandwidth(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("statistic: bandwidth must be positive");
}

} // namespace

double default_bandwidth(Eigen::Index n, Eigen::Index p, const BandwidthRule& rule) {
    if (!(rule.value > 0.0))
        throw std::invalid_argument("bandwidth rule: value must be positive");
    switch (rule.kind) {
        case BandwidthKind::fixed:
            return rule.value;
        case BandwidthKind::power_rule:
            if (n < 2 || p < 1)
                throw std::invalid_argument("bandwidth rule: need n >= 2 and p >= 1");
            // h = c * n^{-1/(4+p)}
            return rule.value *
                   std::pow(static_cast<double>(n), -1.0 / (4.0 + static_cast<double>(p)));
    }
    throw std::invalid_argument("bandwidth rule: unknown kind");
}

double pair_average_quadform(const Eigen::VectorXd& e, const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("quadform: matrix not square");
    if (e.size() != n) throw std::invalid_argument("quadform: residual length mismatch");
    return e.dot(A * e) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

Eigen::MatrixXd zheng_weight_matrix(const Eigen::MatrixXd& X, double h) {
    check_design(X);
    check_bandwidth(h);
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    // h^{-p} prod_k phi(u_k/h) = h^{-p} (2 pi)^{-p/2} exp(-||x_i - x_j||^2 / (2 h^2))
    const double scale =
        std::pow(h, -static_cast<double>(p)) * std::pow(kInvSqrt2Pi, static_cast<double>(p));
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dsq = (X.row(i) - X.row(j)).squaredNorm();
            const double k = scale * std::exp(-0.5 * dsq / (h * h));
            K(i, j) = k;
            K(j, i) = k;
        }
    }
    return K;
}

double zheng_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X, double h) {
    return pair_average_quadform(e, zheng_weight_matrix(X, h));
}

Eigen::MatrixXd lavergne_directions(Eigen::Index p, int n_dirs, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("directions: dimension must be positive");
    if (n_dirs < 1) throw std::invalid_argument("directions: need at least one direction");
    auto engine = rng::stream(seed, {rng::kDirections});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd dirs(n_dirs, p);
    for (int k = 0; k < n_dirs; ++k) {
        double norm = 0.0;
        do {
            for (Eigen::Index c = 0; c < p; ++c) dirs(k, c) = normal(engine);
            norm = dirs.row(k).norm();
        } while (norm == 0.0);  // essentially impossible, but keeps the map total
        dirs.row(k) /= norm;
    }
    return dirs;
}

Eigen::MatrixXd lavergne_weight_matrix(const Eigen::MatrixXd& X, double h, int n_dirs,
                                       std::uint64_t seed) {
    check_design(X);
    check_bandwidth(h);
    const Eigen::Index n = X.rows();
    const Eigen::MatrixXd dirs = lavergne_directions(X.cols(), n_dirs, seed);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // (1/n_dirs) sum_k (1/h) phi(a_k'(x_i - x_j)/h)
            const Eigen::VectorXd diff = (X.row(i) - X.row(j)).transpose();
            double sum = 0.0;
            for (int k = 0; k < n_dirs; ++k) {
                const double u = dirs.row(k).dot(diff) / h;
                sum += kInvSqrt2Pi * std::exp(-0.5 * u * u) / h;
            }
            const double a = sum / static_cast<double>(n_dirs);
            A(i, j) = a;
            A(j, i) = a;
        }
    }
    return A;
}

double lavergne_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X, double h,
                          int n_dirs, std::uint64_t seed) {
    return pair_average_quadform(e, lavergne_weight_matrix(X, h, n_dirs, seed));
}

Eigen::MatrixXd stute_indicator_matrix(const Eigen::MatrixXd& X) {
    check_design(X);
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            M(i, k) = (X.row(i).array() <= X.row(k).array()).all() ? 1.0 : 0.0;
        }
    }
    return M;
}

double stute_cvm_from_indicators(const Eigen::VectorXd& e, const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n) throw std::invalid_argument("stute: indicator matrix not square");
    if (e.size() != n) throw std::invalid_argument("stute: residual length mismatch");
    // S = (1/n) sum_k R(x_k)^2,  R(x_k) = n^{-1/2} sum_i e_i 1{x_i <= x_k}
    const double nn = static_cast<double>(n);
    return (M.transpose() * e).squaredNorm() / (nn * nn);
}

double stute_cvm_statistic(const Eigen::VectorXd& e, const Eigen::MatrixXd& X) {
    return stute_cvm_from_indicators(e, stute_indicator_matrix(X));
}

} // namespace spectest
