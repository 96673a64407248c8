#include "spectest/projection.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spectest/rng.hpp"

namespace spectest {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_pair(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj) {
    if (xi.size() != xj.size())
        throw std::invalid_argument("kernel: point dimensions differ");
    if (xi.size() < 1)
        throw std::invalid_argument("kernel: points must have dimension >= 1");
}

} // namespace

PairwiseWeights pairwise_weights(const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows();
    if (n < 2) throw std::invalid_argument("pairwise_weights: need at least 2 rows");
    if (X.cols() < 1) throw std::invalid_argument("pairwise_weights: need at least 1 column");
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // w_ij = (1 + ||x_i - x_j||^2)^{-1/2}
            const double dsq = (X.row(i) - X.row(j)).squaredNorm();
            const double w = 1.0 / std::sqrt(1.0 + dsq);
            W(i, j) = w;
            W(j, i) = w;
        }
    }
    return PairwiseWeights{std::move(W)};
}

double tn_statistic(const Eigen::VectorXd& residuals, const Eigen::MatrixXd& W) {
    const Eigen::Index n = W.rows();
    if (W.cols() != n) throw std::invalid_argument("tn_statistic: weight matrix not square");
    if (residuals.size() != n)
        throw std::invalid_argument("tn_statistic: residual length does not match weights");
    // T_n = n V_n with V_n = e'We / (n(n-1)); the zero diagonal of W supplies
    // the i != j exclusion.
    return residuals.dot(W * residuals) / static_cast<double>(n - 1);
}

double tn_statistic(const Eigen::VectorXd& residuals, const PairwiseWeights& weights) {
    return tn_statistic(residuals, weights.W);
}

double projected_kernel_closed_form(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                                    double h) {
    check_pair(xi, xj);
    if (!(h > 0.0)) throw std::invalid_argument("kernel: bandwidth must be positive");
    const double dsq = (xi - xj).squaredNorm();
    return kInvSqrt2Pi / h / std::sqrt(dsq + 1.0);
}

MonteCarloEstimate kernel_integral_oracle(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                                          double h, long draws, std::uint64_t seed) {
    check_pair(xi, xj);
    if (!(h > 0.0)) throw std::invalid_argument("kernel oracle: bandwidth must be positive");
    if (draws < 10000)
        throw std::invalid_argument("kernel oracle: need at least 10000 draws");

    const Eigen::VectorXd delta = xi - xj;
    const Eigen::Index p = delta.size();
    auto engine = rng::stream(seed, {rng::kOraclePairs});
    std::normal_distribution<double> normal(0.0, 1.0);

    // Average (1/h) K(a'delta / h) over a ~ N(0, h^2 I_p), K standard Gaussian.
    RunningMoments acc;
    for (long k = 0; k < draws; ++k) {
        double dot = 0.0;
        for (Eigen::Index c = 0; c < p; ++c) dot += h * normal(engine) * delta[c];
        const double u = dot / h;
        acc.add(kInvSqrt2Pi * std::exp(-0.5 * u * u) / h);
    }
    return MonteCarloEstimate{acc.mean, acc.std_error()};
}

KernelValidationReport validate_kernel(int n_cases, long draws, std::uint64_t seed) {
    if (n_cases < 1) throw std::invalid_argument("validate_kernel: need at least one case");
    static const int kDims[] = {1, 2, 4, 8};

    KernelValidationReport report;
    report.cases.reserve(static_cast<std::size_t>(n_cases));
    for (int c = 0; c < n_cases; ++c) {
        auto engine = rng::stream(seed, {rng::kKernelCase, static_cast<std::uint64_t>(c)});
        std::uniform_int_distribution<int> pick(0, 3);
        std::uniform_real_distribution<double> hband(0.2, 2.0);
        std::normal_distribution<double> normal(0.0, 1.0);

        KernelValidationCase kc;
        kc.p = kDims[pick(engine)];
        kc.h = hband(engine);
        Eigen::VectorXd xi(kc.p), xj(kc.p);
        for (int k = 0; k < kc.p; ++k) xi[k] = normal(engine);
        for (int k = 0; k < kc.p; ++k) xj[k] = normal(engine);

        kc.dist_sq = (xi - xj).squaredNorm();
        kc.closed_form = projected_kernel_closed_form(xi, xj, kc.h);
        const auto est = kernel_integral_oracle(
            xi, xj, kc.h, draws, rng::derive(seed, {rng::kOraclePairs, static_cast<std::uint64_t>(c)}));
        kc.estimate = est.estimate;
        kc.std_error = est.std_error;
        kc.pass = std::abs(kc.estimate - kc.closed_form) <= 4.0 * kc.std_error;
        if (!kc.pass) ++report.failures;
        report.cases.push_back(kc);
    }
    report.pass = report.failures <= 0.05 * n_cases;
    return report;
}

} // namespace spectest
