#include "spectest/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spectest/errors.hpp"

namespace spectest {

namespace {

// Rank-deficiency threshold: smallest singular value below this fraction of
// the largest marks the design as singular.
constexpr double kSingularRatio = 1e-10;

// Levenberg-Marquardt damping schedule.
constexpr double kDampingStart = 1e-3;
constexpr double kDampingGrow = 10.0;
constexpr double kDampingShrink = 10.0;
constexpr double kDampingMin = 1e-12;
constexpr double kDampingMax = 1e12;

void check_options(const ParametricModel& model, const FitOptions& opts) {
    if (opts.max_iter < 1)
        throw std::invalid_argument("fit: max_iter must be at least 1");
    if (!(opts.grad_tol > 0.0))
        throw std::invalid_argument("fit: grad_tol must be positive");
    if (!(opts.step_tol > 0.0))
        throw std::invalid_argument("fit: step_tol must be positive");
    if (opts.init && opts.init->size() != model.param_dim)
        throw std::invalid_argument("fit: init has length " + std::to_string(opts.init->size()) +
                                    ", expected " + std::to_string(model.param_dim));
}

void check_dimensions(const ParametricModel& model, const Eigen::MatrixXd& X,
                      const Eigen::VectorXd& y) {
    if (y.size() != X.rows())
        throw std::invalid_argument("fit: response length does not match design rows");
    if (X.cols() != model.input_dim)
        throw std::invalid_argument("fit: design has " + std::to_string(X.cols()) +
                                    " columns, model expects " + std::to_string(model.input_dim));
    if (X.rows() <= model.param_dim)
        throw std::invalid_argument("fit: need more observations (" + std::to_string(X.rows()) +
                                    ") than parameters (" + std::to_string(model.param_dim) + ")");
}

void check_design_rank(const Eigen::MatrixXd& J, const char* what) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    if (largest <= 0.0 || smallest < kSingularRatio * largest)
        throw SingularDesignError(std::string(what) + " is rank deficient (singular values " +
                                  std::to_string(smallest) + " .. " + std::to_string(largest) +
                                  ")");
}

double objective(const Eigen::VectorXd& r) {
    const double q = r.squaredNorm() / static_cast<double>(r.size());
    if (!std::isfinite(q))
        throw EvaluationError("fit: least-squares objective is non-finite");
    return q;
}

FittedModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const FitOptions& opts) {
    check_design_rank(X, "linear design");
    FittedModel fit;
    fit.theta = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(X).solve(y);
    fit.fitted = X * fit.theta;
    fit.residuals = y - fit.fitted;
    fit.jacobian = X;
    fit.gram = (X.transpose() * X) / static_cast<double>(X.rows());
    fit.iterations = 0;
    const double gnorm = ((X.transpose() * fit.residuals) / static_cast<double>(X.rows()))
                             .lpNorm<Eigen::Infinity>();
    fit.converged = gnorm <= opts.grad_tol;
    return fit;
}

FittedModel fit_gauss_newton(const ParametricModel& model, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, const FitOptions& opts) {
    const double n = static_cast<double>(X.rows());
    Eigen::VectorXd theta =
        opts.init ? *opts.init : Eigen::VectorXd::Zero(model.param_dim);

    Eigen::VectorXd mu = eval_mean(model, X, theta);
    Eigen::VectorXd r = y - mu;
    double q = objective(r);
    Eigen::MatrixXd J = eval_jacobian(model, X, theta);

    double damping = kDampingStart;
    bool converged = false;
    int iterations = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        iterations = iter + 1;
        const Eigen::VectorXd g = (J.transpose() * r) / n;  // (1/n) J'e
        if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
            converged = true;
            break;
        }

        // Damped normal equations: (J'J/n + damping * diag) dtheta = J'e/n.
        const Eigen::MatrixXd A = (J.transpose() * J) / n;
        const double diag_floor = 1e-12 * std::max(1.0, A.diagonal().maxCoeff());
        const Eigen::VectorXd D = A.diagonal().cwiseMax(diag_floor);
        Eigen::MatrixXd damped = A;
        damped.diagonal() += damping * D;
        const Eigen::VectorXd delta = damped.ldlt().solve(g);

        bool accepted = false;
        if (delta.allFinite()) {
            const Eigen::VectorXd trial = theta + delta;
            const Eigen::VectorXd mu_t = eval_mean(model, X, trial);
            const double q_t = objective(y - mu_t);
            if (q_t < q) {
                theta = trial;
                mu = mu_t;
                r = y - mu;
                q = q_t;
                J = eval_jacobian(model, X, theta);
                damping = std::max(damping / kDampingShrink, kDampingMin);
                accepted = true;
                if (delta.lpNorm<Eigen::Infinity>() <= opts.step_tol) break;
            }
        }
        if (!accepted) {
            damping *= kDampingGrow;
            if (damping > kDampingMax) break;  // no acceptable step at any damping
        }
    }

    if (!converged) {
        // Stopped on step size, stall, or iteration budget; report whether the
        // final iterate happens to satisfy the gradient tolerance.
        const double gnorm = ((J.transpose() * r) / n).lpNorm<Eigen::Infinity>();
        converged = gnorm <= opts.grad_tol;
    }

    check_design_rank(J, "model Jacobian at the solution");

    FittedModel fit;
    fit.theta = std::move(theta);
    fit.fitted = std::move(mu);
    fit.residuals = std::move(r);
    fit.gram = (J.transpose() * J) / n;
    fit.jacobian = std::move(J);
    fit.converged = converged;
    fit.iterations = iterations;
    return fit;
}

} // namespace

FittedModel fit_least_squares(const ParametricModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, const FitOptions& opts) {
    check_options(model, opts);
    check_dimensions(model, X, y);
    if (model.family == ModelFamily::linear) return fit_linear(X, y, opts);
    return fit_gauss_newton(model, X, y, opts);
}

FittedModel fit_least_squares(const ParametricModel& model, const DataSet& data,
                              const FitOptions& opts) {
    data.validate();
    return fit_least_squares(model, data.X, data.y, opts);
}

ResidualDiagnostics residual_diagnostics(const FittedModel& fit) {
    if (fit.jacobian.size() == 0)
        throw std::invalid_argument("residual_diagnostics: fit has no Jacobian");
    ResidualDiagnostics diag;
    diag.normal_eq_norm = ((fit.jacobian.transpose() * fit.residuals) /
                           static_cast<double>(fit.jacobian.rows()))
                              .lpNorm<Eigen::Infinity>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.gram);
    const auto& ev = eig.eigenvalues();
    const double lo = ev(0), hi = ev(ev.size() - 1);
    diag.gram_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    return diag;
}

Refitter::Refitter(const ParametricModel& model, const Eigen::MatrixXd& X, FitOptions opts)
    : model_(&model), X_(&X), opts_(std::move(opts)) {
    check_options(model, opts_);
    if (X.cols() != model.input_dim)
        throw std::invalid_argument("refit: design width does not match model");
    if (model.family == ModelFamily::linear) {
        check_design_rank(X, "linear design");
        qr_.emplace(X);
    }
}

Refitter::Result Refitter::refit(const Eigen::VectorXd& y) const {
    if (y.size() != X_->rows())
        throw std::invalid_argument("refit: response length does not match design");
    if (qr_) {
        // Exact solve against the cached factorization.
        const Eigen::VectorXd theta = qr_->solve(y);
        return {y - (*X_) * theta, true};
    }
    FittedModel fit = fit_least_squares(*model_, *X_, y, opts_);
    return {std::move(fit.residuals), fit.converged};
}

} // namespace spectest
