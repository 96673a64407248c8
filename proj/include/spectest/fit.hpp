// Least-squares estimation of parametric regression models: exact solves for
// the linear family, Levenberg-Marquardt damped Gauss-Newton otherwise.
#pragma once

#include <optional>

#include <Eigen/Dense>

#include "spectest/dataset.hpp"
#include "spectest/model.hpp"

namespace spectest {

struct FitOptions {
    int max_iter = 100;
    double grad_tol = 1e-8;    ///< on || (1/n) J' e ||_inf
    double step_tol = 1e-10;   ///< on the accepted step, || dtheta ||_inf
    std::optional<Eigen::VectorXd> init;  ///< starting theta; empty = zeros
};

struct FittedModel {
    Eigen::VectorXd theta;
    Eigen::VectorXd residuals;  ///< e_i = y_i - g(x_i, theta)
    Eigen::VectorXd fitted;     ///< g(x_i, theta)
    Eigen::MatrixXd jacobian;   ///< n x d, rows dg(x_i, theta)/dtheta
    Eigen::MatrixXd gram;       ///< (1/n) J'J
    bool converged = false;     ///< implies || (1/n) J'e ||_inf <= grad_tol
    int iterations = 0;
};

struct ResidualDiagnostics {
    double normal_eq_norm = 0.0;   ///< || (1/n) J'e ||_inf
    double gram_condition = 0.0;   ///< extreme eigenvalue ratio of the gram
};

/// Minimizes (1/n) sum (y_i - g(x_i, theta))^2.  The linear family is solved
/// exactly by rank-revealing QR; other families run damped Gauss-Newton from
/// opts.init.  Hitting max_iter returns converged = false rather than
/// throwing.  Throws SingularDesignError when the design (or the Jacobian at
/// the solution) has smallest singular value < 1e-10 times its largest, and
/// EvaluationError when the objective turns non-finite.
FittedModel fit_least_squares(const ParametricModel& model, const DataSet& data,
                              const FitOptions& opts = {});

/// Same, without wrapping (X, y) in a DataSet; used for repeated refits.
FittedModel fit_least_squares(const ParametricModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, const FitOptions& opts = {});

ResidualDiagnostics residual_diagnostics(const FittedModel& fit);

/// Repeated least-squares solves against a fixed design.  The linear family
/// factorizes X once and reuses the decomposition for every response vector;
/// other families rerun damped Gauss-Newton from opts.init.
class Refitter {
public:
    Refitter(const ParametricModel& model, const Eigen::MatrixXd& X, FitOptions opts);

    struct Result {
        Eigen::VectorXd residuals;
        bool converged = false;
    };

    [[nodiscard]] Result refit(const Eigen::VectorXd& y) const;

private:
    const ParametricModel* model_;
    const Eigen::MatrixXd* X_;
    FitOptions opts_;
    std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr_;  // linear family only
};

} // namespace spectest
