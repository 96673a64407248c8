// Parametric regression families g(x, theta) with analytic or
// finite-difference gradients in theta.
#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "spectest/dataset.hpp"

namespace spectest {

enum class ModelFamily { linear, scenario4_null, custom };

using MeanFn = std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& theta)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& theta)>;

/// A regression mean family.  `gradient` may be empty, in which case
/// Jacobians fall back to central finite differences.
struct ParametricModel {
    int param_dim = 0;   ///< dimension d of theta
    int input_dim = 0;   ///< expected predictor dimension p
    ModelFamily family = ModelFamily::custom;
    MeanFn mean;
    GradientFn gradient;

    [[nodiscard]] bool has_analytic_gradient() const { return static_cast<bool>(gradient); }
};

/// g(x_i, theta) for every row of X.
/// Throws EvaluationError (naming the row) if any value is non-finite.
Eigen::VectorXd eval_mean(const ParametricModel& model, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& theta);

/// n x d Jacobian with rows dg(x_i, theta)/dtheta; analytic when available,
/// otherwise central finite differences with step 1e-6 * max(1, |theta_k|).
Eigen::MatrixXd eval_jacobian(const ParametricModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& theta);

/// Finite-difference Jacobian regardless of whether an analytic gradient
/// exists.  Check mode for validating hand-coded gradients.
Eigen::MatrixXd eval_jacobian_fd(const ParametricModel& model, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& theta);

/// Built-in families:
///  - linear:          g(x, theta) = theta . x, d = p, analytic gradient x
///  - scenario4_null:  g(x, theta) = exp(t1 x1) + (t2 x2)^3 + t3 sin(pi x3)
///                                   + t4 |x4| + t5 x5 x6, p = 6, d = 5
ParametricModel make_builtin(ModelFamily family, int p);
ParametricModel make_builtin(const std::string& tag, int p);

ModelFamily parse_family(const std::string& tag);
std::string family_name(ModelFamily family);

} // namespace spectest
