#include "spectest/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectest/errors.hpp"

namespace spectest {

namespace {

void check_eval_args(const ParametricModel& model, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& theta) {
    if (!model.mean)
        throw std::invalid_argument("model: mean function is empty");
    if (theta.size() != model.param_dim)
        throw std::invalid_argument("model: theta has length " + std::to_string(theta.size()) +
                                    ", expected " + std::to_string(model.param_dim));
    if (X.cols() != model.input_dim)
        throw std::invalid_argument("model: X has " + std::to_string(X.cols()) +
                                    " columns, model expects " + std::to_string(model.input_dim));
}

} // namespace

Eigen::VectorXd eval_mean(const ParametricModel& model, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& theta) {
    check_eval_args(model, X, theta);
    const Eigen::Index n = X.rows();
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = model.mean(X.row(i).transpose(), theta);
        if (!std::isfinite(out[i]))
            throw EvaluationError("model mean is non-finite at row " + std::to_string(i));
    }
    return out;
}

Eigen::MatrixXd eval_jacobian_fd(const ParametricModel& model, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& theta) {
    check_eval_args(model, X, theta);
    const Eigen::Index n = X.rows();
    const Eigen::Index d = model.param_dim;
    Eigen::MatrixXd J(n, d);
    Eigen::VectorXd lo = theta, hi = theta;
    for (Eigen::Index k = 0; k < d; ++k) {
        // central difference, step scaled to the coordinate magnitude
        const double step = 1e-6 * std::max(1.0, std::abs(theta[k]));
        hi[k] = theta[k] + step;
        lo[k] = theta[k] - step;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd x = X.row(i).transpose();
            const double g = (model.mean(x, hi) - model.mean(x, lo)) / (2.0 * step);
            if (!std::isfinite(g))
                throw EvaluationError("finite-difference gradient is non-finite at row " +
                                      std::to_string(i) + ", coordinate " + std::to_string(k));
            J(i, k) = g;
        }
        hi[k] = theta[k];
        lo[k] = theta[k];
    }
    return J;
}

Eigen::MatrixXd eval_jacobian(const ParametricModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& theta) {
    if (!model.has_analytic_gradient()) return eval_jacobian_fd(model, X, theta);
    check_eval_args(model, X, theta);
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd J(n, model.param_dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd g = model.gradient(X.row(i).transpose(), theta);
        if (g.size() != model.param_dim)
            throw std::invalid_argument("model: gradient length " + std::to_string(g.size()) +
                                        " does not match param_dim " +
                                        std::to_string(model.param_dim));
        if (!g.allFinite())
            throw EvaluationError("model gradient is non-finite at row " + std::to_string(i));
        J.row(i) = g.transpose();
    }
    return J;
}

ParametricModel make_builtin(ModelFamily family, int p) {
    if (p < 1) throw std::invalid_argument("make_builtin: p must be positive");
    ParametricModel model;
    model.family = family;
    model.input_dim = p;
    switch (family) {
        case ModelFamily::linear:
            model.param_dim = p;
            model.mean = [](const Eigen::VectorXd& x, const Eigen::VectorXd& theta) {
                return theta.dot(x);
            };
            model.gradient = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
                return x;
            };
            return model;
        case ModelFamily::scenario4_null: {
            if (p != 6)
                throw std::invalid_argument("make_builtin: scenario4_null requires p = 6, got " +
                                            std::to_string(p));
            model.param_dim = 5;
            // g(x, t) = exp(t1 x1) + (t2 x2)^3 + t3 sin(pi x3) + t4 |x4| + t5 x5 x6
            model.mean = [](const Eigen::VectorXd& x, const Eigen::VectorXd& t) {
                const double cube = t[1] * x[1];
                return std::exp(t[0] * x[0]) + cube * cube * cube +
                       t[2] * std::sin(std::numbers::pi * x[2]) + t[3] * std::abs(x[3]) +
                       t[4] * x[4] * x[5];
            };
            model.gradient = [](const Eigen::VectorXd& x, const Eigen::VectorXd& t) {
                Eigen::VectorXd g(5);
                g[0] = x[0] * std::exp(t[0] * x[0]);
                g[1] = 3.0 * t[1] * t[1] * x[1] * x[1] * x[1];
                g[2] = std::sin(std::numbers::pi * x[2]);
                g[3] = std::abs(x[3]);
                g[4] = x[4] * x[5];
                return g;
            };
            return model;
        }
        case ModelFamily::custom:
            throw std::invalid_argument("make_builtin: custom models must be constructed directly");
    }
    throw std::invalid_argument("make_builtin: unknown family");
}

ParametricModel make_builtin(const std::string& tag, int p) {
    return make_builtin(parse_family(tag), p);
}

ModelFamily parse_family(const std::string& tag) {
    if (tag == "linear") return ModelFamily::linear;
    if (tag == "scenario4_null") return ModelFamily::scenario4_null;
    if (tag == "custom") return ModelFamily::custom;
    throw std::invalid_argument("unknown model family '" + tag + "'");
}

std::string family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::linear: return "linear";
        case ModelFamily::scenario4_null: return "scenario4_null";
        case ModelFamily::custom: return "custom";
    }
    return "custom";
}

} // namespace spectest
