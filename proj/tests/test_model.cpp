#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectest/errors.hpp"
#include "spectest/model.hpp"

using namespace spectest;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> xs) {
    Eigen::MatrixXd X(1, static_cast<Eigen::Index>(xs.size()));
    Eigen::Index j = 0;
    for (double x : xs) X(0, j++) = x;
    return X;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index j = 0;
    for (double x : xs) v(j++) = x;
    return v;
}

} // namespace

TEST_CASE("linear mean is the inner product") {
    const auto model = make_builtin(ModelFamily::linear, 2);
    const double s = 1.0 / std::sqrt(2.0);
    const auto mu = eval_mean(model, row({1.0, 1.0}), vec({s, s}));
    CHECK(mu.size() == 1);
    CHECK(mu(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("scenario4 mean at zero parameters is exp(0) = 1") {
    const auto model = make_builtin(ModelFamily::scenario4_null, 6);
    const auto mu = eval_mean(model, row({3.0, -2.0, 0.7, 5.0, 1.0, 4.0}),
                              Eigen::VectorXd::Zero(5));
    CHECK(mu(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scenario4 mean matches the hand-computed value") {
    // theta = c * ones, x = (1, 1, 0.5, -2, 1, 3):
    //   exp(c) + c^3 + c sin(pi/2) + c|-2| + c(1*3) = exp(c) + c^3 + 6c
    const double c = 1.0 / std::sqrt(6.0);
    const auto model = make_builtin(ModelFamily::scenario4_null, 6);
    const auto mu = eval_mean(model, row({1.0, 1.0, 0.5, -2.0, 1.0, 3.0}),
                              Eigen::VectorXd::Constant(5, c));
    const double hand = std::exp(c) + c * c * c + 6.0 * c;
    CHECK(mu(0) == doctest::Approx(hand).epsilon(1e-15));
    CHECK(mu(0) == doctest::Approx(4.02171171303218).epsilon(1e-14));
}

TEST_CASE("linear mean additivity and constant jacobian") {
    const auto model = make_builtin(ModelFamily::linear, 3);
    Eigen::MatrixXd X(4, 3);
    X << 0.3, -1.2, 2.0,
         1.1,  0.4, -0.5,
        -2.2,  0.9,  1.3,
         0.0,  1.0, -1.0;
    const auto t1 = vec({0.5, -1.0, 2.0});
    const auto t2 = vec({-0.25, 0.75, 1.5});
    const Eigen::VectorXd lhs = eval_mean(model, X, t1 + t2);
    const Eigen::VectorXd rhs = eval_mean(model, X, t1) + eval_mean(model, X, t2);
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12);

    const Eigen::MatrixXd J1 = eval_jacobian(model, X, t1);
    const Eigen::MatrixXd J2 = eval_jacobian(model, X, t2);
    CHECK((J1 - X).norm() == 0.0);       // linear gradient is x itself
    CHECK((J1 - J2).norm() == 0.0);      // and does not depend on theta
}

TEST_CASE("finite-difference jacobian reproduces the linear gradient") {
    const auto model = make_builtin(ModelFamily::linear, 2);
    Eigen::MatrixXd X(3, 2);
    X << 1.0, 2.0,
        -0.5, 0.25,
         3.0, -4.0;
    const auto J = eval_jacobian_fd(model, X, vec({0.7, -1.3}));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            CHECK(J(i, j) == doctest::Approx(X(i, j)).epsilon(1e-6));
}

TEST_CASE("scenario4 analytic gradient row and finite-difference agreement") {
    const auto model = make_builtin(ModelFamily::scenario4_null, 6);
    REQUIRE(model.has_analytic_gradient());

    const auto x = vec({0.8, -1.1, 0.4, -0.6, 1.5, -2.0});
    const auto theta = vec({0.3, -0.7, 1.2, 0.5, -0.9});
    Eigen::MatrixXd X = x.transpose();

    // row = (x1 e^{t1 x1}, 3 t2^2 x2^3, sin(pi x3), |x4|, x5 x6)
    const auto J = eval_jacobian(model, X, theta);
    CHECK(J(0, 0) == doctest::Approx(x(0) * std::exp(theta(0) * x(0))).epsilon(1e-14));
    CHECK(J(0, 1) == doctest::Approx(3.0 * theta(1) * theta(1) * std::pow(x(1), 3)).epsilon(1e-14));
    CHECK(J(0, 2) == doctest::Approx(std::sin(M_PI * x(2))).epsilon(1e-14));
    CHECK(J(0, 3) == doctest::Approx(std::abs(x(3))).epsilon(1e-14));
    CHECK(J(0, 4) == doctest::Approx(x(4) * x(5)).epsilon(1e-14));

    // analytic vs central differences at random probes, relative error <= 1e-5
    std::mt19937_64 engine(42);
    std::normal_distribution<double> normal;
    for (int probe = 0; probe < 10; ++probe) {
        Eigen::MatrixXd Xp(3, 6);
        for (Eigen::Index i = 0; i < Xp.rows(); ++i)
            for (Eigen::Index j = 0; j < Xp.cols(); ++j)
                Xp(i, j) = normal(engine);
        Eigen::VectorXd tp(5);
        for (Eigen::Index j = 0; j < 5; ++j) tp(j) = normal(engine);

        const Eigen::MatrixXd Ja = eval_jacobian(model, Xp, tp);
        const Eigen::MatrixXd Jf = eval_jacobian_fd(model, Xp, tp);
        const double scale = std::max(1.0, Ja.lpNorm<Eigen::Infinity>());
        CHECK((Ja - Jf).lpNorm<Eigen::Infinity>() / scale <= 1e-5);
    }
}

TEST_CASE("builtin construction contracts") {
    CHECK(make_builtin(ModelFamily::linear, 3).param_dim == 3);
    const auto s4 = make_builtin(ModelFamily::scenario4_null, 6);
    CHECK(s4.param_dim == 5);
    CHECK(s4.input_dim == 6);
    CHECK_THROWS_AS(make_builtin(ModelFamily::scenario4_null, 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("quadratic"), std::invalid_argument);
    CHECK(parse_family("linear") == ModelFamily::linear);
    CHECK(parse_family("scenario4_null") == ModelFamily::scenario4_null);
    CHECK(family_name(ModelFamily::scenario4_null) == "scenario4_null");
}

TEST_CASE("non-finite mean raises an evaluation error naming the row") {
    const auto model = make_builtin(ModelFamily::scenario4_null, 6);
    Eigen::MatrixXd X(2, 6);
    X << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
         1000.0, 0.0, 0.0, 0.0, 0.0, 0.0;   // exp(1000 * 1000) overflows
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(5);
    theta(0) = 1000.0;
    CHECK_THROWS_WITH_AS(eval_mean(model, X, theta),
                         doctest::Contains("row 1"), EvaluationError);
}

TEST_CASE("dimension mismatches are rejected") {
    const auto model = make_builtin(ModelFamily::linear, 3);
    Eigen::MatrixXd X(2, 2);
    X.setZero();
    CHECK_THROWS_AS(eval_mean(model, X, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    Eigen::MatrixXd X3(2, 3);
    X3.setZero();
    CHECK_THROWS_AS(eval_mean(model, X3, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}
