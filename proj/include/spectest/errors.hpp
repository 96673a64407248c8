// Error types shared across the toolkit.  Input validation failures use
// std::invalid_argument directly; these cover numerical failure modes.
#pragma once

#include <stdexcept>
#include <string>

namespace spectest {

/// A model mean (or derived objective) produced a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// Design (or Jacobian at the solution) is rank deficient beyond tolerance.
class SingularDesignError : public std::runtime_error {
public:
    explicit SingularDesignError(const std::string& what) : std::runtime_error(what) {}
};

/// Too many bootstrap replicates failed to produce a usable statistic.
class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spectest
