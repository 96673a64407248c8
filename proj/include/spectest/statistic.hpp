// Named residual statistics behind a shared cache: the per-design weight
// structure is built once and each evaluation is a cheap form in e.
#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "spectest/competitors.hpp"

namespace spectest {

enum class StatisticKind { tn, zheng, stute, lavergne };

std::string statistic_name(StatisticKind kind);
StatisticKind parse_statistic(const std::string& name);

struct StatisticSpec {
    StatisticKind kind = StatisticKind::tn;
    BandwidthRule bandwidth{};            ///< zheng / lavergne only
    int n_dirs = 500;                     ///< lavergne only
    std::uint64_t direction_seed = 0;     ///< lavergne only
};

/// Per-design cache for one statistic.  evaluate() reproduces the
/// corresponding free-function statistic bit for bit.
class StatisticCache {
public:
    StatisticCache(const StatisticSpec& spec, const Eigen::MatrixXd& X);

    [[nodiscard]] double evaluate(const Eigen::VectorXd& residuals) const;

    [[nodiscard]] const StatisticSpec& spec() const { return spec_; }
    /// Resolved bandwidth (0 when the statistic does not use one).
    [[nodiscard]] double bandwidth() const { return h_; }

private:
    StatisticSpec spec_;
    double h_ = 0.0;
    Eigen::MatrixXd weights_;  // pairwise / kernel / indicator matrix by kind
};

} // namespace spectest
