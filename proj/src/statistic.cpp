#include "spectest/statistic.hpp"

#include <stdexcept>

#include "spectest/projection.hpp"

namespace spectest {

std::string statistic_name(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::tn: return "tn";
        case StatisticKind::zheng: return "zheng";
        case StatisticKind::stute: return "stute";
        case StatisticKind::lavergne: return "lavergne";
    }
    return "tn";
}

StatisticKind parse_statistic(const std::string& name) {
    if (name == "tn") return StatisticKind::tn;
    if (name == "zheng") return StatisticKind::zheng;
    if (name == "stute") return StatisticKind::stute;
    if (name == "lavergne") return StatisticKind::lavergne;
    throw std::invalid_argument("unknown statistic '" + name + "'");
}

StatisticCache::StatisticCache(const StatisticSpec& spec, const Eigen::MatrixXd& X)
    : spec_(spec) {
    switch (spec.kind) {
        case StatisticKind::tn:
            weights_ = pairwise_weights(X).W;
            break;
        case StatisticKind::zheng:
            h_ = default_bandwidth(X.rows(), X.cols(), spec.bandwidth);
            weights_ = zheng_weight_matrix(X, h_);
            break;
        case StatisticKind::lavergne:
            h_ = default_bandwidth(X.rows(), X.cols(), spec.bandwidth);
            weights_ = lavergne_weight_matrix(X, h_, spec.n_dirs, spec.direction_seed);
            break;
        case StatisticKind::stute:
            weights_ = stute_indicator_matrix(X);
            break;
    }
}

double StatisticCache::evaluate(const Eigen::VectorXd& residuals) const {
    switch (spec_.kind) {
        case StatisticKind::tn:
            return tn_statistic(residuals, weights_);
        case StatisticKind::zheng:
        case StatisticKind::lavergne:
            return pair_average_quadform(residuals, weights_);
        case StatisticKind::stute:
            return stute_cvm_from_indicators(residuals, weights_);
    }
    throw std::invalid_argument("statistic cache: unknown kind");
}

} // namespace spectest
