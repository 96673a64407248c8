#include "spectest/bootstrap.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "spectest/errors.hpp"
#include "spectest/parallel.hpp"
#include "spectest/rng.hpp"

namespace spectest {

std::string law_name(WildWeightLaw law) {
    return law == WildWeightLaw::mammen ? "mammen" : "rademacher";
}

WildWeightLaw parse_law(const std::string& name) {
    if (name == "mammen") return WildWeightLaw::mammen;
    if (name == "rademacher") return WildWeightLaw::rademacher;
    throw std::invalid_argument("unknown wild weight law '" + name + "'");
}

Eigen::VectorXd draw_wild_weights(Eigen::Index n, WildWeightLaw law, std::mt19937_64& engine) {
    if (n < 0) throw std::invalid_argument("wild weights: negative length");
    Eigen::VectorXd v(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (law == WildWeightLaw::mammen) {
        // Two-point law matching the first three residual moments:
        //   v = -(sqrt5 - 1)/2 with prob (sqrt5 + 1)/(2 sqrt5),
        //   v =  (sqrt5 + 1)/2 otherwise.
        const double sqrt5 = std::sqrt(5.0);
        const double lo = -(sqrt5 - 1.0) / 2.0;
        const double hi = (sqrt5 + 1.0) / 2.0;
        const double p_lo = (sqrt5 + 1.0) / (2.0 * sqrt5);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(engine) < p_lo ? lo : hi;
    } else {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(engine) < 0.5 ? -1.0 : 1.0;
    }
    return v;
}

Eigen::VectorXd draw_wild_weights(Eigen::Index n, WildWeightLaw law, std::uint64_t seed) {
    auto engine = rng::stream(seed, {rng::kWildWeights});
    return draw_wild_weights(n, law, engine);
}

TestResult wild_bootstrap_test(const ParametricModel& model, const DataSet& data,
                               const StatisticSpec& statistic, const BootstrapOptions& opts) {
    if (opts.B < 1) throw std::invalid_argument("bootstrap: B must be at least 1");
    if (!(opts.level > 0.0 && opts.level < 1.0))
        throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
    data.validate();

    const FittedModel fit = fit_least_squares(model, data, opts.fit);
    const StatisticCache cache(statistic, data.X);
    const double observed = cache.evaluate(fit.residuals);

    // Refits start from the parent estimate.
    FitOptions refit_opts = opts.fit;
    refit_opts.init = fit.theta;
    const Refitter refitter(model, data.X, refit_opts);

    const Eigen::Index n = data.n();
    const int B = opts.B;
    std::vector<double> boot(static_cast<std::size_t>(B), 0.0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(B), 0);
    std::vector<std::uint8_t> converged(static_cast<std::size_t>(B), 1);

    parallel_for(static_cast<std::size_t>(B), opts.workers, [&](std::size_t b) {
        // Each replicate owns a stream derived from (seed, replicate index),
        // so results do not depend on scheduling.
        auto engine = rng::stream(opts.seed, {rng::kWildWeights, static_cast<std::uint64_t>(b)});
        const Eigen::VectorXd v = draw_wild_weights(n, opts.law, engine);
        const Eigen::VectorXd ystar = fit.fitted + v.cwiseProduct(fit.residuals);
        try {
            const Refitter::Result refit = refitter.refit(ystar);
            boot[b] = cache.evaluate(refit.residuals);
            ok[b] = 1;
            converged[b] = refit.converged ? 1 : 0;
        } catch (const std::exception&) {
            ok[b] = 0;  // counted below; replicate dropped
        }
    });

    TestResult result;
    result.statistic = statistic_name(statistic.kind);
    result.observed = observed;
    result.level = opts.level;
    result.seed = opts.seed;
    result.law = opts.law;
    result.bandwidth = cache.bandwidth();
    result.boot_values.reserve(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        if (!ok[b]) {
            ++result.failed_replicates;
            continue;
        }
        if (!converged[b]) ++result.nonconverged_refits;
        result.boot_values.push_back(boot[b]);
    }

    if (result.failed_replicates > 0.02 * B)
        throw CalibrationError("bootstrap: " + std::to_string(result.failed_replicates) + " of " +
                               std::to_string(B) + " replicates failed to refit");

    result.B = static_cast<int>(result.boot_values.size());
    int count_ge = 0;
    for (double t : result.boot_values)
        if (t >= observed) ++count_ge;
    result.p_value = (1.0 + count_ge) / (result.B + 1.0);
    result.reject = result.p_value <= opts.level;
    return result;
}

} // namespace spectest
