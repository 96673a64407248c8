// Streaming mean/variance accumulator (Welford).  Exact for constant input:
// the update v - mean underflows to zero, so m2 stays exactly 0.
#pragma once

#include <cmath>
#include <cstdint>

namespace spectest {

struct RunningMoments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations from the running mean

    void add(double v) {
        ++count;
        const double d1 = v - mean;
        mean += d1 / static_cast<double>(count);
        m2 += d1 * (v - mean);
    }

    [[nodiscard]] double variance() const {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }

    /// Standard error of the mean.
    [[nodiscard]] double std_error() const {
        return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

/// Point estimate with its Monte Carlo standard error.
struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

} // namespace spectest
