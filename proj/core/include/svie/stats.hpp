#pragma once

#include <cstddef>
#include <vector>

namespace svie {

/// Monte Carlo statistic with a normal-approximation 95% confidence interval.
struct MCEstimate {
    std::size_t n_samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t censored = 0;

    static MCEstimate from_samples(const std::vector<double>& samples, std::size_t censored = 0);
    static MCEstimate from_weighted(const std::vector<double>& samples,
                                    const std::vector<double>& weights);
};

} // namespace svie
