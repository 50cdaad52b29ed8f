#include "svie/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace svie {

MCEstimate MCEstimate::from_samples(const std::vector<double>& samples, std::size_t censored) {
    if (samples.empty()) throw std::invalid_argument("MCEstimate: empty sample");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
    const double se = std::sqrt(var / n);
    return {samples.size(), mean, se, mean - 1.96 * se, mean + 1.96 * se, censored};
}

MCEstimate MCEstimate::from_weighted(const std::vector<double>& samples,
                                     const std::vector<double>& weights) {
    if (samples.empty() || samples.size() != weights.size())
        throw std::invalid_argument("MCEstimate: empty or mismatched weighted sample");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) mean += samples[i] * weights[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = samples[i] * weights[i] - mean;
        var += v * v;
    }
    var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
    const double se = std::sqrt(var / n);
    return {samples.size(), mean, se, mean - 1.96 * se, mean + 1.96 * se, 0};
}

} // namespace svie
