#include "svie/girsanov.hpp"

#include <cmath>
#include <stdexcept>

namespace svie {

namespace {

// Slope of L_n(y) on the half-open master interval (p_i, p_{i+1}]; reads y
// only at partition knots at or before p_i.
Vec ln_slope_at(const Partition& p, const GridPath& y, std::size_t master_interval) {
    const std::size_t k = p.knot_interval_of_master(master_interval);
    if (k == 0) return Vec::Zero(static_cast<Eigen::Index>(y.dim()));
    const std::size_t a = p.knot_indices()[k - 1];
    const std::size_t b = p.knot_indices()[k];
    const double width = p.knot(k + 1) - p.knot(k);
    return (Vec(y.at(b)) - Vec(y.at(a))) / width;
}

} // namespace

GridPath solve_shifted_driver(const DriverPath& h, const Partition& p, const GridPath& x) {
    const TimeGrid& g = x.grid();
    if (&p.grid() != &g || h.grid().size() != g.size())
        throw std::invalid_argument("solve_shifted_driver: mismatched grids");
    if (h.dim() != x.dim())
        throw std::invalid_argument("solve_shifted_driver: dimension mismatch");
    const std::size_t ir = g.index_of_r();

    GridPath y = x; // y = x on [0,r]; the shift integral starts at r
    for (std::size_t i = ir; i + 1 < g.size(); ++i) {
        const Vec shift = (Vec(h.slope(i)) - ln_slope_at(p, y, i)) * g.dt(i);
        y.at(i + 1) = Vec(y.at(i)) + (Vec(x.at(i + 1)) - Vec(x.at(i))) - shift;
    }
    return y;
}

DensityResult density_terminal(const DriverPath& h, const Partition& p, const BrownianPath& W) {
    const GridPath y = solve_shifted_driver(h, p, W.values);
    const TimeGrid& g = *W.grid;
    const std::size_t ir = g.index_of_r();

    double log_z = 0.0;
    for (std::size_t i = ir; i + 1 < g.size(); ++i) {
        const Vec u = Vec(h.slope(i)) - ln_slope_at(p, y, i);
        log_z += u.dot(W.increment(i)) - 0.5 * u.squaredNorm() * g.dt(i);
    }
    DensityResult res;
    res.log_Z = log_z;
    res.Z_T = std::exp(log_z);
    res.overflow = !std::isfinite(res.Z_T);
    if (res.overflow) res.Z_T = 0.0;
    return res;
}

ReweightedEstimate reweighted_probability(const std::vector<std::uint8_t>& indicator,
                                          const std::vector<double>& weights) {
    if (indicator.empty() || indicator.size() != weights.size())
        throw std::invalid_argument("reweighted_probability: empty or mismatched input");
    const std::size_t n = indicator.size();
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = indicator[i] ? 1.0 : 0.0;

    ReweightedEstimate out;
    out.raw = MCEstimate::from_weighted(samples, weights);

    double wbar = 0.0;
    for (double w : weights) wbar += w;
    wbar /= static_cast<double>(n);
    if (wbar <= 0.0) throw std::invalid_argument("reweighted_probability: degenerate weights");
    std::vector<double> normalized(n);
    for (std::size_t i = 0; i < n; ++i) normalized[i] = weights[i] / wbar;
    out.self_normalized = MCEstimate::from_weighted(samples, normalized);
    return out;
}

} // namespace svie
