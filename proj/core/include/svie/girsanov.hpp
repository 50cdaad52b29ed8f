#pragma once

#include <vector>

#include "svie/driver.hpp"
#include "svie/stats.hpp"
#include "svie/timegrid.hpp"
#include "svie/volterra_sde.hpp"

namespace svie {

/// Solves y(t) = x(t) - int_r^{r v t} (h'(s) - L_n'(y)(s)) ds by forward
/// substitution on the master grid. Explicit because the interpolated slope
/// on (t_i, t_{i+1}] only uses y at knots <= t_i.
GridPath solve_shifted_driver(const DriverPath& h, const Partition& p, const GridPath& x);

struct DensityResult {
    double Z_T = 1.0;
    double log_Z = 0.0;
    bool overflow = false; // Z_T not representable; use log_Z
};

/// Terminal Girsanov density for the shifted driver: the stochastic integral
/// by left-point sums against the Brownian increments, the quadratic term by
/// exact piecewise-constant quadrature.
DensityResult density_terminal(const DriverPath& h, const Partition& p, const BrownianPath& W);

struct ReweightedEstimate {
    MCEstimate raw;             // direct weighted mean (unbiased)
    MCEstimate self_normalized; // weights divided by their sample mean
};

/// P_{h,n}(A) estimated as a weighted mean of the indicator with weights Z_T.
ReweightedEstimate reweighted_probability(const std::vector<std::uint8_t>& indicator,
                                          const std::vector<double>& weights);

} // namespace svie
