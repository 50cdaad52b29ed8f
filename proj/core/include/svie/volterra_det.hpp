#pragma once

#include <stdexcept>
#include <vector>

#include "svie/coeffs.hpp"
#include "svie/driver.hpp"
#include "svie/paths.hpp"

namespace svie {

/// Raised when a solver state leaves the finite range.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double first_bad_time)
        : std::runtime_error("solution blew up at t = " + std::to_string(first_bad_time)),
          time(first_bad_time) {}
    double time;
};

/// Deterministic support flow x_h: explicit left-point Volterra quadrature of
///   x(t) = x(r) + int_r^t (b - (1/2) rho)(t,s,x) ds + int_r^t sigma(t,s,x) dh(s)
/// on the master grid. xhat supplies the initial segment on [0,r]. Throws
/// BlowUpError on non-finite states.
GridPath solve_support_vie(const CoefficientSet& c, const GridPath& xhat, const DriverPath& h);

/// Alternative stepping through the mild integro-differential form, available
/// for kernel-separable coefficient sets with analytic time derivatives.
/// Cross-check only; agrees with solve_support_vie to first order in mesh.
GridPath solve_support_vie_mild(const CoefficientSet& c, const GridPath& xhat,
                                const DriverPath& h);

struct FlowPairRatio {
    std::size_t i = 0;
    std::size_t j = 0;
    double ratio = 0.0; // ||x_g - x_h||_{1,p,r} / ||g - h||_{1,p,r}
    bool skipped = false;
};

struct FlowDiagnostics {
    std::vector<GridPath> solutions;
    std::vector<FlowPairRatio> lipschitz;
    double p = 2.0;
};

/// Maps each driver through solve_support_vie and reports pairwise Lipschitz
/// ratios of the flow in the delayed Sobolev norm. Pairs with coinciding
/// drivers are skipped.
FlowDiagnostics flow_map(const CoefficientSet& c, const GridPath& xhat,
                         const std::vector<DriverPath>& drivers, double p = 2.0);

/// All piecewise-linear drivers whose slope on each of `coarse_knots` uniform
/// subintervals of [r,T] is one of slope_levels (componentwise for d > 1).
/// Throws when |slope_levels|^(coarse_knots * d) exceeds cap.
std::vector<DriverPath> driver_lattice(TimeGridPtr grid, std::size_t coarse_knots,
                                       const std::vector<double>& slope_levels, std::size_t d,
                                       std::size_t cap = 20000);

} // namespace svie
