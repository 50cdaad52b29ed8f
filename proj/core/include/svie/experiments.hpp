#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "svie/coeffs.hpp"
#include "svie/stats.hpp"
#include "svie/timegrid.hpp"
#include "svie/volterra_det.hpp"
#include "svie/volterra_sde.hpp"

namespace svie {

/// Kolmogorov-Chentsov constant k_{alpha,p,q} = 2^{p+q} (2^{q/p-alpha} - 1)^{-p}.
/// Requires 0 <= alpha < q/p; increasing in alpha with a pole at q/p.
double kc_constant(double alpha, double p, double q);

/// w_hat_{p,q} = E|Z|^{pq} c_T^{pq} with Z ~ N(0, I_d), the moment by the
/// chi-distribution formula 2^{pq/2} Gamma((d+pq)/2) / Gamma(d/2).
double w_hat_constant(double p, double q, double c_T, int d);

struct LevelRecord {
    std::size_t level = 0;     // index into the partition sequence
    double mesh = 0.0;         // |T_n|
    std::size_t intervals = 0; // k_n
    MCEstimate e_max_sq;       // E max_j |nY - Y|^2 at the knots
    double ratio_to_mesh_2alpha = 0.0;
    MCEstimate hoelder_sq;     // E ||nY - Y||_{alpha,r}^2
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

struct ConvergenceReport {
    double alpha = 0.0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<LevelRecord> levels; // ordered by decreasing mesh
    RateFit fit;                     // log E max^2 vs log mesh
};

/// Couples nY and Y per path and level, estimates the knot-max and Hoelder
/// second moments of the difference and fits a log-log rate.
ConvergenceReport run_convergence_study(const GeneralCoefficients& g, const GridPath& xhat,
                                        const PartitionSequence& pseq, double alpha,
                                        std::size_t paths, std::uint64_t seed, int workers = 0);

/// Weighted least squares of log(mean) on log(mesh) with weights
/// 1/std_error^2; the confidence band comes from a parametric bootstrap over
/// the level means. Requires >= 3 levels with positive means.
RateFit fit_rate(const std::vector<std::pair<double, MCEstimate>>& levels,
                 std::uint64_t bootstrap_seed = 7, std::size_t bootstrap_rounds = 400);

struct SupportLevelRecord {
    std::size_t level = 0;
    double mesh = 0.0;
    MCEstimate exceed_fraction; // fraction of paths with ||x_{nW} - X|| >= eps
};

struct SupportReport {
    double alpha = 0.0;
    double eps = 0.0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<SupportLevelRecord> forward;
    // Reverse diagnostic: distribution of min_h ||X - x_h|| over the driver
    // family (empty when no drivers were supplied).
    MCEstimate reverse_min_distance;
    double reverse_q50 = 0.0;
    double reverse_q90 = 0.0;
    double reverse_max = 0.0;
    std::size_t censored = 0;
};

SupportReport run_support_diagnostic(const CoefficientSet& c, const GridPath& xhat,
                                     const PartitionSequence& pseq, double alpha, double eps,
                                     std::size_t paths, const std::vector<DriverPath>& drivers,
                                     std::uint64_t seed, int workers = 0);

/// Per-path decomposition of the discrete Hoelder seminorm of x into the
/// within-interval part (doubled) and the knot-level part; their sum bounds
/// the full seminorm from above.
struct SeminormDecomposition {
    double full = 0.0;
    double within = 0.0; // 2 max_j sup over [t_j, t_{j+1}] pairs
    double knots = 0.0;  // max over distinct knot pairs
};
SeminormDecomposition hoelder_seminorm_decomposition(const GridPath& x, const Partition& p,
                                                     double alpha);

nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const SupportReport& r);

} // namespace svie
