#pragma once

#include <cstdint>
#include <vector>

#include "svie/coeffs.hpp"
#include "svie/paths.hpp"
#include "svie/timegrid.hpp"

namespace svie {

/// Brownian driver sampled on the master grid: exact N(0, dt I_d) increments
/// on [r,T], constant zero on [0,r]. Only increments after r ever enter the
/// schemes, so W(r) = 0 is a pure convention.
struct BrownianPath {
    TimeGridPtr grid;
    std::size_t dim = 1;
    GridPath values;
    std::uint64_t stream = 0;

    BrownianPath(TimeGridPtr g, std::size_t d, GridPath v, std::uint64_t s)
        : grid(std::move(g)), dim(d), values(std::move(v)), stream(s) {}

    Vec increment(std::size_t interval) const {
        return Vec(values.at(interval + 1)) - Vec(values.at(interval));
    }
};

/// Substream id for path `index` under a master seed; stable across runs and
/// worker counts.
std::uint64_t substream(std::uint64_t master_seed, std::uint64_t index);

BrownianPath sample_brownian(TimeGridPtr grid, std::size_t d, std::uint64_t stream);

/// Blow-up threshold: a path whose state exceeds this is censored, never
/// silently dropped.
inline constexpr double kBlowUpThreshold = 1e12;

struct PathSolveResult {
    GridPath path;
    bool censored = false;
    double first_bad_time = 0.0;
};

/// Left-point Euler for X_t = X_r + int b(t,s,X) ds + int sigma(t,s,X) dW_s.
/// Coefficient sets flagged time_invariant use an O(N) running-sum recursion
/// that is bit-identical to the O(N^2) re-summation.
PathSolveResult solve_svie(const CoefficientSet& c, const GridPath& xhat, const BrownianPath& W);

/// Euler for the level-n equation driven by the interpolated slope nW'
///   dY = [Bu + B_H h' + B_bar nW'] ds + Sigma dW.
PathSolveResult solve_sequence_vie(const GeneralCoefficients& g, const GridPath& xhat,
                                   const BrownianPath& W, const Partition& p);

/// Euler for the limit equation dY = [(Bu + R) + B_H h'] ds + (B_bar + Sigma) dW.
PathSolveResult solve_general_vie(const GeneralCoefficients& g, const GridPath& xhat,
                                  const BrownianPath& W);

struct CoupledSolutionPair {
    GridPath Y_n;
    GridPath Y;
    std::size_t level = 0;
    bool censored = false;
};

/// One W per stream; for each partition level, nY and Y solved against the
/// same realization. Deterministic given the stream.
std::vector<CoupledSolutionPair> couple(const GeneralCoefficients& g, const GridPath& xhat,
                                        std::uint64_t stream, const PartitionSequence& pseq);

} // namespace svie
