#pragma once

#include <Eigen/Core>

namespace svie {

// Fixed-capacity vectors/matrices: dynamic size up to kMaxDim, stack storage.
// Keeps the per-step coefficient evaluations in the Volterra solvers free of
// heap allocations.
inline constexpr int kMaxDim = 16;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

} // namespace svie
