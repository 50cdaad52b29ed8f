#pragma once

#include <random>

#include "svie/paths.hpp"
#include "svie/timegrid.hpp"

namespace svie::testing {

inline GridPath random_path(TimeGridPtr grid, std::size_t dim, std::uint64_t seed,
                            double scale = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    GridPath x(grid, dim);
    for (double& v : x.raw()) v = u(eng);
    return x;
}

} // namespace svie::testing
