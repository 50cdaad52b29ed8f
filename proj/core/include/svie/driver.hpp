#pragma once

#include <functional>
#include <vector>

#include "svie/paths.hpp"
#include "svie/timegrid.hpp"
#include "svie/types.hpp"

namespace svie {

/// Absolutely continuous driver h in W_r^{1,p}, stored as one constant slope
/// vector per master interval. Slopes vanish on [0,r]; the initial segment
/// there is part of the stored values.
class DriverPath {
public:
    /// slopes: one R^d vector per master interval on [r,T] (interval index
    /// i_r .. N-2). The path starts at `start` at time r and is constant at
    /// `start` on [0,r].
    DriverPath(TimeGridPtr grid, std::size_t dim, std::vector<double> slopes, Vec start);

    static DriverPath zero(TimeGridPtr grid, std::size_t dim);
    static DriverPath constant_slope(TimeGridPtr grid, const Vec& slope);
    /// Piecewise-linear interpolant of t -> f(t) sampled at master points
    /// (on [r,T]; frozen at f(r) before).
    static DriverPath from_function(TimeGridPtr grid, std::size_t dim,
                                    const std::function<Vec(double)>& f);
    /// Driver with the values of x at master points on [r,T] (x must be
    /// piecewise linear for the slopes to be meaningful).
    static DriverPath from_grid_path(const GridPath& x);

    const TimeGrid& grid() const { return *grid_; }
    TimeGridPtr grid_ptr() const { return grid_; }
    std::size_t dim() const { return dim_; }

    /// Slope on the master interval [p_i, p_{i+1}] (zero before r).
    Eigen::Map<const Eigen::VectorXd> slope(std::size_t interval) const {
        return {slopes_.data() + interval * dim_, static_cast<Eigen::Index>(dim_)};
    }

    Vec value_at(std::size_t index) const { return values_.at(index); }
    GridPath to_grid_path() const;

private:
    TimeGridPtr grid_;
    std::size_t dim_;
    std::vector<double> slopes_; // per master interval, zero-padded on [0,r]
    GridPath values_;            // cumulated values at master points
};

/// Delayed Sobolev L^p norm: ||h^r||_inf + (sum |slope_i|^p dt_i)^(1/p).
/// Exact for the stored piecewise-linear representation.
double sobolev_norm(const DriverPath& h, double p);

} // namespace svie
