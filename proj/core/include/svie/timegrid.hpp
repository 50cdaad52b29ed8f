#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "svie/types.hpp"

namespace svie {

class GridPath;

/// Master time discretization of [0,T] with a delay point r. All paths,
/// partitions and solvers share one grid so that coarse interpolants and
/// fine solutions live on a single index set.
class TimeGrid {
public:
    /// points must be strictly increasing, start at 0, end at T and contain r
    /// exactly once at position index_of_r.
    TimeGrid(std::vector<double> points, std::size_t index_of_r);

    /// Uniform grid: [0,r] split into delay_intervals pieces (ignored when
    /// r = 0), [r,T] into main_intervals pieces.
    static std::shared_ptr<const TimeGrid>
    uniform(double r, double T, std::size_t main_intervals, std::size_t delay_intervals = 1);

    double r() const { return points_[index_of_r_]; }
    double horizon() const { return points_.back(); }
    std::size_t size() const { return points_.size(); }
    std::size_t index_of_r() const { return index_of_r_; }
    double point(std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const { return points_; }

    /// Number of intervals [p_i, p_{i+1}].
    std::size_t interval_count() const { return points_.size() - 1; }
    double dt(std::size_t i) const { return points_[i + 1] - points_[i]; }

    /// Exact index of a grid time; throws if t is not a grid point.
    std::size_t index_of(double t) const;

    /// i such that t in [p_i, p_{i+1}); returns last interval for t = T.
    std::size_t interval_of(double t) const;

private:
    std::vector<double> points_;
    std::size_t index_of_r_;
};

using TimeGridPtr = std::shared_ptr<const TimeGrid>;

/// Partition T_n of [r,T] whose knots are master-grid points. Nesting is
/// enforced through indices, never through floating-point comparison.
class Partition {
public:
    Partition(TimeGridPtr grid, std::vector<std::size_t> knot_indices);

    /// Build from knot times that must all lie on the master grid.
    static Partition from_times(TimeGridPtr grid, const std::vector<double>& knot_times);

    const TimeGrid& grid() const { return *grid_; }
    TimeGridPtr grid_ptr() const { return grid_; }
    const std::vector<std::size_t>& knot_indices() const { return knot_indices_; }

    /// Number of intervals k_n.
    std::size_t interval_count() const { return knot_indices_.size() - 1; }
    std::size_t knot_count() const { return knot_indices_.size(); }
    double knot(std::size_t i) const { return grid_->point(knot_indices_[i]); }

    double mesh() const;
    double min_gap() const;

    /// i in {0,..,k_n-1} with s in [t_i, t_{i+1}); for s = T returns k_n - 1.
    std::size_t knot_interval_of(double s) const;

    /// Partition interval containing the half-open master interval
    /// (p_j, p_{j+1}]; requires the master interval to be nested.
    std::size_t knot_interval_of_master(std::size_t master_interval) const;

private:
    TimeGridPtr grid_;
    std::vector<std::size_t> knot_indices_;
};

struct PartitionSequence {
    TimeGridPtr grid;
    std::vector<Partition> partitions; // increasing refinement
    double c_T = 1.0;                  // balancedness constant
    std::optional<double> c_T_bar;     // k_n * mesh bound, when available

    const Partition& level(std::size_t n) const { return partitions.at(n); }
    std::size_t levels() const { return partitions.size(); }
};

/// Nested equidistant partitions with k_n = base_intervals * 2^(n-1) on [r,T].
/// The master grid is the finest partition refined by `oversampling`.
PartitionSequence make_dyadic_sequence(double r, double T, int levels, int base_intervals,
                                       int oversampling = 1);

struct Neighbors {
    double below; // predecessor of the current knot (clamped at the first)
    double at;    // current knot
    double above; // successor
};

/// Predecessor/current/successor knots around s; at s = T both the current
/// and successor collapse to T with predecessor t_{k_n-1}.
Neighbors neighbors(const Partition& p, double s);

/// Step-ratio gamma_n(s) = dt_i / dt_{i+1} on [t_i, t_{i+1}); 1 at s = T.
/// The first step length is zero by the (i-1) v 0 convention.
double gamma_ratio(const Partition& p, double s);

/// Delayed linear interpolation L_n(x) evaluated on the master grid:
/// x(r ^ t) up to t_{1,n}, then on (t_i, t_{i+1}] the line from x(t_{i-1})
/// toward x(t_i). Lags the data by one partition interval.
GridPath interpolate_Ln(const Partition& p, const GridPath& x);

/// Derivative of L_n(x) at s: (x(t_i) - x(t_{i-1})) / (t_{i+1} - t_i) on the
/// left-open interval (t_i, t_{i+1}]; zero on [r, t_{1,n}].
Vec slope_Ln(const Partition& p, const GridPath& x, double s);

nlohmann::json to_json(const PartitionSequence& seq);
PartitionSequence partition_sequence_from_json(const nlohmann::json& j, int oversampling = 1);

} // namespace svie
