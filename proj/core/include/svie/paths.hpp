#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "svie/timegrid.hpp"
#include "svie/types.hpp"

namespace svie {

/// An R^m-valued path sampled on the master grid.
class GridPath {
public:
    GridPath(TimeGridPtr grid, std::size_t dim);
    GridPath(TimeGridPtr grid, std::size_t dim, std::vector<double> values);

    static GridPath constant(TimeGridPtr grid, const Vec& value);
    static GridPath from_function(TimeGridPtr grid, std::size_t dim,
                                  const std::function<Vec(double)>& f);

    const TimeGrid& grid() const { return *grid_; }
    TimeGridPtr grid_ptr() const { return grid_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return grid_->size(); }

    Eigen::Map<const Eigen::VectorXd> at(std::size_t i) const {
        return {values_.data() + i * dim_, static_cast<Eigen::Index>(dim_)};
    }
    Eigen::Map<Eigen::VectorXd> at(std::size_t i) {
        return {values_.data() + i * dim_, static_cast<Eigen::Index>(dim_)};
    }
    void set(std::size_t i, const Vec& v) { at(i) = v; }

    double value(std::size_t i, std::size_t k) const { return values_[i * dim_ + k]; }
    const std::vector<double>& raw() const { return values_; }
    std::vector<double>& raw() { return values_; }

    bool all_finite() const;

private:
    TimeGridPtr grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

/// Read-only view of a path stopped at a grid index, optionally with a
/// vertical bump v * 1_{[s,T]}. Evaluating coefficients through this view is
/// what enforces non-anticipativity: indices past the stop clamp to the
/// stopped value.
class PathView {
public:
    PathView(const GridPath& x, std::size_t stop_index)
        : path_(&x), stop_(stop_index), bump_from_(0), has_bump_(false) {}

    PathView bumped(const Vec& delta, std::size_t from_index) const {
        PathView v(*this);
        v.bump_ = delta;
        v.bump_from_ = from_index;
        v.has_bump_ = true;
        return v;
    }

    std::size_t dim() const { return path_->dim(); }
    const TimeGrid& grid() const { return path_->grid(); }
    std::size_t stop_index() const { return stop_; }

    Vec at_index(std::size_t i) const {
        Vec v = path_->at(i < stop_ ? i : stop_);
        if (has_bump_ && i >= bump_from_) v += bump_;
        return v;
    }

    /// Value at a grid time (exact lookup).
    Vec at_time(double t) const { return at_index(path_->grid().index_of(t)); }

private:
    const GridPath* path_;
    std::size_t stop_;
    Vec bump_;
    std::size_t bump_from_;
    bool has_bump_;
};

struct NormReport {
    double sup_norm = 0.0;
    double hoelder = 0.0;
    double sobolev = 0.0;
    double alpha = 0.0;
    double p = 2.0;
};

/// t -> x(s ^ t); s must be a master-grid point.
GridPath stop_path(const GridPath& x, double s);

/// max over the grid of the Euclidean norm of the values.
double sup_norm(const GridPath& x);

/// Delayed alpha-Hoelder norm: ||x^r||_inf plus the discrete seminorm over
/// all grid pairs in [r,T]. Alpha = 0 degenerates to the sup norm. The
/// discrete value converges to the continuum norm from below under grid
/// refinement.
double hoelder_norm(const GridPath& x, double alpha);

/// Same, for the difference x - y (paths on the same grid). Avoids
/// materializing the difference path.
double hoelder_norm_diff(const GridPath& x, const GridPath& y, double alpha);

/// Pseudometric d_inf((t,x),(s,y)) = |t-s|^(1/2) + ||x^t - y^s||_inf.
double d_infty(double t, const GridPath& x, double s, const GridPath& y);

// Serialization: CSV with columns t, x_1..x_m, and a compact little-endian
// binary dump with header (m, N) as 64-bit values.
void write_csv(const GridPath& x, std::ostream& os);
void write_binary(const GridPath& x, std::ostream& os);
GridPath read_binary(TimeGridPtr grid, std::istream& is);

} // namespace svie
