#include "svie/driver.hpp"

#include <cmath>

namespace svie {

namespace {

GridPath accumulate(const TimeGridPtr& grid, std::size_t dim, const std::vector<double>& slopes,
                    const Vec& start) {
    if (slopes.size() != grid->interval_count() * dim)
        throw std::invalid_argument("DriverPath: one slope vector per master interval required");
    GridPath x(grid, dim);
    const std::size_t ir = grid->index_of_r();
    for (std::size_t i = 0; i <= ir; ++i) x.at(i) = start;
    Vec v = start;
    for (std::size_t i = ir; i + 1 < grid->size(); ++i) {
        Eigen::Map<const Eigen::VectorXd> s(slopes.data() + i * dim,
                                            static_cast<Eigen::Index>(dim));
        v += grid->dt(i) * s;
        x.at(i + 1) = v;
    }
    return x;
}

} // namespace

DriverPath::DriverPath(TimeGridPtr grid, std::size_t dim, std::vector<double> slopes, Vec start)
    : grid_(std::move(grid)),
      dim_(dim),
      slopes_(std::move(slopes)),
      values_(accumulate(grid_, dim, slopes_, start)) {
    const std::size_t ir = grid_->index_of_r();
    for (std::size_t i = 0; i < ir * dim_; ++i)
        if (slopes_[i] != 0.0)
            throw std::invalid_argument("DriverPath: slopes must vanish on [0,r]");
}

DriverPath DriverPath::zero(TimeGridPtr grid, std::size_t dim) {
    std::vector<double> slopes(grid->interval_count() * dim, 0.0);
    return DriverPath(std::move(grid), dim, std::move(slopes),
                      Vec::Zero(static_cast<Eigen::Index>(dim)));
}

DriverPath DriverPath::constant_slope(TimeGridPtr grid, const Vec& slope) {
    const std::size_t dim = static_cast<std::size_t>(slope.size());
    std::vector<double> slopes(grid->interval_count() * dim, 0.0);
    for (std::size_t i = grid->index_of_r(); i < grid->interval_count(); ++i)
        for (std::size_t k = 0; k < dim; ++k) slopes[i * dim + k] = slope[k];
    return DriverPath(std::move(grid), dim, std::move(slopes),
                      Vec::Zero(static_cast<Eigen::Index>(dim)));
}

DriverPath DriverPath::from_function(TimeGridPtr grid, std::size_t dim,
                                     const std::function<Vec(double)>& f) {
    std::vector<double> slopes(grid->interval_count() * dim, 0.0);
    for (std::size_t i = grid->index_of_r(); i < grid->interval_count(); ++i) {
        const Vec s = (f(grid->point(i + 1)) - f(grid->point(i))) / grid->dt(i);
        for (std::size_t k = 0; k < dim; ++k) slopes[i * dim + k] = s[k];
    }
    return DriverPath(std::move(grid), dim, std::move(slopes), f(grid->r()));
}

DriverPath DriverPath::from_grid_path(const GridPath& x) {
    auto grid = x.grid_ptr();
    const std::size_t dim = x.dim();
    std::vector<double> slopes(grid->interval_count() * dim, 0.0);
    for (std::size_t i = grid->index_of_r(); i < grid->interval_count(); ++i) {
        const Vec s = (Vec(x.at(i + 1)) - Vec(x.at(i))) / grid->dt(i);
        for (std::size_t k = 0; k < dim; ++k) slopes[i * dim + k] = s[k];
    }
    return DriverPath(std::move(grid), dim, std::move(slopes), x.at(grid->index_of_r()));
}

GridPath DriverPath::to_grid_path() const { return values_; }

double sobolev_norm(const DriverPath& h, double p) {
    if (p < 1.0) throw std::invalid_argument("sobolev_norm: p must be >= 1");
    const TimeGrid& g = h.grid();
    const std::size_t ir = g.index_of_r();
    double sup = 0.0;
    for (std::size_t i = 0; i <= ir; ++i) sup = std::max(sup, h.value_at(i).norm());
    double integral = 0.0;
    for (std::size_t i = ir; i < g.interval_count(); ++i)
        integral += std::pow(h.slope(i).norm(), p) * g.dt(i);
    return sup + std::pow(integral, 1.0 / p);
}

} // namespace svie
