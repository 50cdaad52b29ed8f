#include "svie/paths.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace svie {

GridPath::GridPath(TimeGridPtr grid, std::size_t dim)
    : grid_(std::move(grid)), dim_(dim), values_(grid_->size() * dim, 0.0) {
    if (dim_ == 0 || dim_ > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("GridPath: dim must be in [1, 16]");
}

GridPath::GridPath(TimeGridPtr grid, std::size_t dim, std::vector<double> values)
    : grid_(std::move(grid)), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0 || dim_ > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("GridPath: dim must be in [1, 16]");
    if (values_.size() != grid_->size() * dim_)
        throw std::invalid_argument("GridPath: values length mismatch");
}

GridPath GridPath::constant(TimeGridPtr grid, const Vec& value) {
    GridPath x(std::move(grid), static_cast<std::size_t>(value.size()));
    for (std::size_t i = 0; i < x.size(); ++i) x.at(i) = value;
    return x;
}

GridPath GridPath::from_function(TimeGridPtr grid, std::size_t dim,
                                 const std::function<Vec(double)>& f) {
    GridPath x(std::move(grid), dim);
    for (std::size_t i = 0; i < x.size(); ++i) x.at(i) = f(x.grid().point(i));
    return x;
}

bool GridPath::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

GridPath stop_path(const GridPath& x, double s) {
    const std::size_t stop = x.grid().index_of(s);
    GridPath out(x.grid_ptr(), x.dim());
    for (std::size_t i = 0; i < x.size(); ++i) out.at(i) = x.at(std::min(i, stop));
    return out;
}

double sup_norm(const GridPath& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, x.at(i).norm());
    return m;
}

namespace {

double stopped_sup_term(const GridPath& x) {
    const std::size_t ir = x.grid().index_of_r();
    double m = 0.0;
    for (std::size_t i = 0; i <= ir; ++i) m = std::max(m, x.at(i).norm());
    return m;
}

double stopped_sup_term_diff(const GridPath& x, const GridPath& y) {
    const std::size_t ir = x.grid().index_of_r();
    double m = 0.0;
    for (std::size_t i = 0; i <= ir; ++i) m = std::max(m, (x.at(i) - y.at(i)).norm());
    return m;
}

// O(N^2) pair scan over [r,T]; the correctness baseline at desk scale. For
// alpha = 1 the max over adjacent pairs is exact and O(N).
template <typename Increment>
double seminorm_pairs(const TimeGrid& g, double alpha, Increment inc) {
    const std::size_t ir = g.index_of_r();
    const std::size_t n = g.size();
    double m = 0.0;
    if (alpha == 1.0) {
        for (std::size_t i = ir; i + 1 < n; ++i)
            m = std::max(m, inc(i, i + 1) / (g.point(i + 1) - g.point(i)));
        return m;
    }
    for (std::size_t i = ir; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, inc(i, j) / std::pow(g.point(j) - g.point(i), alpha));
    return m;
}

} // namespace

double hoelder_norm(const GridPath& x, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("hoelder_norm: alpha in [0,1]");
    if (alpha == 0.0) return sup_norm(x);
    auto inc = [&x](std::size_t i, std::size_t j) { return (x.at(j) - x.at(i)).norm(); };
    return stopped_sup_term(x) + seminorm_pairs(x.grid(), alpha, inc);
}

double hoelder_norm_diff(const GridPath& x, const GridPath& y, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("hoelder_norm: alpha in [0,1]");
    if (x.dim() != y.dim() || x.size() != y.size())
        throw std::invalid_argument("hoelder_norm_diff: path mismatch");
    if (alpha == 0.0) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, (x.at(i) - y.at(i)).norm());
        return m;
    }
    auto inc = [&x, &y](std::size_t i, std::size_t j) {
        return ((x.at(j) - y.at(j)) - (x.at(i) - y.at(i))).norm();
    };
    return stopped_sup_term_diff(x, y) + seminorm_pairs(x.grid(), alpha, inc);
}

double d_infty(double t, const GridPath& x, double s, const GridPath& y) {
    if (x.dim() != y.dim() || x.size() != y.size())
        throw std::invalid_argument("d_infty: path mismatch");
    const std::size_t st = x.grid().index_of(t);
    const std::size_t ss = y.grid().index_of(s);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, (x.at(std::min(i, st)) - y.at(std::min(i, ss))).norm());
    return std::sqrt(std::abs(t - s)) + m;
}

void write_csv(const GridPath& x, std::ostream& os) {
    os << "t";
    for (std::size_t k = 0; k < x.dim(); ++k) os << ",x_" << (k + 1);
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", x.grid().point(i));
        os << buf;
        for (std::size_t k = 0; k < x.dim(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", x.value(i, k));
            os << ',' << buf;
        }
        os << "\n";
    }
}

void write_binary(const GridPath& x, std::ostream& os) {
    const std::uint64_t m = x.dim();
    const std::uint64_t n = x.size();
    os.write(reinterpret_cast<const char*>(&m), sizeof(m));
    os.write(reinterpret_cast<const char*>(&n), sizeof(n));
    os.write(reinterpret_cast<const char*>(x.raw().data()),
             static_cast<std::streamsize>(x.raw().size() * sizeof(double)));
}

GridPath read_binary(TimeGridPtr grid, std::istream& is) {
    std::uint64_t m = 0, n = 0;
    is.read(reinterpret_cast<char*>(&m), sizeof(m));
    is.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!is || n != grid->size()) throw std::runtime_error("read_binary: header mismatch");
    std::vector<double> values(m * n);
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_binary: truncated payload");
    return GridPath(std::move(grid), m, std::move(values));
}

} // namespace svie
