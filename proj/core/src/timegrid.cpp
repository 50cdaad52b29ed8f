#include "svie/timegrid.hpp"

#include <algorithm>
#include <cmath>

#include "svie/paths.hpp"

namespace svie {

TimeGrid::TimeGrid(std::vector<double> points, std::size_t index_of_r)
    : points_(std::move(points)), index_of_r_(index_of_r) {
    if (points_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two points");
    if (points_.front() != 0.0) throw std::invalid_argument("TimeGrid: points must start at 0");
    if (index_of_r_ >= points_.size() - 1)
        throw std::invalid_argument("TimeGrid: r must precede the horizon");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (!(points_[i] < points_[i + 1]))
            throw std::invalid_argument("TimeGrid: points must be strictly increasing");
}

std::shared_ptr<const TimeGrid> TimeGrid::uniform(double r, double T, std::size_t main_intervals,
                                                  std::size_t delay_intervals) {
    if (!(r >= 0.0 && r < T)) throw std::invalid_argument("TimeGrid: need 0 <= r < T");
    if (main_intervals == 0) throw std::invalid_argument("TimeGrid: main_intervals must be >= 1");
    std::vector<double> pts;
    std::size_t ir = 0;
    if (r > 0.0) {
        if (delay_intervals == 0) delay_intervals = 1;
        for (std::size_t i = 0; i < delay_intervals; ++i)
            pts.push_back(r * static_cast<double>(i) / static_cast<double>(delay_intervals));
        ir = delay_intervals;
    }
    for (std::size_t j = 0; j <= main_intervals; ++j)
        pts.push_back(r + (T - r) * static_cast<double>(j) / static_cast<double>(main_intervals));
    return std::make_shared<TimeGrid>(std::move(pts), ir);
}

std::size_t TimeGrid::index_of(double t) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    const double tol = 1e-9 * (1.0 + std::abs(horizon()));
    if (it != points_.end() && std::abs(*it - t) <= tol)
        return static_cast<std::size_t>(it - points_.begin());
    if (it != points_.begin() && std::abs(*(it - 1) - t) <= tol)
        return static_cast<std::size_t>(it - points_.begin()) - 1;
    throw std::invalid_argument("TimeGrid: t = " + std::to_string(t) + " is not a grid point");
}

std::size_t TimeGrid::interval_of(double t) const {
    if (t < points_.front() || t > points_.back())
        throw std::invalid_argument("TimeGrid: t outside [0,T]");
    if (t >= points_.back()) return points_.size() - 2;
    auto it = std::upper_bound(points_.begin(), points_.end(), t);
    return static_cast<std::size_t>(it - points_.begin()) - 1;
}

Partition::Partition(TimeGridPtr grid, std::vector<std::size_t> knot_indices)
    : grid_(std::move(grid)), knot_indices_(std::move(knot_indices)) {
    if (knot_indices_.size() < 2) throw std::invalid_argument("Partition: need >= 2 knots");
    if (knot_indices_.front() != grid_->index_of_r())
        throw std::invalid_argument("Partition: first knot must be r");
    if (knot_indices_.back() != grid_->size() - 1)
        throw std::invalid_argument("Partition: last knot must be T");
    for (std::size_t i = 0; i + 1 < knot_indices_.size(); ++i)
        if (!(knot_indices_[i] < knot_indices_[i + 1]))
            throw std::invalid_argument("Partition: knot indices must increase");
}

Partition Partition::from_times(TimeGridPtr grid, const std::vector<double>& knot_times) {
    std::vector<std::size_t> idx;
    idx.reserve(knot_times.size());
    for (double t : knot_times) idx.push_back(grid->index_of(t));
    return Partition(std::move(grid), std::move(idx));
}

double Partition::mesh() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < knot_indices_.size(); ++i)
        m = std::max(m, knot(i + 1) - knot(i));
    return m;
}

double Partition::min_gap() const {
    double m = knot(1) - knot(0);
    for (std::size_t i = 1; i + 1 < knot_indices_.size(); ++i)
        m = std::min(m, knot(i + 1) - knot(i));
    return m;
}

std::size_t Partition::knot_interval_of(double s) const {
    const double r = grid_->r();
    const double T = grid_->horizon();
    if (s < r || s > T) throw std::invalid_argument("Partition: s outside [r,T]");
    if (s >= T) return interval_count() - 1;
    std::size_t lo = 0, hi = interval_count() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (knot(mid) <= s)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::size_t Partition::knot_interval_of_master(std::size_t master_interval) const {
    if (master_interval < grid_->index_of_r() || master_interval >= grid_->size() - 1)
        throw std::invalid_argument("Partition: master interval outside [r,T]");
    auto it = std::upper_bound(knot_indices_.begin(), knot_indices_.end(), master_interval);
    if (it == knot_indices_.begin() || it == knot_indices_.end())
        throw std::invalid_argument("Partition: master interval not nested");
    return static_cast<std::size_t>(it - knot_indices_.begin()) - 1;
}

PartitionSequence make_dyadic_sequence(double r, double T, int levels, int base_intervals,
                                       int oversampling) {
    if (!(r >= 0.0 && r < T)) throw std::invalid_argument("make_dyadic_sequence: need r < T");
    if (levels < 1) throw std::invalid_argument("make_dyadic_sequence: levels must be >= 1");
    if (base_intervals < 1)
        throw std::invalid_argument("make_dyadic_sequence: base_intervals must be >= 1");
    if (oversampling < 1)
        throw std::invalid_argument("make_dyadic_sequence: oversampling must be >= 1");

    const std::size_t finest =
        static_cast<std::size_t>(base_intervals) << static_cast<unsigned>(levels - 1);
    const std::size_t master = finest * static_cast<std::size_t>(oversampling);
    std::size_t delay = 1;
    if (r > 0.0) {
        const double mesh = (T - r) / static_cast<double>(master);
        delay = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(r / mesh)));
    }
    auto grid = TimeGrid::uniform(r, T, master, delay);

    PartitionSequence seq;
    seq.grid = grid;
    seq.c_T = 1.0;
    seq.c_T_bar = (T - r) * (1.0 + 1.0 / static_cast<double>(base_intervals));
    const std::size_t ir = grid->index_of_r();
    for (int n = 1; n <= levels; ++n) {
        const std::size_t k = static_cast<std::size_t>(base_intervals)
                              << static_cast<unsigned>(n - 1);
        const std::size_t stride = master / k;
        std::vector<std::size_t> idx;
        idx.reserve(k + 1);
        for (std::size_t i = 0; i <= k; ++i) idx.push_back(ir + i * stride);
        seq.partitions.emplace_back(grid, std::move(idx));
    }
    return seq;
}

Neighbors neighbors(const Partition& p, double s) {
    const double T = p.grid().horizon();
    if (s >= T) return {p.knot(p.interval_count() - 1), T, T};
    const std::size_t i = p.knot_interval_of(s);
    const std::size_t below = (i == 0) ? 0 : i - 1;
    return {p.knot(below), p.knot(i), p.knot(i + 1)};
}

double gamma_ratio(const Partition& p, double s) {
    const double T = p.grid().horizon();
    if (s >= T) {
        if (s > T) throw std::invalid_argument("gamma_ratio: s outside [r,T]");
        return 1.0;
    }
    const std::size_t i = p.knot_interval_of(s);
    const double dt_i = (i == 0) ? 0.0 : p.knot(i) - p.knot(i - 1);
    const double dt_next = p.knot(i + 1) - p.knot(i);
    return dt_i / dt_next;
}

GridPath interpolate_Ln(const Partition& p, const GridPath& x) {
    if (x.grid_ptr().get() != p.grid_ptr().get() && x.size() != p.grid().size())
        throw std::invalid_argument("interpolate_Ln: path not on the partition's master grid");
    const TimeGrid& g = p.grid();
    const std::size_t ir = g.index_of_r();
    const auto& knots = p.knot_indices();
    GridPath out(x.grid_ptr(), x.dim());

    for (std::size_t j = 0; j < g.size(); ++j) {
        if (j <= knots[1]) {
            out.at(j) = x.at(std::min(j, ir)); // x(r ^ t) up to the first knot
            continue;
        }
        // master point j lies in (t_i, t_{i+1}] for some i >= 1
        auto it = std::lower_bound(knots.begin(), knots.end(), j);
        const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
        const double ti = g.point(knots[i]);
        const double tip1 = g.point(knots[i + 1]);
        const double w = (g.point(j) - ti) / (tip1 - ti);
        out.at(j) =
            Vec(x.at(knots[i - 1])) + w * (Vec(x.at(knots[i])) - Vec(x.at(knots[i - 1])));
    }
    return out;
}

Vec slope_Ln(const Partition& p, const GridPath& x, double s) {
    const TimeGrid& g = p.grid();
    const double r = g.r();
    const double T = g.horizon();
    if (s < r || s > T) throw std::invalid_argument("slope_Ln: s outside [r,T]");
    if (s <= p.knot(1)) return Vec::Zero(static_cast<Eigen::Index>(x.dim()));
    // i with s in (t_i, t_{i+1}]
    std::size_t i = p.knot_interval_of(s);
    if (s == p.knot(i)) --i; // left-open convention at knots
    const auto& knots = p.knot_indices();
    const double dt = p.knot(i + 1) - p.knot(i);
    return (Vec(x.at(knots[i])) - Vec(x.at(knots[i - 1]))) / dt;
}

nlohmann::json to_json(const PartitionSequence& seq) {
    nlohmann::json j;
    j["r"] = seq.grid->r();
    j["T"] = seq.grid->horizon();
    j["c_T"] = seq.c_T;
    if (seq.c_T_bar) j["c_T_bar"] = *seq.c_T_bar;
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& p : seq.partitions) {
        nlohmann::json knots = nlohmann::json::array();
        for (std::size_t i = 0; i < p.knot_count(); ++i) knots.push_back(p.knot(i));
        levels.push_back(std::move(knots));
    }
    j["levels"] = std::move(levels);
    return j;
}

PartitionSequence partition_sequence_from_json(const nlohmann::json& j, int oversampling) {
    const double r = j.at("r").get<double>();
    const double T = j.at("T").get<double>();
    const auto levels = j.at("levels");
    if (levels.empty()) throw std::invalid_argument("partition sequence: no levels");
    if (oversampling < 1) throw std::invalid_argument("partition sequence: oversampling >= 1");

    // Master grid: the finest level refined by the oversampling factor.
    const auto finest = levels.back().get<std::vector<double>>();
    std::vector<double> pts;
    std::size_t ir = 0;
    if (r > 0.0) {
        const double mesh = (finest[1] - finest[0]) / oversampling;
        const std::size_t delay =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(r / mesh)));
        for (std::size_t i = 0; i < delay; ++i)
            pts.push_back(r * static_cast<double>(i) / static_cast<double>(delay));
        ir = delay;
    }
    for (std::size_t i = 0; i + 1 < finest.size(); ++i)
        for (int k = 0; k < oversampling; ++k)
            pts.push_back(finest[i] +
                          (finest[i + 1] - finest[i]) * k / static_cast<double>(oversampling));
    pts.push_back(finest.back());
    auto grid = std::make_shared<TimeGrid>(std::move(pts), ir);

    PartitionSequence seq;
    seq.grid = grid;
    seq.c_T = j.value("c_T", 1.0);
    if (j.contains("c_T_bar")) seq.c_T_bar = j["c_T_bar"].get<double>();
    for (const auto& lv : levels)
        seq.partitions.push_back(Partition::from_times(grid, lv.get<std::vector<double>>()));
    (void)T;
    return seq;
}

} // namespace svie
