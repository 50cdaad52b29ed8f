#include "svie/volterra_sde.hpp"

#include <cmath>
#include <random>

namespace svie {

std::uint64_t substream(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 finalizer on the combined id: well-spread engine seeds even
    // for consecutive path indices.
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

BrownianPath sample_brownian(TimeGridPtr grid, std::size_t d, std::uint64_t stream) {
    std::mt19937_64 eng(stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    GridPath values(grid, d);
    const std::size_t ir = grid->index_of_r();
    Vec w = Vec::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i <= ir; ++i) values.at(i) = w;
    for (std::size_t i = ir; i + 1 < grid->size(); ++i) {
        const double sd = std::sqrt(grid->dt(i));
        for (std::size_t k = 0; k < d; ++k)
            w[static_cast<Eigen::Index>(k)] += sd * normal(eng);
        values.at(i + 1) = w;
    }
    return {std::move(grid), d, std::move(values), stream};
}

namespace {

bool bad_state(const Vec& v) { return !v.allFinite() || v.norm() > kBlowUpThreshold; }

// Fill the tail of a censored path with its last good value so that every
// returned path stays finite.
void freeze_tail(GridPath& state, std::size_t from) {
    for (std::size_t j = from + 1; j < state.size(); ++j) state.at(j) = state.at(from);
}

} // namespace

PathSolveResult solve_svie(const CoefficientSet& c, const GridPath& xhat, const BrownianPath& W) {
    if (xhat.dim() != c.m) throw std::invalid_argument("solve_svie: xhat dimension mismatch");
    if (W.dim != c.d) throw std::invalid_argument("solve_svie: driver dimension mismatch");
    if (xhat.size() != W.values.size())
        throw std::invalid_argument("solve_svie: xhat and W on different grids");
    const TimeGrid& g = xhat.grid();
    const std::size_t ir = g.index_of_r();
    const std::size_t n = g.size();

    PathSolveResult res{xhat, false, 0.0};
    GridPath& state = res.path;

    if (c.time_invariant) {
        // b(t,s,x) and sigma(t,s,x) do not depend on t: the double sum
        // collapses to a running recursion. Increment order matches the
        // O(N^2) route term by term.
        Vec acc = xhat.at(ir);
        for (std::size_t i = ir; i + 1 < n; ++i) {
            const double ti = g.point(i);
            PathView view(state, i);
            const Vec bv = c.b.eval(g.point(i + 1), ti, view).col(0);
            const Mat sig = c.sigma.eval(g.point(i + 1), ti, view);
            const Vec step = bv * g.dt(i) + Vec(sig * W.increment(i));
            acc += step;
            if (bad_state(acc)) {
                res.censored = true;
                res.first_bad_time = g.point(i + 1);
                freeze_tail(state, i);
                return res;
            }
            state.at(i + 1) = acc;
        }
        return res;
    }

    const Vec x_r = xhat.at(ir);
    for (std::size_t j = ir + 1; j < n; ++j) {
        const double tj = g.point(j);
        Vec acc = x_r;
        for (std::size_t i = ir; i < j; ++i) {
            const double ti = g.point(i);
            PathView view(state, i);
            const Vec bv = c.b.eval(tj, ti, view).col(0);
            const Mat sig = c.sigma.eval(tj, ti, view);
            const Vec step = bv * g.dt(i) + Vec(sig * W.increment(i));
            acc += step;
        }
        if (bad_state(acc)) {
            res.censored = true;
            res.first_bad_time = tj;
            freeze_tail(state, j - 1);
            return res;
        }
        state.at(j) = acc;
    }
    return res;
}

namespace {

void check_general(const GeneralCoefficients& g, const GridPath& xhat, const BrownianPath& W) {
    if (xhat.dim() != g.m) throw std::invalid_argument("solver: xhat dimension mismatch");
    if (W.dim != g.d) throw std::invalid_argument("solver: Brownian dimension mismatch");
    if (xhat.size() != W.values.size())
        throw std::invalid_argument("solver: xhat and W on different grids");
    if (g.h.dim() != g.d || g.h.grid().size() != xhat.size())
        throw std::invalid_argument("solver: driver h incompatible with the grid");
}

} // namespace

PathSolveResult solve_sequence_vie(const GeneralCoefficients& g, const GridPath& xhat,
                                   const BrownianPath& W, const Partition& p) {
    check_general(g, xhat, W);
    if (p.grid().size() != xhat.size())
        throw std::invalid_argument("solve_sequence_vie: partition on a different grid");
    const TimeGrid& grid = xhat.grid();
    const std::size_t ir = grid.index_of_r();
    const std::size_t n = grid.size();

    // Interpolated-noise slope nW' is constant on each master interval; it
    // only reads W at partition knots strictly before the interval.
    std::vector<Vec> nw(grid.interval_count(), Vec::Zero(static_cast<Eigen::Index>(g.d)));
    for (std::size_t i = ir; i + 1 < n; ++i) {
        const std::size_t k = p.knot_interval_of_master(i);
        if (k == 0) continue; // zero up to the first knot past r
        const std::size_t a = p.knot_indices()[k - 1];
        const std::size_t b = p.knot_indices()[k];
        const double width = p.knot(k + 1) - p.knot(k);
        nw[i] = (Vec(W.values.at(b)) - Vec(W.values.at(a))) / width;
    }

    PathSolveResult res{xhat, false, 0.0};
    GridPath& state = res.path;
    const Vec x_r = xhat.at(ir);
    for (std::size_t j = ir + 1; j < n; ++j) {
        const double tj = grid.point(j);
        Vec acc = x_r;
        for (std::size_t i = ir; i < j; ++i) {
            const double ti = grid.point(i);
            PathView view(state, i);
            const Vec bu = g.B_under.eval(tj, ti, view).col(0);
            const Vec bh = Vec(g.B_H.eval(tj, ti, view) * g.h.slope(i));
            const Vec bn = Vec(g.B_bar.eval(tj, ti, view) * nw[i]);
            const Vec drift = bu + bh + bn;
            const Vec step = drift * grid.dt(i) + Vec(g.Sigma.eval(tj, ti, view) * W.increment(i));
            acc += step;
        }
        if (bad_state(acc)) {
            res.censored = true;
            res.first_bad_time = tj;
            freeze_tail(state, j - 1);
            return res;
        }
        state.at(j) = acc;
    }
    return res;
}

PathSolveResult solve_general_vie(const GeneralCoefficients& g, const GridPath& xhat,
                                  const BrownianPath& W) {
    check_general(g, xhat, W);
    const TimeGrid& grid = xhat.grid();
    const std::size_t ir = grid.index_of_r();
    const std::size_t n = grid.size();

    PathSolveResult res{xhat, false, 0.0};
    GridPath& state = res.path;
    const Vec x_r = xhat.at(ir);
    for (std::size_t j = ir + 1; j < n; ++j) {
        const double tj = grid.point(j);
        Vec acc = x_r;
        for (std::size_t i = ir; i < j; ++i) {
            const double ti = grid.point(i);
            PathView view(state, i);
            const Vec bu = g.B_under.eval(tj, ti, view).col(0);
            const Vec rem = remainder_R(g, tj, ti, view);
            const Vec bh = Vec(g.B_H.eval(tj, ti, view) * g.h.slope(i));
            const Vec drift = bu + rem + bh;
            const Mat diff = g.B_bar.eval(tj, ti, view) + g.Sigma.eval(tj, ti, view);
            const Vec step = drift * grid.dt(i) + Vec(diff * W.increment(i));
            acc += step;
        }
        if (bad_state(acc)) {
            res.censored = true;
            res.first_bad_time = tj;
            freeze_tail(state, j - 1);
            return res;
        }
        state.at(j) = acc;
    }
    return res;
}

std::vector<CoupledSolutionPair> couple(const GeneralCoefficients& g, const GridPath& xhat,
                                        std::uint64_t stream, const PartitionSequence& pseq) {
    const BrownianPath W = sample_brownian(xhat.grid_ptr(), g.d, stream);
    const PathSolveResult limit = solve_general_vie(g, xhat, W);
    std::vector<CoupledSolutionPair> out;
    out.reserve(pseq.levels());
    for (std::size_t n = 0; n < pseq.levels(); ++n) {
        PathSolveResult seq = solve_sequence_vie(g, xhat, W, pseq.level(n));
        out.push_back({std::move(seq.path), limit.path, n, seq.censored || limit.censored});
    }
    return out;
}

} // namespace svie
