#include "svie/volterra_det.hpp"

#include <cmath>

namespace svie {

namespace {

void check_problem(const CoefficientSet& c, const GridPath& xhat, const DriverPath& h) {
    if (xhat.dim() != c.m) throw std::invalid_argument("solver: xhat dimension mismatch");
    if (h.dim() != c.d) throw std::invalid_argument("solver: driver dimension mismatch");
    if (xhat.size() != h.grid().size())
        throw std::invalid_argument("solver: xhat and driver on different grids");
}

} // namespace

GridPath solve_support_vie(const CoefficientSet& c, const GridPath& xhat, const DriverPath& h) {
    check_problem(c, xhat, h);
    const TimeGrid& g = xhat.grid();
    const std::size_t ir = g.index_of_r();
    const std::size_t n = g.size();

    GridPath state = xhat;
    const Vec x_r = xhat.at(ir);
    for (std::size_t j = ir + 1; j < n; ++j) {
        const double tj = g.point(j);
        Vec acc = x_r;
        for (std::size_t i = ir; i < j; ++i) {
            const double ti = g.point(i);
            PathView view(state, i);
            const Vec bv = c.b.eval(tj, ti, view).col(0);
            const Vec rho = correction_rho(c, tj, ti, view);
            const Vec sig_h = c.sigma.eval(tj, ti, view) * h.slope(i);
            const Vec drift = bv + (-0.5) * rho + sig_h;
            const Vec step = drift * g.dt(i);
            acc += step;
        }
        if (!acc.allFinite()) throw BlowUpError(tj);
        state.at(j) = acc;
    }
    return state;
}

GridPath solve_support_vie_mild(const CoefficientSet& c, const GridPath& xhat,
                                const DriverPath& h) {
    check_problem(c, xhat, h);
    if (!c.separable || !c.separable->dx_sigmabar || !c.separable->K_b.dt ||
        !c.separable->K_sigma.dt)
        throw std::invalid_argument(
            "solve_support_vie_mild: needs separable coefficients with time derivatives");
    const SeparableData& sep = *c.separable;
    const TimeGrid& g = xhat.grid();
    const std::size_t ir = g.index_of_r();
    const std::size_t n = g.size();
    const std::size_t m = c.m;
    const std::size_t d = c.d;

    // rho-bar through its separable factorization; the diagonal s = t uses
    // the evaluation at s as the continuous extension.
    auto rho_bar = [&](double t, double s, const PathView& x, bool time_derivative) -> Vec {
        const VerticalGradient D = sep.dx_sigmabar(t, s, x);
        const Mat inner = sep.K_sigma.value(s, s) * sep.sigmabar(s, x);
        const double outer =
            time_derivative ? sep.K_sigma.dt(t, s) : sep.K_sigma.value(t, s);
        Vec out = Vec::Zero(static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t l = 0; l < d; ++l)
                for (std::size_t jj = 0; jj < m; ++jj)
                    acc += D[jj](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                           inner(static_cast<Eigen::Index>(jj), static_cast<Eigen::Index>(l));
            out[static_cast<Eigen::Index>(k)] = outer * acc;
        }
        return out;
    };

    GridPath state = xhat;
    for (std::size_t j = ir; j + 1 < n; ++j) {
        const double tj = g.point(j);
        PathView view(state, j);
        // running value (b - rho_bar/2 + sigma h')(t_j, t_j, x)
        Vec rate = Vec(sep.K_b.value(tj, tj) * sep.bbar(tj, view)) -
                   0.5 * rho_bar(tj, tj, view, false) +
                   Vec(sep.K_sigma.value(tj, tj) * sep.sigmabar(tj, view) * h.slope(j));
        // accumulated time derivative of the kernel part
        for (std::size_t i = ir; i < j; ++i) {
            const double ti = g.point(i);
            PathView vi(state, i);
            const Vec dt_term = Vec(sep.K_b.dt(tj, ti) * sep.bbar(ti, vi)) -
                                0.5 * rho_bar(tj, ti, vi, true) +
                                Vec(sep.K_sigma.dt(tj, ti) * sep.sigmabar(ti, vi) * h.slope(i));
            rate += dt_term * g.dt(i);
        }
        const Vec next = Vec(state.at(j)) + rate * g.dt(j);
        if (!next.allFinite()) throw BlowUpError(g.point(j + 1));
        state.at(j + 1) = next;
    }
    return state;
}

namespace {

double sobolev_norm_of_difference(const GridPath& a, const GridPath& b, double p) {
    const TimeGrid& g = a.grid();
    const std::size_t ir = g.index_of_r();
    double sup = 0.0;
    for (std::size_t i = 0; i <= ir; ++i) sup = std::max(sup, (a.at(i) - b.at(i)).norm());
    double integral = 0.0;
    for (std::size_t i = ir; i < g.interval_count(); ++i) {
        const double slope =
            ((a.at(i + 1) - b.at(i + 1)) - (a.at(i) - b.at(i))).norm() / g.dt(i);
        integral += std::pow(slope, p) * g.dt(i);
    }
    return sup + std::pow(integral, 1.0 / p);
}

double sobolev_norm_of_driver_difference(const DriverPath& a, const DriverPath& b, double p) {
    const TimeGrid& g = a.grid();
    const std::size_t ir = g.index_of_r();
    double sup = 0.0;
    for (std::size_t i = 0; i <= ir; ++i)
        sup = std::max(sup, (a.value_at(i) - b.value_at(i)).norm());
    double integral = 0.0;
    for (std::size_t i = ir; i < g.interval_count(); ++i) {
        const double slope = (Vec(a.slope(i)) - Vec(b.slope(i))).norm();
        integral += std::pow(slope, p) * g.dt(i);
    }
    return sup + std::pow(integral, 1.0 / p);
}

} // namespace

FlowDiagnostics flow_map(const CoefficientSet& c, const GridPath& xhat,
                         const std::vector<DriverPath>& drivers, double p) {
    FlowDiagnostics diag;
    diag.p = p;
    diag.solutions.reserve(drivers.size());
    for (const auto& h : drivers) diag.solutions.push_back(solve_support_vie(c, xhat, h));
    for (std::size_t i = 0; i < drivers.size(); ++i) {
        for (std::size_t j = i + 1; j < drivers.size(); ++j) {
            const double den = sobolev_norm_of_driver_difference(drivers[i], drivers[j], p);
            FlowPairRatio rec{i, j, 0.0, false};
            if (den == 0.0) {
                rec.skipped = true;
            } else {
                rec.ratio =
                    sobolev_norm_of_difference(diag.solutions[i], diag.solutions[j], p) / den;
            }
            diag.lipschitz.push_back(rec);
        }
    }
    return diag;
}

std::vector<DriverPath> driver_lattice(TimeGridPtr grid, std::size_t coarse_knots,
                                       const std::vector<double>& slope_levels, std::size_t d,
                                       std::size_t cap) {
    if (coarse_knots < 1) throw std::invalid_argument("driver_lattice: coarse_knots >= 1");
    if (slope_levels.empty()) throw std::invalid_argument("driver_lattice: no slope levels");
    const std::size_t slots = coarse_knots * d;
    double count = std::pow(static_cast<double>(slope_levels.size()), static_cast<double>(slots));
    if (count > static_cast<double>(cap))
        throw std::invalid_argument("driver_lattice: combination count exceeds cap");
    const std::size_t total = static_cast<std::size_t>(count);

    const TimeGrid& g = *grid;
    const std::size_t ir = g.index_of_r();
    const double r = g.r();
    const double len = (g.horizon() - r) / static_cast<double>(coarse_knots);

    std::vector<DriverPath> out;
    out.reserve(total);
    std::vector<std::size_t> digits(slots, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<double> slopes(g.interval_count() * d, 0.0);
        for (std::size_t i = ir; i < g.interval_count(); ++i) {
            std::size_t coarse = static_cast<std::size_t>((g.point(i) - r) / len);
            coarse = std::min(coarse, coarse_knots - 1);
            for (std::size_t k = 0; k < d; ++k)
                slopes[i * d + k] = slope_levels[digits[coarse * d + k]];
        }
        out.emplace_back(grid, d, std::move(slopes), Vec::Zero(static_cast<Eigen::Index>(d)));
        // odometer increment
        for (std::size_t pos = 0; pos < slots; ++pos) {
            if (++digits[pos] < slope_levels.size()) break;
            digits[pos] = 0;
        }
    }
    return out;
}

} // namespace svie
