#include "svie/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "svie/girsanov.hpp"
#include "svie/parallel.hpp"
#include "svie/paths.hpp"

namespace svie {

double kc_constant(double alpha, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("kc_constant: need p, q > 0");
    if (!(alpha >= 0.0) || !(alpha < q / p))
        throw std::invalid_argument("kc_constant: need 0 <= alpha < q/p");
    return std::pow(2.0, p + q) * std::pow(std::pow(2.0, q / p - alpha) - 1.0, -p);
}

double w_hat_constant(double p, double q, double c_T, int d) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("w_hat_constant: need p, q > 0");
    if (d < 1) throw std::invalid_argument("w_hat_constant: need d >= 1");
    if (!(c_T > 0.0)) throw std::invalid_argument("w_hat_constant: need c_T > 0");
    const double k = p * q;
    const double moment = std::exp(std::lgamma((d + k) / 2.0) - std::lgamma(d / 2.0) +
                                   (k / 2.0) * std::log(2.0));
    return moment * std::pow(c_T, k);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MCEstimate reduce(const std::vector<double>& all, std::size_t paths, std::size_t levels,
                  std::size_t level) {
    std::vector<double> samples;
    samples.reserve(paths);
    std::size_t censored = 0;
    for (std::size_t i = 0; i < paths; ++i) {
        const double v = all[i * levels + level];
        if (std::isnan(v))
            ++censored;
        else
            samples.push_back(v);
    }
    if (samples.empty()) throw std::runtime_error("estimate: all paths censored");
    return MCEstimate::from_samples(samples, censored);
}

} // namespace

ConvergenceReport run_convergence_study(const GeneralCoefficients& g, const GridPath& xhat,
                                        const PartitionSequence& pseq, double alpha,
                                        std::size_t paths, std::uint64_t seed, int workers) {
    if (!(alpha >= 0.0) || !(alpha < 0.5))
        throw std::invalid_argument("run_convergence_study: need alpha in [0, 1/2)");
    if (paths < 100)
        throw std::invalid_argument("run_convergence_study: need at least 100 paths");
    if (pseq.partitions.empty())
        throw std::invalid_argument("run_convergence_study: empty partition sequence");
    if (pseq.grid->size() != xhat.size())
        throw std::invalid_argument("run_convergence_study: xhat not on the sequence grid");

    const std::size_t L = pseq.levels();
    std::vector<double> max_sq(paths * L, kNaN);
    std::vector<double> hoe_sq(paths * L, kNaN);

    parallel_for(paths, workers, [&](std::size_t i) {
        const auto pairs = couple(g, xhat, substream(seed, i), pseq);
        for (std::size_t n = 0; n < L; ++n) {
            if (pairs[n].censored) continue;
            const Partition& p = pseq.level(n);
            double mx = 0.0;
            for (std::size_t knot_idx : p.knot_indices()) {
                const double d =
                    (Vec(pairs[n].Y_n.at(knot_idx)) - Vec(pairs[n].Y.at(knot_idx))).norm();
                mx = std::max(mx, d);
            }
            max_sq[i * L + n] = mx * mx;
            const double h = hoelder_norm_diff(pairs[n].Y_n, pairs[n].Y, alpha);
            hoe_sq[i * L + n] = h * h;
        }
    });

    ConvergenceReport rep;
    rep.alpha = alpha;
    rep.paths = paths;
    rep.seed = seed;
    std::vector<std::pair<double, MCEstimate>> for_fit;
    for (std::size_t n = 0; n < L; ++n) {
        LevelRecord rec;
        rec.level = n;
        rec.mesh = pseq.level(n).mesh();
        rec.intervals = pseq.level(n).interval_count();
        rec.e_max_sq = reduce(max_sq, paths, L, n);
        rec.hoelder_sq = reduce(hoe_sq, paths, L, n);
        rec.ratio_to_mesh_2alpha = rec.e_max_sq.mean / std::pow(rec.mesh, 2.0 * alpha);
        for_fit.emplace_back(rec.mesh, rec.e_max_sq);
        rep.levels.push_back(rec);
    }
    // The log-log fit only makes sense when every level has a positive mean;
    // degenerate setups (all differences zero) keep the default fit of zeros.
    bool fittable = for_fit.size() >= 3;
    for (const auto& [mesh, est] : for_fit) fittable = fittable && est.mean > 0.0;
    if (fittable) rep.fit = fit_rate(for_fit);
    return rep;
}

RateFit fit_rate(const std::vector<std::pair<double, MCEstimate>>& levels,
                 std::uint64_t bootstrap_seed, std::size_t bootstrap_rounds) {
    if (levels.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 levels");
    const std::size_t n = levels.size();
    std::vector<double> x(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(levels[k].second.mean > 0.0) || !(levels[k].first > 0.0))
            throw std::invalid_argument("fit_rate: levels must have positive mesh and mean");
        x[k] = std::log(levels[k].first);
        const double rel = levels[k].second.std_error / levels[k].second.mean;
        w[k] = 1.0 / std::max(rel * rel, 1e-30); // delta-method variance of log(mean)
    }

    auto wls = [&](const std::vector<double>& y) {
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < n; ++k) {
            sw += w[k];
            sx += w[k] * x[k];
            sy += w[k] * y[k];
            sxx += w[k] * x[k] * x[k];
            sxy += w[k] * x[k] * y[k];
        }
        const double det = sw * sxx - sx * sx;
        const double slope = (sw * sxy - sx * sy) / det;
        const double intercept = (sy - slope * sx) / sw;
        return std::make_pair(slope, intercept);
    };

    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = std::log(levels[k].second.mean);
    const auto [slope, intercept] = wls(y);

    // Parametric bootstrap over the level means.
    std::mt19937_64 eng(bootstrap_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> slopes;
    slopes.reserve(bootstrap_rounds);
    std::vector<double> yb(n);
    for (std::size_t r = 0; r < bootstrap_rounds; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const double m = levels[k].second.mean + levels[k].second.std_error * normal(eng);
            yb[k] = std::log(std::max(m, 1e-3 * levels[k].second.mean));
        }
        slopes.push_back(wls(yb).first);
    }
    std::sort(slopes.begin(), slopes.end());
    const auto pick = [&](double q) {
        const std::size_t idx = static_cast<std::size_t>(q * (slopes.size() - 1));
        return slopes[idx];
    };
    return {slope, intercept, pick(0.025), pick(0.975)};
}

SupportReport run_support_diagnostic(const CoefficientSet& c, const GridPath& xhat,
                                     const PartitionSequence& pseq, double alpha, double eps,
                                     std::size_t paths, const std::vector<DriverPath>& drivers,
                                     std::uint64_t seed, int workers) {
    if (!(eps > 0.0)) throw std::invalid_argument("run_support_diagnostic: need eps > 0");
    if (paths < 2) throw std::invalid_argument("run_support_diagnostic: need at least 2 paths");
    if (pseq.grid->size() != xhat.size())
        throw std::invalid_argument("run_support_diagnostic: xhat not on the sequence grid");

    // Deterministic flow solutions for the reverse diagnostic, solved once.
    std::vector<GridPath> flow;
    flow.reserve(drivers.size());
    for (const auto& h : drivers) flow.push_back(solve_support_vie(c, xhat, h));

    const std::size_t L = pseq.levels();
    std::vector<double> exceed(paths * L, kNaN);
    std::vector<double> min_dist(paths, kNaN);

    parallel_for(paths, workers, [&](std::size_t i) {
        const BrownianPath W = sample_brownian(xhat.grid_ptr(), c.d, substream(seed, i));
        const PathSolveResult X = solve_svie(c, xhat, W);
        if (X.censored) return;
        for (std::size_t n = 0; n < L; ++n) {
            const Partition& p = pseq.level(n);
            try {
                const GridPath nw = interpolate_Ln(p, W.values);
                const GridPath x_nw =
                    solve_support_vie(c, xhat, DriverPath::from_grid_path(nw));
                const double dist = hoelder_norm_diff(x_nw, X.path, alpha);
                exceed[i * L + n] = dist >= eps ? 1.0 : 0.0;
            } catch (const BlowUpError&) {
                // stays NaN: censored at this level
            }
        }
        if (!flow.empty()) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& xh : flow)
                best = std::min(best, hoelder_norm_diff(X.path, xh, alpha));
            min_dist[i] = best;
        }
    });

    SupportReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    rep.paths = paths;
    rep.seed = seed;
    for (std::size_t n = 0; n < L; ++n) {
        SupportLevelRecord rec;
        rec.level = n;
        rec.mesh = pseq.level(n).mesh();
        rec.exceed_fraction = reduce(exceed, paths, L, n);
        rep.censored = std::max(rep.censored, rec.exceed_fraction.censored);
        rep.forward.push_back(rec);
    }
    if (!flow.empty()) {
        std::vector<double> dists;
        dists.reserve(paths);
        for (double v : min_dist)
            if (!std::isnan(v)) dists.push_back(v);
        if (dists.empty()) throw std::runtime_error("support diagnostic: all paths censored");
        rep.reverse_min_distance = MCEstimate::from_samples(dists, paths - dists.size());
        std::sort(dists.begin(), dists.end());
        rep.reverse_q50 = dists[static_cast<std::size_t>(0.50 * (dists.size() - 1))];
        rep.reverse_q90 = dists[static_cast<std::size_t>(0.90 * (dists.size() - 1))];
        rep.reverse_max = dists.back();
    }
    return rep;
}

SeminormDecomposition hoelder_seminorm_decomposition(const GridPath& x, const Partition& p,
                                                     double alpha) {
    const TimeGrid& g = x.grid();
    const std::size_t ir = g.index_of_r();
    const std::size_t n = g.size();

    auto pair_value = [&](std::size_t a, std::size_t b) {
        const double gap = g.point(b) - g.point(a);
        return (Vec(x.at(b)) - Vec(x.at(a))).norm() / std::pow(gap, alpha);
    };

    SeminormDecomposition out;
    for (std::size_t a = ir; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) out.full = std::max(out.full, pair_value(a, b));

    double within = 0.0;
    for (std::size_t j = 0; j < p.interval_count(); ++j) {
        const std::size_t lo = p.knot_indices()[j];
        const std::size_t hi = p.knot_indices()[j + 1];
        for (std::size_t a = lo; a <= hi; ++a)
            for (std::size_t b = a + 1; b <= hi; ++b) within = std::max(within, pair_value(a, b));
    }
    out.within = 2.0 * within;

    const auto& ki = p.knot_indices();
    for (std::size_t a = 0; a < ki.size(); ++a)
        for (std::size_t b = a + 1; b < ki.size(); ++b)
            out.knots = std::max(out.knots, pair_value(ki[a], ki[b]));
    return out;
}

namespace {

nlohmann::json to_json(const MCEstimate& e) {
    return {{"n", e.n_samples},     {"mean", e.mean},     {"std_error", e.std_error},
            {"ci_lo", e.ci_lo},     {"ci_hi", e.ci_hi},   {"censored", e.censored}};
}

} // namespace

nlohmann::json to_json(const ConvergenceReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& rec : r.levels)
        levels.push_back({{"level", rec.level},
                          {"mesh", rec.mesh},
                          {"intervals", rec.intervals},
                          {"e_max_sq", to_json(rec.e_max_sq)},
                          {"ratio_to_mesh_2alpha", rec.ratio_to_mesh_2alpha},
                          {"hoelder_sq", to_json(rec.hoelder_sq)}});
    return {{"alpha", r.alpha},
            {"paths", r.paths},
            {"seed", r.seed},
            {"levels", levels},
            {"fit", {{"slope", r.fit.slope},
                     {"intercept", r.fit.intercept},
                     {"band_lo", r.fit.band_lo},
                     {"band_hi", r.fit.band_hi}}}};
}

nlohmann::json to_json(const SupportReport& r) {
    nlohmann::json forward = nlohmann::json::array();
    for (const auto& rec : r.forward)
        forward.push_back({{"level", rec.level},
                           {"mesh", rec.mesh},
                           {"exceed_fraction", to_json(rec.exceed_fraction)}});
    nlohmann::json j = {{"alpha", r.alpha}, {"eps", r.eps},   {"paths", r.paths},
                        {"seed", r.seed},   {"forward", forward}, {"censored", r.censored}};
    if (r.reverse_min_distance.n_samples > 0) {
        j["reverse"] = {{"min_distance", to_json(r.reverse_min_distance)},
                        {"q50", r.reverse_q50},
                        {"q90", r.reverse_q90},
                        {"max", r.reverse_max}};
    }
    return j;
}

} // namespace svie
