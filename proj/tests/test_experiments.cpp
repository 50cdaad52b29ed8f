#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "svie/experiments.hpp"

using namespace svie;

TEST_CASE("kc constant") {
    // alpha = 0, p = 2, q = 1: 2^3 (2^{1/2} - 1)^{-2}
    const double expect = 8.0 / std::pow(std::sqrt(2.0) - 1.0, 2.0);
    CHECK(kc_constant(0.0, 2.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));

    // increasing in alpha with a pole at q/p
    double prev = kc_constant(0.0, 2.0, 1.0);
    for (double a : {0.1, 0.2, 0.3, 0.4, 0.45}) {
        const double v = kc_constant(a, 2.0, 1.0);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(kc_constant(0.5, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kc_constant(-0.1, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("gaussian moment constant") {
    // E|Z|^2 = d, E|Z|^4 = d(d + 2) for Z ~ N(0, I_d)
    CHECK(w_hat_constant(2.0, 1.0, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w_hat_constant(2.0, 2.0, 1.0, 1) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(w_hat_constant(2.0, 1.0, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w_hat_constant(2.0, 2.0, 1.0, 2) == doctest::Approx(8.0).epsilon(1e-12));
    // c_T enters with power pq
    CHECK(w_hat_constant(2.0, 1.0, 3.0, 1) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("rate fit") {
    auto level = [](double mesh, double mean, double se) {
        MCEstimate e;
        e.n_samples = 1000;
        e.mean = mean;
        e.std_error = se;
        return std::make_pair(mesh, e);
    };

    SUBCASE("recovers an exact power law") {
        std::vector<std::pair<double, MCEstimate>> lv;
        for (double m : {0.5, 0.25, 0.125, 0.0625})
            lv.push_back(level(m, 3.0 * m, 1e-6 * m));
        auto fit = fit_rate(lv);
        CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-5));
        CHECK(fit.band_lo <= 1.0);
        CHECK(fit.band_hi >= 1.0);
        CHECK(fit.band_hi - fit.band_lo < 0.01);
    }

    SUBCASE("square-root decay with noise lands near one half") {
        std::mt19937_64 eng(5);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<std::pair<double, MCEstimate>> lv;
        for (double m : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
            const double mean = std::sqrt(m) * (1.0 + 0.02 * gauss(eng));
            lv.push_back(level(m, mean, 0.02 * std::sqrt(m)));
        }
        auto fit = fit_rate(lv);
        CHECK(fit.slope >= 0.4);
        CHECK(fit.slope <= 0.6);
        CHECK(fit.band_lo < fit.band_hi);
    }

    SUBCASE("flat levels give a near-zero slope") {
        std::vector<std::pair<double, MCEstimate>> lv;
        for (double m : {0.5, 0.25, 0.125}) lv.push_back(level(m, 2.0, 1e-8));
        auto fit = fit_rate(lv);
        CHECK(std::abs(fit.slope) < 1e-6);
    }

    SUBCASE("needs at least three levels") {
        std::vector<std::pair<double, MCEstimate>> lv{level(0.5, 1.0, 0.1),
                                                      level(0.25, 0.5, 0.05)};
        CHECK_THROWS_AS(fit_rate(lv), std::invalid_argument);
    }
}

TEST_CASE("convergence study") {
    auto bnd = builtin_coefficients("bounded_separable");
    auto pseq = make_dyadic_sequence(0.0, 1.0, 3, 2, 4);
    GridPath xhat = GridPath::constant(pseq.grid, Vec::Constant(1, 0.6));
    GeneralCoefficients sup = make_support_setup(bnd, DriverPath::zero(pseq.grid, 1));

    SUBCASE("rejects tiny sample sizes") {
        CHECK_THROWS_AS(run_convergence_study(sup, xhat, pseq, 0.25, 50, 1),
                        std::invalid_argument);
    }

    SUBCASE("vanishing diffusion-approximation slot gives zero differences") {
        GeneralCoefficients g = sup;
        g.B_bar = {1, 1,
                   [](double, double, const PathView&) -> Mat { return Mat::Zero(1, 1); }};
        g.Sigma = bnd.sigma;
        g.dx_B_bar = [](double, double, const PathView&) -> VerticalGradient {
            return {Mat::Zero(1, 1)};
        };
        auto rep = run_convergence_study(g, xhat, pseq, 0.25, 100, 1);
        REQUIRE(rep.levels.size() == 3);
        for (const auto& lv : rep.levels) {
            CHECK(lv.e_max_sq.mean == 0.0);
            CHECK(lv.hoelder_sq.mean == 0.0);
        }
    }

    SUBCASE("report structure on a small run") {
        auto rep = run_convergence_study(sup, xhat, pseq, 0.25, 120, 3);
        CHECK(rep.paths == 120);
        CHECK(rep.alpha == 0.25);
        REQUIRE(rep.levels.size() == 3);
        for (std::size_t n = 0; n < 3; ++n) {
            CHECK(rep.levels[n].intervals == (2u << n));
            CHECK(rep.levels[n].e_max_sq.mean > 0.0);
            CHECK(rep.levels[n].hoelder_sq.mean >= rep.levels[n].e_max_sq.mean * 0.999);
            CHECK(std::isfinite(rep.levels[n].ratio_to_mesh_2alpha));
            if (n > 0) CHECK(rep.levels[n].mesh < rep.levels[n - 1].mesh);
        }
        CHECK(std::isfinite(rep.fit.slope));

        // deterministic for a fixed seed
        auto rep2 = run_convergence_study(sup, xhat, pseq, 0.25, 120, 3);
        CHECK(to_json(rep).dump() == to_json(rep2).dump());
    }
}

TEST_CASE("support diagnostic on a tiny run") {
    auto bnd = builtin_coefficients("bounded_separable");
    auto pseq = make_dyadic_sequence(0.0, 1.0, 2, 2, 4);
    GridPath xhat = GridPath::constant(pseq.grid, Vec::Constant(1, 0.5));
    std::vector<DriverPath> drivers = driver_lattice(pseq.grid, 2, {-1.0, 0.0, 1.0}, 1);

    auto rep = run_support_diagnostic(bnd, xhat, pseq, 0.25, 0.5, 60, drivers, 5);
    CHECK(rep.paths == 60);
    REQUIRE(rep.forward.size() == 2);
    for (const auto& lv : rep.forward) {
        CHECK(lv.exceed_fraction.mean >= 0.0);
        CHECK(lv.exceed_fraction.mean <= 1.0);
    }
    CHECK(rep.forward[1].mesh < rep.forward[0].mesh);
    CHECK(rep.reverse_min_distance.n_samples == 60 - rep.censored);
    CHECK(rep.reverse_q50 <= rep.reverse_q90);
    CHECK(rep.reverse_q90 <= rep.reverse_max);

    // no drivers: the reverse block stays empty
    auto fwd_only = run_support_diagnostic(bnd, xhat, pseq, 0.25, 0.5, 60, {}, 5);
    CHECK(fwd_only.reverse_min_distance.n_samples == 0);
    CHECK(fwd_only.reverse_max == 0.0);
}

TEST_CASE("seminorm decomposition") {
    auto g = TimeGrid::uniform(0.0, 1.0, 32);
    Partition p = Partition::from_times(g, {0.0, 0.25, 0.5, 0.75, 1.0});

    SUBCASE("constant path decomposes to zero") {
        GridPath c = GridPath::constant(g, Vec::Constant(1, 4.0));
        auto d = hoelder_seminorm_decomposition(c, p, 0.25);
        CHECK(d.full == 0.0);
        CHECK(d.within == 0.0);
        CHECK(d.knots == 0.0);
    }

    SUBCASE("the decomposition bounds the full seminorm") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            GridPath x = svie::testing::random_path(g, 1, seed);
            auto d = hoelder_seminorm_decomposition(x, p, 0.3);
            CHECK(d.full <= d.within + d.knots + 1e-12);
            CHECK(d.full >= std::max(d.knots, 0.5 * d.within) - 1e-12);
        }
    }
}
