#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "svie/funcalc.hpp"

using namespace svie;

namespace {

NonAnticipativeFunctional square_at_s() {
    return {1, 1, [](double, double s, const PathView& x) -> Mat {
                const double v = x.at_time(s)[0];
                return Mat::Constant(1, 1, v * v);
            }};
}

NonAnticipativeFunctional kernel_sin(double decay = 1.0) {
    return {1, 1, [decay](double t, double s, const PathView& x) -> Mat {
                return Mat::Constant(1, 1, std::exp(-decay * (t - s)) * std::sin(x.at_time(s)[0]));
            }};
}

} // namespace

TEST_CASE("vertical derivative") {
    auto g = TimeGrid::uniform(0.0, 1.0, 8);
    GridPath x = GridPath::constant(g, Vec::Constant(1, 3.0));
    const double eps = default_bump_eps(x);

    auto d1 = vertical_derivative(square_at_s(), 0.75, 0.5, x, eps);
    CHECK(d1[0](0, 0) == doctest::Approx(6.0).epsilon(1e-8));

    NonAnticipativeFunctional constant{
        1, 1, [](double, double, const PathView&) -> Mat { return Mat::Constant(1, 1, 4.0); }};
    auto d2 = vertical_derivative(constant, 0.75, 0.5, x, eps);
    CHECK(d2[0](0, 0) == 0.0);

    auto d3 = vertical_derivative(kernel_sin(), 0.75, 0.5, x, eps);
    CHECK(d3[0](0, 0) == doctest::Approx(std::exp(-0.25) * std::cos(3.0)).epsilon(1e-8));

    CHECK_THROWS_AS(vertical_derivative(square_at_s(), 0.75, 0.5, x, 0.0),
                    std::invalid_argument);
}

TEST_CASE("FD vertical derivative matches analytic on randomized inputs") {
    auto g = TimeGrid::uniform(0.0, 1.0, 16);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GridPath x = svie::testing::random_path(g, 1, seed, 2.0);
        const double s = g->point(4 + seed % 8);
        const double t = 1.0;
        const double eps = default_bump_eps(x);
        auto fd = vertical_derivative(kernel_sin(), t, s, x, eps);
        const double exact = std::exp(-(t - s)) * std::cos(x.at(g->index_of(s))[0]);
        const double tol = std::max(1e-6, 10.0 * eps * eps);
        CHECK(std::abs(fd[0](0, 0) - exact) <= tol * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("horizontal derivative") {
    auto g = TimeGrid::uniform(0.0, 1.0, 8);
    GridPath x = GridPath::constant(g, Vec::Constant(1, 1.0));

    NonAnticipativeFunctional in_s{
        1, 1, [](double, double s, const PathView&) -> Mat { return Mat::Constant(1, 1, s); }};
    CHECK(horizontal_derivative(in_s, 1.0, 0.5, x, 1e-7)(0, 0) == doctest::Approx(1.0));

    NonAnticipativeFunctional indep{1, 1, [](double, double, const PathView& v) -> Mat {
                                        return Mat::Constant(1, 1, v.at_index(0)[0]);
                                    }};
    CHECK(horizontal_derivative(indep, 1.0, 0.5, x, 1e-7)(0, 0) == doctest::Approx(0.0));

    // G(s,x) = int_0^s e^{-(s-u)} du = 1 - e^{-s}; dG/ds = e^{-s}
    NonAnticipativeFunctional kernel_integral{
        1, 1, [](double, double s, const PathView&) -> Mat {
            return Mat::Constant(1, 1, 1.0 - std::exp(-s));
        }};
    CHECK(horizontal_derivative(kernel_integral, 1.0, 0.5, x, 1e-6)(0, 0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-5));

    CHECK_THROWS_AS(horizontal_derivative(in_s, 0.5, 0.5, x, 1e-7), std::invalid_argument);
}

TEST_CASE("second vertical derivative") {
    auto g = TimeGrid::uniform(0.0, 1.0, 8);
    GridPath x = GridPath::constant(g, Vec::Constant(1, 0.7));
    const double eps = 1e-4;

    auto h1 = second_vertical_derivative(square_at_s(), 0.75, 0.5, x, eps);
    CHECK(h1[0][0](0, 0) == doctest::Approx(2.0).epsilon(1e-5));

    NonAnticipativeFunctional affine{1, 1, [](double, double s, const PathView& v) -> Mat {
                                         return Mat::Constant(1, 1, 2.0 * v.at_time(s)[0] + 1.0);
                                     }};
    auto h2 = second_vertical_derivative(affine, 0.75, 0.5, x, eps);
    CHECK(h2[0][0](0, 0) == doctest::Approx(0.0).epsilon(1e-6));

    auto h3 = second_vertical_derivative(kernel_sin(), 0.75, 0.5, x, eps);
    CHECK(h3[0][0](0, 0) ==
          doctest::Approx(-std::exp(-0.25) * std::sin(0.7)).epsilon(1e-5));
}

TEST_CASE("second derivative blocks are symmetric (Schwarz)") {
    auto g = TimeGrid::uniform(0.0, 1.0, 8);
    NonAnticipativeFunctional f{1, 1, [](double, double s, const PathView& v) -> Mat {
                                    const Vec u = v.at_time(s);
                                    return Mat::Constant(1, 1, std::sin(u[0]) * u[1] + u[0] * u[1] * u[1]);
                                }};
    GridPath x = svie::testing::random_path(g, 2, 9);
    auto h = second_vertical_derivative(f, 0.75, 0.5, x, 1e-4);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
            CHECK(h[k][l](0, 0) ==
                  doctest::Approx(h[l][k](0, 0)).epsilon(1e-5));
}

TEST_CASE("non-anticipativity: future perturbations never change evaluations") {
    auto g = TimeGrid::uniform(0.0, 1.0, 16);
    GridPath x = svie::testing::random_path(g, 1, 42);
    const double s = 0.5;
    const std::size_t si = g->index_of(s);

    GridPath y = x;
    for (std::size_t j = si + 1; j < y.size(); ++j) y.at(j) = Vec(y.at(j)) + Vec::Constant(1, 5.0);

    auto f = kernel_sin();
    CHECK(f(1.0, s, x)(0, 0) == f(1.0, s, y)(0, 0));
    const double eps = default_bump_eps(x);
    CHECK(vertical_derivative(f, 1.0, s, x, eps)[0](0, 0) ==
          doctest::Approx(vertical_derivative(f, 1.0, s, y, eps)[0](0, 0)));
}
