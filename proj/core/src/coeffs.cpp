#include "svie/coeffs.hpp"

#include <cmath>
#include <stdexcept>

namespace svie {

namespace {

Vec zero_vec(std::size_t m) { return Vec::Zero(static_cast<Eigen::Index>(m)); }

double stopped_sup(const PathView& x) {
    double m = 0.0;
    for (std::size_t i = 0; i <= x.stop_index(); ++i) m = std::max(m, x.at_index(i).norm());
    return m;
}

// Central-difference vertical gradient straight on a view.
VerticalGradient fd_vertical(const FunctionalEval& eval, double t, double s, const PathView& x) {
    const std::size_t m = x.dim();
    const std::size_t si = x.grid().index_of(s);
    const double eps = 1e-5 * (1.0 + stopped_sup(x));
    VerticalGradient grad(m);
    Vec e = zero_vec(m);
    for (std::size_t k = 0; k < m; ++k) {
        e[static_cast<Eigen::Index>(k)] = eps;
        const Mat up = eval(t, s, x.bumped(e, si));
        const Mat dn = eval(t, s, x.bumped(-e, si));
        e[static_cast<Eigen::Index>(k)] = 0.0;
        grad[k] = (up - dn) / (2.0 * eps);
        if (!grad[k].allFinite())
            throw std::runtime_error("correction term: finite-difference derivative failed");
    }
    return grad;
}

// rho-shaped contraction: sum_l sum_j D[j](k,l) * M(j,l). Both the correction
// term and the general remainder reduce to this; keeping one loop keeps the
// two algebraically paired routes on the same floating-point op sequence.
Vec contract_gradient(const VerticalGradient& D, const Mat& M, std::size_t m, std::size_t d) {
    Vec out = zero_vec(m);
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t j = 0; j < m; ++j)
                acc += D[j](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                       M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
        out[static_cast<Eigen::Index>(k)] = acc;
    }
    return out;
}

} // namespace

Vec correction_rho(const CoefficientSet& c, double t, double s, const PathView& x) {
    if (s >= t) return zero_vec(c.m);
    const Mat sig_ss = c.sigma.eval(s, s, x);
    const VerticalGradient D =
        c.dx_sigma ? c.dx_sigma(t, s, x) : fd_vertical(c.sigma.eval, t, s, x);
    return contract_gradient(D, sig_ss, c.m, c.d);
}

Vec correction_rho(const CoefficientSet& c, double t, double s, const GridPath& x) {
    PathView v(x, x.grid().index_of(s));
    return correction_rho(c, t, s, v);
}

Vec remainder_R(const GeneralCoefficients& g, double t, double s, const PathView& x) {
    if (s >= t) return zero_vec(g.m);
    const Mat M = 0.5 * g.B_bar.eval(s, s, x) + g.Sigma.eval(s, s, x);
    const VerticalGradient D =
        g.dx_B_bar ? g.dx_B_bar(t, s, x) : fd_vertical(g.B_bar.eval, t, s, x);
    return contract_gradient(D, M, g.m, g.d);
}

Vec remainder_R(const GeneralCoefficients& g, double t, double s, const GridPath& x) {
    PathView v(x, x.grid().index_of(s));
    return remainder_R(g, t, s, v);
}

CoefficientSet make_kernel_separable(std::size_t m, std::size_t d, SeparableData data) {
    CoefficientSet c;
    c.m = m;
    c.d = d;
    c.separable = data;
    c.b = {m, 1, [data](double t, double s, const PathView& x) -> Mat {
               return data.K_b.value(t, s) * data.bbar(s, x);
           }};
    c.sigma = {m, d, [data](double t, double s, const PathView& x) -> Mat {
                   return data.K_sigma.value(t, s) * data.sigmabar(s, x);
               }};
    if (data.K_b.dt)
        c.dt_b = NonAnticipativeFunctional{
            m, 1, [data](double t, double s, const PathView& x) -> Mat {
                return data.K_b.dt(t, s) * data.bbar(s, x);
            }};
    if (data.K_sigma.dt)
        c.dt_sigma = NonAnticipativeFunctional{
            m, d, [data](double t, double s, const PathView& x) -> Mat {
                return data.K_sigma.dt(t, s) * data.sigmabar(s, x);
            }};
    if (data.dx_sigmabar)
        c.dx_sigma = [data](double t, double s, const PathView& x) -> VerticalGradient {
            VerticalGradient grad = data.dx_sigmabar(t, s, x);
            const double k = data.K_sigma.value(t, s);
            for (auto& g : grad) g *= k;
            return grad;
        };
    return c;
}

CoefficientSet builtin_coefficients(const std::string& name, const nlohmann::json& params) {
    if (name == "gbm") {
        // b = 0, sigma(t,s,x) = x(s). Unbounded, kept as a closed-form oracle.
        CoefficientSet c;
        c.m = 1;
        c.d = 1;
        c.time_invariant = true;
        c.b = {1, 1, [](double, double, const PathView&) -> Mat { return Mat::Zero(1, 1); }};
        c.sigma = {1, 1, [](double, double s, const PathView& x) -> Mat {
                       Mat out(1, 1);
                       out(0, 0) = x.at_time(s)[0];
                       return out;
                   }};
        c.dt_b = NonAnticipativeFunctional{
            1, 1, [](double, double, const PathView&) -> Mat { return Mat::Zero(1, 1); }};
        c.dt_sigma = NonAnticipativeFunctional{
            1, 1, [](double, double, const PathView&) -> Mat { return Mat::Zero(1, 1); }};
        c.dx_sigma = [](double, double, const PathView&) -> VerticalGradient {
            return {Mat::Ones(1, 1)};
        };
        return c;
    }

    const double decay = params.value("decay", 1.0);
    Kernel expk{[decay](double t, double s) { return std::exp(-decay * (t - s)); },
                [decay](double t, double s) { return -decay * std::exp(-decay * (t - s)); }};
    Kernel unit{[](double, double) { return 1.0; }, [](double, double) { return 0.0; }};

    if (name == "additive_kernel") {
        SeparableData data;
        data.K_b = unit;
        data.K_sigma = expk;
        data.bbar = [](double, const PathView&) -> Vec { return Vec::Zero(1); };
        data.sigmabar = [](double, const PathView&) -> Mat { return Mat::Ones(1, 1); };
        data.dx_sigmabar = [](double, double, const PathView&) -> VerticalGradient {
            return {Mat::Zero(1, 1)};
        };
        return make_kernel_separable(1, 1, std::move(data));
    }

    if (name == "bounded_separable") {
        SeparableData data;
        data.K_b = expk;
        data.K_sigma = expk;
        data.bbar = [](double s, const PathView& x) -> Vec {
            const double v = x.at_time(s)[0];
            Vec out(1);
            out[0] = -v / (1.0 + v * v);
            return out;
        };
        data.sigmabar = [](double s, const PathView& x) -> Mat {
            Mat out(1, 1);
            out(0, 0) = std::sin(x.at_time(s)[0]);
            return out;
        };
        data.dx_sigmabar = [](double, double s, const PathView& x) -> VerticalGradient {
            Mat g(1, 1);
            g(0, 0) = std::cos(x.at_time(s)[0]);
            return {g};
        };
        return make_kernel_separable(1, 1, std::move(data));
    }

    throw std::invalid_argument("builtin_coefficients: unknown name '" + name + "'");
}

GeneralCoefficients make_support_setup(const CoefficientSet& c, DriverPath h) {
    GeneralCoefficients g{c.m,
                          c.d,
                          {},
                          {},
                          {},
                          {},
                          {},
                          std::move(h)};
    g.B_under = {c.m, 1, [c](double t, double s, const PathView& x) -> Mat {
                     const Vec b = c.b.eval(t, s, x).col(0);
                     const Vec rho = correction_rho(c, t, s, x);
                     return b + (-0.5) * rho;
                 }};
    g.B_H = {c.m, c.d,
             [m = c.m, d = c.d](double, double, const PathView&) -> Mat {
                 return Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
             }};
    g.B_bar = c.sigma;
    g.Sigma = {c.m, c.d,
               [m = c.m, d = c.d](double, double, const PathView&) -> Mat {
                   return Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
               }};
    if (c.dx_sigma) g.dx_B_bar = c.dx_sigma;
    return g;
}

GeneralCoefficients make_girsanov_setup(const CoefficientSet& c, DriverPath h) {
    GeneralCoefficients g{c.m,
                          c.d,
                          {},
                          {},
                          {},
                          {},
                          {},
                          std::move(h)};
    g.B_under = c.b;
    g.B_H = c.sigma;
    g.B_bar = {c.m, c.d, [sigma = c.sigma.eval](double t, double s, const PathView& x) -> Mat {
                   return -sigma(t, s, x);
               }};
    g.Sigma = c.sigma;
    if (c.dx_sigma)
        g.dx_B_bar = [dx = c.dx_sigma](double t, double s,
                                       const PathView& x) -> VerticalGradient {
            VerticalGradient grad = dx(t, s, x);
            for (auto& m : grad) m = -m;
            return grad;
        };
    return g;
}

} // namespace svie
