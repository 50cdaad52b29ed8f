#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "svie/driver.hpp"
#include "svie/funcalc.hpp"

namespace svie {

using VerticalGradientEval =
    std::function<VerticalGradient(double t, double s, const PathView& x)>;

/// Scalar kernel K(t,s) on [r,T]^2 together with its time derivative.
struct Kernel {
    std::function<double(double t, double s)> value;
    std::function<double(double t, double s)> dt;
};

/// Data of the kernel-separable family b = K_b(t,s) bbar(s,x),
/// sigma = K_sigma(t,s) sigmabar(s,x).
struct SeparableData {
    Kernel K_b;
    Kernel K_sigma;
    std::function<Vec(double s, const PathView& x)> bbar;
    std::function<Mat(double s, const PathView& x)> sigmabar;
    VerticalGradientEval dx_sigmabar; // optional analytic vertical derivative
};

/// Drift b (R^m) and diffusion sigma (R^{m x d}) with optional analytic
/// derivatives. Non-anticipativity comes from stopped-path evaluation.
struct CoefficientSet {
    std::size_t m = 1;
    std::size_t d = 1;
    NonAnticipativeFunctional b;
    NonAnticipativeFunctional sigma;
    std::optional<NonAnticipativeFunctional> dt_b;
    std::optional<NonAnticipativeFunctional> dt_sigma;
    VerticalGradientEval dx_sigma; // analytic, may be empty (falls back to FD)
    std::optional<SeparableData> separable;
    bool time_invariant = false; // b, sigma ignore the first time argument
};

/// Coefficients of the general pair of equations: drift B_under, driver term
/// B_H, Wong-Zakai block B_bar and Ito block Sigma, plus the driver h.
struct GeneralCoefficients {
    std::size_t m = 1;
    std::size_t d = 1;
    NonAnticipativeFunctional B_under; // m x 1
    NonAnticipativeFunctional B_H;     // m x d
    NonAnticipativeFunctional B_bar;   // m x d
    NonAnticipativeFunctional Sigma;   // m x d
    VerticalGradientEval dx_B_bar;     // analytic vertical derivative of B_bar
    DriverPath h;
};

/// Correction term rho_k(t,s,x) = sum_l dx sigma_{k,l}(t,s,x) sigma(s,s,x) e_l
/// for s < t, zero otherwise. Uses the analytic vertical derivative when
/// present, finite differences otherwise.
Vec correction_rho(const CoefficientSet& c, double t, double s, const PathView& x);
Vec correction_rho(const CoefficientSet& c, double t, double s, const GridPath& x);

/// R_k(t,s,x) = sum_l dx B_bar_{k,l}(t,s,x) ((1/2) B_bar + Sigma)(s,s,x) e_l
/// for s < t, zero otherwise.
Vec remainder_R(const GeneralCoefficients& g, double t, double s, const PathView& x);
Vec remainder_R(const GeneralCoefficients& g, double t, double s, const GridPath& x);

/// Build a CoefficientSet from the kernel-separable family, with analytic
/// time derivatives and (when dx_sigmabar is given) analytic vertical ones.
CoefficientSet make_kernel_separable(std::size_t m, std::size_t d, SeparableData data);

/// Named coefficient catalog:
///   "gbm"               b = 0, sigma(t,s,x) = x(s), m = d = 1
///   "additive_kernel"   b = 0, sigma(t,s,x) = exp(-(t-s)), constant in x
///   "bounded_separable" bbar = -x/(1+x^2), sigmabar = sin(x),
///                       K_b = K_sigma = exp(-(t-s))
/// "gbm" violates the boundedness the theory assumes; it is kept because
/// closed forms exist to test against. Throws on unknown names.
CoefficientSet builtin_coefficients(const std::string& name,
                                    const nlohmann::json& params = nlohmann::json::object());

/// Setup Bu = b - (1/2) rho, B_H = 0, B_bar = sigma, Sigma = 0: the limit
/// equation recovers the stochastic Volterra equation itself.
GeneralCoefficients make_support_setup(const CoefficientSet& c, DriverPath h);

/// Setup Bu = b, B_H = sigma, B_bar = -sigma, Sigma = sigma: the limit
/// equation degenerates to the deterministic support flow x_h.
GeneralCoefficients make_girsanov_setup(const CoefficientSet& c, DriverPath h);

} // namespace svie
