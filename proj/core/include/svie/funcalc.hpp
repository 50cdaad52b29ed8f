#pragma once

#include <functional>
#include <vector>

#include "svie/paths.hpp"
#include "svie/types.hpp"

namespace svie {

using FunctionalEval = std::function<Mat(double t, double s, const PathView& x)>;

/// A non-anticipative functional F(t,s,x) = F(t,s,x^s). Evaluation through
/// operator() stops the path at s before calling the user evaluator, so the
/// result cannot depend on values past s.
struct NonAnticipativeFunctional {
    std::size_t rows = 0;
    std::size_t cols = 0;
    FunctionalEval eval;

    bool valid() const { return static_cast<bool>(eval); }

    Mat operator()(double t, double s, const GridPath& x) const {
        PathView v(x, x.grid().index_of(s));
        return eval(t, s, v);
    }
    Mat operator()(double t, double s, const PathView& x) const { return eval(t, s, x); }
};

/// Gradient of a matrix-valued functional with respect to the m bump
/// directions: element j is the rows x cols matrix of d F / d x_j.
using VerticalGradient = std::vector<Mat>;
/// Hessian blocks: hess[j][l](k,c) = d^2 F_{k,c} / d x_j d x_l.
using VerticalHessian = std::vector<std::vector<Mat>>;

/// eps = 1e-5 * (1 + sup_norm(x)); relative scaling for the bump size.
double default_bump_eps(const GridPath& x);

/// Central finite difference of h -> F(t, s, x + h e_k 1_{[s,T]}), one bump
/// direction per path coordinate. Requires s < t.
VerticalGradient vertical_derivative(const NonAnticipativeFunctional& F, double t, double s,
                                     const GridPath& x, double eps);

/// One-sided difference of h -> F(t, s + h, x^s) at 0 (the horizontal
/// derivative is one-sided by definition).
Mat horizontal_derivative(const NonAnticipativeFunctional& F, double t, double s,
                          const GridPath& x, double eps);

/// Nested central differences for the second vertical derivative.
VerticalHessian second_vertical_derivative(const NonAnticipativeFunctional& F, double t, double s,
                                           const GridPath& x, double eps);

} // namespace svie
