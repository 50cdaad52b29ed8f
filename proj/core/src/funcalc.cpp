#include "svie/funcalc.hpp"

#include <cmath>
#include <stdexcept>

namespace svie {

namespace {

void require_finite(const Mat& m, const char* where) {
    if (!m.allFinite()) throw std::runtime_error(std::string(where) + ": non-finite evaluation");
}

} // namespace

double default_bump_eps(const GridPath& x) { return 1e-5 * (1.0 + sup_norm(x)); }

VerticalGradient vertical_derivative(const NonAnticipativeFunctional& F, double t, double s,
                                     const GridPath& x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("vertical_derivative: eps must be positive");
    const std::size_t m = x.dim();
    const std::size_t si = x.grid().index_of(s);
    PathView base(x, si);
    VerticalGradient grad(m);
    Vec e = Vec::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
        e[static_cast<Eigen::Index>(k)] = eps;
        const Mat up = F.eval(t, s, base.bumped(e, si));
        const Mat dn = F.eval(t, s, base.bumped(-e, si));
        e[static_cast<Eigen::Index>(k)] = 0.0;
        grad[k] = (up - dn) / (2.0 * eps);
        require_finite(grad[k], "vertical_derivative");
    }
    return grad;
}

Mat horizontal_derivative(const NonAnticipativeFunctional& F, double t, double s,
                          const GridPath& x, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("horizontal_derivative: eps must be positive");
    if (!(s + eps < t))
        throw std::invalid_argument("horizontal_derivative: need s + eps < t");
    PathView stopped(x, x.grid().index_of(s));
    const Mat f0 = F.eval(t, s, stopped);
    const Mat f1 = F.eval(t, s + eps, stopped);
    Mat d = (f1 - f0) / eps;
    require_finite(d, "horizontal_derivative");
    return d;
}

VerticalHessian second_vertical_derivative(const NonAnticipativeFunctional& F, double t, double s,
                                           const GridPath& x, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("second_vertical_derivative: eps must be positive");
    const std::size_t m = x.dim();
    const std::size_t si = x.grid().index_of(s);
    PathView base(x, si);
    VerticalHessian hess(m, std::vector<Mat>(m));
    Vec e = Vec::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            e.setZero();
            e[static_cast<Eigen::Index>(k)] += eps;
            e[static_cast<Eigen::Index>(l)] += eps;
            const Mat fpp = F.eval(t, s, base.bumped(e, si));
            e.setZero();
            e[static_cast<Eigen::Index>(k)] += eps;
            e[static_cast<Eigen::Index>(l)] -= eps;
            const Mat fpm = F.eval(t, s, base.bumped(e, si));
            e.setZero();
            e[static_cast<Eigen::Index>(k)] -= eps;
            e[static_cast<Eigen::Index>(l)] += eps;
            const Mat fmp = F.eval(t, s, base.bumped(e, si));
            e.setZero();
            e[static_cast<Eigen::Index>(k)] -= eps;
            e[static_cast<Eigen::Index>(l)] -= eps;
            const Mat fmm = F.eval(t, s, base.bumped(e, si));
            hess[k][l] = (fpp - fpm - fmp + fmm) / (4.0 * eps * eps);
            require_finite(hess[k][l], "second_vertical_derivative");
        }
    }
    return hess;
}

} // namespace svie
