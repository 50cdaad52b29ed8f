#include "config.hpp"

#include <fstream>
#include <stdexcept>

#include "svie/volterra_det.hpp"

namespace svie::cli {

namespace {

const std::vector<std::string> kSlotTokens{"b", "sigma", "-sigma", "zero"};

void check_token(const std::string& slot, const std::string& v) {
    for (const auto& t : kSlotTokens)
        if (v == t) return;
    throw std::invalid_argument("config: setup slot " + slot + " has unknown value '" + v + "'");
}

} // namespace

void RunConfig::validate() const {
    builtin_coefficients(coefficients, coefficient_params); // throws on unknown names
    if (!(grid.T > grid.r) || grid.r < 0.0)
        throw std::invalid_argument("config: need 0 <= r < T");
    if (grid.base_intervals < 1 || grid.levels < 1 || grid.oversampling < 1)
        throw std::invalid_argument("config: grid counts must be positive");
    if (setup != "support" && setup != "girsanov" && setup != "custom")
        throw std::invalid_argument("config: setup must be support, girsanov or custom");
    if (setup == "custom") {
        check_token("B_under", custom.B_under);
        check_token("B_H", custom.B_H);
        check_token("B_bar", custom.B_bar);
        check_token("Sigma", custom.Sigma);
        if (custom.B_under != "b" && custom.B_under != "zero")
            throw std::invalid_argument("config: B_under must be b or zero");
    }
    if (!(alpha >= 0.0) || alpha >= 0.5)
        throw std::invalid_argument("config: need alpha in [0, 1/2)");
    if (!(p >= 1.0)) throw std::invalid_argument("config: need p >= 1");
    if (paths < 1) throw std::invalid_argument("config: need at least one path");
    if (!(eps > 0.0)) throw std::invalid_argument("config: need eps > 0");
    if (driver.kind != "zero" && driver.kind != "constant_slope" && driver.kind != "lattice")
        throw std::invalid_argument("config: driver kind must be zero, constant_slope or lattice");
    if (driver.kind == "lattice" && (driver.coarse_knots < 1 || driver.slope_levels.empty()))
        throw std::invalid_argument("config: lattice driver needs knots and slope levels");
    if (reverse && driver.kind != "lattice")
        throw std::invalid_argument("config: reverse diagnostic needs a lattice driver family");
    if (xhat.empty() || xhat.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("config: xhat dimension out of range");
    if (format != "json" && format != "csv")
        throw std::invalid_argument("config: format must be json or csv");
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("coefficients")) {
        const auto& co = j.at("coefficients");
        c.coefficients = co.value("name", c.coefficients);
        if (co.contains("params")) c.coefficient_params = co.at("params");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid.r = g.value("r", c.grid.r);
        c.grid.T = g.value("T", c.grid.T);
        c.grid.base_intervals = g.value("base_intervals", c.grid.base_intervals);
        c.grid.levels = g.value("levels", c.grid.levels);
        c.grid.oversampling = g.value("oversampling", c.grid.oversampling);
    }
    c.setup = j.value("setup", c.setup);
    if (j.contains("custom")) {
        const auto& s = j.at("custom");
        c.custom.B_under = s.value("B_under", c.custom.B_under);
        c.custom.B_H = s.value("B_H", c.custom.B_H);
        c.custom.B_bar = s.value("B_bar", c.custom.B_bar);
        c.custom.Sigma = s.value("Sigma", c.custom.Sigma);
    }
    c.alpha = j.value("alpha", c.alpha);
    c.p = j.value("p", c.p);
    c.paths = j.value("paths", c.paths);
    c.seed = j.value("seed", c.seed);
    if (j.contains("driver")) {
        const auto& d = j.at("driver");
        c.driver.kind = d.value("kind", c.driver.kind);
        c.driver.slope = d.value("slope", c.driver.slope);
        c.driver.coarse_knots = d.value("coarse_knots", c.driver.coarse_knots);
        c.driver.slope_levels = d.value("slope_levels", c.driver.slope_levels);
    }
    c.xhat = j.value("xhat", c.xhat);
    c.eps = j.value("eps", c.eps);
    c.reverse = j.value("reverse", c.reverse);
    c.dump_paths = j.value("dump_paths", c.dump_paths);
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
    c.workers = j.value("workers", c.workers);
    c.validate();
    return c;
}

nlohmann::json to_json(const RunConfig& c) {
    return {{"coefficients", {{"name", c.coefficients}, {"params", c.coefficient_params}}},
            {"grid",
             {{"r", c.grid.r},
              {"T", c.grid.T},
              {"base_intervals", c.grid.base_intervals},
              {"levels", c.grid.levels},
              {"oversampling", c.grid.oversampling}}},
            {"setup", c.setup},
            {"custom",
             {{"B_under", c.custom.B_under},
              {"B_H", c.custom.B_H},
              {"B_bar", c.custom.B_bar},
              {"Sigma", c.custom.Sigma}}},
            {"alpha", c.alpha},
            {"p", c.p},
            {"paths", c.paths},
            {"seed", c.seed},
            {"driver",
             {{"kind", c.driver.kind},
              {"slope", c.driver.slope},
              {"coarse_knots", c.driver.coarse_knots},
              {"slope_levels", c.driver.slope_levels}}},
            {"xhat", c.xhat},
            {"eps", c.eps},
            {"reverse", c.reverse},
            {"dump_paths", c.dump_paths},
            {"out", c.out},
            {"format", c.format},
            {"workers", c.workers}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: parse error in '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

PartitionSequence make_sequence(const RunConfig& c) {
    return make_dyadic_sequence(c.grid.r, c.grid.T, c.grid.levels, c.grid.base_intervals,
                                c.grid.oversampling);
}

GridPath make_xhat(const RunConfig& c, TimeGridPtr grid) {
    Vec v(static_cast<Eigen::Index>(c.xhat.size()));
    for (std::size_t k = 0; k < c.xhat.size(); ++k) v[static_cast<Eigen::Index>(k)] = c.xhat[k];
    return GridPath::constant(std::move(grid), v);
}

std::vector<DriverPath> make_drivers(const RunConfig& c, TimeGridPtr grid, std::size_t d) {
    if (c.driver.kind == "zero") return {DriverPath::zero(std::move(grid), d)};
    if (c.driver.kind == "constant_slope") {
        if (c.driver.slope.size() != d)
            throw std::invalid_argument("config: constant_slope driver dimension mismatch");
        Vec s(static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < d; ++k) s[static_cast<Eigen::Index>(k)] = c.driver.slope[k];
        return {DriverPath::constant_slope(std::move(grid), s)};
    }
    return driver_lattice(std::move(grid), static_cast<std::size_t>(c.driver.coarse_knots),
                          c.driver.slope_levels, d);
}

namespace {

NonAnticipativeFunctional slot_functional(const CoefficientSet& c, const std::string& token,
                                          std::size_t rows, std::size_t cols) {
    if (token == "b") return c.b;
    if (token == "sigma") return c.sigma;
    if (token == "-sigma")
        return {c.m, c.d, [f = c.sigma.eval](double t, double s, const PathView& x) -> Mat {
                    return -f(t, s, x);
                }};
    return {rows, cols, [rows, cols](double, double, const PathView&) -> Mat {
                return Mat::Zero(static_cast<Eigen::Index>(rows),
                                 static_cast<Eigen::Index>(cols));
            }};
}

} // namespace

GeneralCoefficients make_setup(const RunConfig& c, const CoefficientSet& coeffs, DriverPath h) {
    if (c.setup == "support") return make_support_setup(coeffs, std::move(h));
    if (c.setup == "girsanov") return make_girsanov_setup(coeffs, std::move(h));

    GeneralCoefficients g{coeffs.m, coeffs.d, {}, {}, {}, {}, {}, std::move(h)};
    g.B_under = slot_functional(coeffs, c.custom.B_under, coeffs.m, 1);
    g.B_H = slot_functional(coeffs, c.custom.B_H, coeffs.m, coeffs.d);
    g.B_bar = slot_functional(coeffs, c.custom.B_bar, coeffs.m, coeffs.d);
    g.Sigma = slot_functional(coeffs, c.custom.Sigma, coeffs.m, coeffs.d);
    if (coeffs.dx_sigma) {
        if (c.custom.B_bar == "sigma") {
            g.dx_B_bar = coeffs.dx_sigma;
        } else if (c.custom.B_bar == "-sigma") {
            g.dx_B_bar = [dx = coeffs.dx_sigma](double t, double s,
                                                const PathView& x) -> VerticalGradient {
                VerticalGradient grad = dx(t, s, x);
                for (auto& m : grad) m = -m;
                return grad;
            };
        }
    }
    if (c.custom.B_bar == "zero" || c.custom.B_bar == "b")
        g.dx_B_bar = [m = coeffs.m, d = coeffs.d](double, double,
                                                  const PathView&) -> VerticalGradient {
            return VerticalGradient(m, Mat::Zero(static_cast<Eigen::Index>(m),
                                                 static_cast<Eigen::Index>(d)));
        };
    return g;
}

} // namespace svie::cli
