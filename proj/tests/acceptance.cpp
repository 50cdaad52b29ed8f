// End-to-end acceptance gate: ten pinned checks, one pass/fail line each.
// Exits nonzero when any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "svie/experiments.hpp"
#include "svie/girsanov.hpp"
#include "svie/volterra_det.hpp"
#include "svie/volterra_sde.hpp"

using namespace svie;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void require(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        g_notes.push_back(what);
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const std::string& name) {
    if (g_notes.empty()) {
        std::printf("criterion %2d PASS  %s\n", id, name.c_str());
    } else {
        std::printf("criterion %2d FAIL  %s\n", id, name.c_str());
        for (const auto& n : g_notes) std::printf("              - %s\n", n.c_str());
    }
    g_notes.clear();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("svie_acceptance_" + tag);
    fs::remove_all(p);
    return p;
}

BrownianPath restrict_to(const BrownianPath& fine, TimeGridPtr coarse) {
    const std::size_t stride = (fine.grid->size() - 1) / (coarse->size() - 1);
    GridPath values(coarse, fine.dim);
    for (std::size_t i = 0; i < coarse->size(); ++i)
        values.at(i) = fine.values.at(i * stride);
    return {std::move(coarse), fine.dim, std::move(values), fine.stream};
}

// 1. Deterministic flow oracle: gbm with h(t) = t gives x_h(1) = e^{1/2}.
void criterion_flow_oracle() {
    Timer timer;
    const fs::path out = scratch("flow");
    cli::RunConfig c;
    c.coefficients = "gbm";
    c.grid = {0.0, 1.0, 1024, 1, 1};
    c.driver.kind = "constant_slope";
    c.driver.slope = {1.0};
    c.out = out.string();
    require(cli::cmd_flow(c) == cli::kExitOk, "flow command failed");

    const auto j = nlohmann::json::parse(slurp(out / "flow_summary.json"));
    const double got = j["terminal_values"][0][0].get<double>();
    const double expect = std::exp(0.5);
    const double rel = std::abs(got - expect) / expect;
    require(rel <= 2.0 / 1024.0, "relative error " + std::to_string(rel) + " above 2*mesh");
    require(timer.seconds() < 5.0, "runtime above 5 s");
    fs::remove_all(out);
    report(1, "gbm flow terminal value within 2*mesh of exp(1/2)");
}

// 2. Strong error of the stochastic solver halves per dyadic refinement.
void criterion_strong_order() {
    Timer timer;
    auto gbm = builtin_coefficients("gbm");
    auto fine = TimeGrid::uniform(0.0, 1.0, 512);
    std::vector<TimeGridPtr> grids{TimeGrid::uniform(0.0, 1.0, 64),
                                   TimeGrid::uniform(0.0, 1.0, 128),
                                   TimeGrid::uniform(0.0, 1.0, 256)};
    const std::size_t paths = 10000;
    double sq[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < paths; ++i) {
        auto W = sample_brownian(fine, 1, substream(1001, i));
        const double exact = std::exp(W.values.at(512)[0] - 0.5);
        for (int k = 0; k < 3; ++k) {
            auto Wk = restrict_to(W, grids[k]);
            GridPath xhat = GridPath::constant(grids[k], Vec::Ones(1));
            auto res = solve_svie(gbm, xhat, Wk);
            const double e = res.path.at(grids[k]->size() - 1)[0] - exact;
            sq[k] += e * e;
        }
    }
    for (double& v : sq) v = std::sqrt(v / static_cast<double>(paths));
    for (int k = 0; k < 2; ++k) {
        const double factor = sq[k] / sq[k + 1];
        require(factor >= 1.2 && factor <= 1.7,
                "RMS factor " + std::to_string(factor) + " outside [1.2, 1.7]");
    }
    require(timer.seconds() < 120.0, "runtime above 2 min");
    report(2, "gbm strong RMS error halves like sqrt(mesh) over 3 levels");
}

// 3. Ito isometry for the additive kernel: Var X(1) = (1 - e^{-2}) / 2.
void criterion_isometry() {
    Timer timer;
    auto add = builtin_coefficients("additive_kernel");
    auto g = TimeGrid::uniform(0.0, 1.0, 1024);
    const std::size_t N = g->interval_count();
    std::vector<double> kernel(N);
    for (std::size_t i = 0; i < N; ++i) kernel[i] = std::exp(-(1.0 - g->point(i)));

    GridPath xhat = GridPath::constant(g, Vec::Zero(1));
    const std::size_t paths = 100000;
    std::vector<double> x(paths);
    for (std::size_t i = 0; i < paths; ++i) {
        auto W = sample_brownian(g, 1, substream(2002, i));
        double acc = 0.0; // b = 0 and the kernel is state-free: the terminal
        for (std::size_t k = 0; k < N; ++k) acc += kernel[k] * W.increment(k)[0];
        x[i] = acc; // value is the plain weighted sum of the increments
        if (i < 3) {
            auto res = solve_svie(add, xhat, W);
            const double full = res.path.at(g->size() - 1)[0];
            require(std::abs(full - acc) <= 1e-12 * (1.0 + std::abs(full)),
                    "direct sum disagrees with the full solver");
        }
    }
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(paths);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(paths - 1);
    const double target = 0.5 * (1.0 - std::exp(-2.0));
    const double se = var * std::sqrt(2.0 / static_cast<double>(paths - 1));
    require(std::abs(var - target) <= 3.0 * se,
            "variance " + std::to_string(var) + " vs " + std::to_string(target) +
                " beyond 3 SE = " + std::to_string(3.0 * se));
    require(timer.seconds() < 60.0, "runtime above 1 min");
    report(3, "additive kernel terminal variance matches the Ito isometry");
}

// 4. Piecewise-linear driver approximation converges in second moment.
void criterion_convergence() {
    Timer timer;
    auto bnd = builtin_coefficients("bounded_separable");
    auto pseq = make_dyadic_sequence(0.0, 1.0, 3, 8, 4);
    GridPath xhat = GridPath::constant(pseq.grid, Vec::Constant(1, 1.0));
    GeneralCoefficients sup = make_support_setup(bnd, DriverPath::zero(pseq.grid, 1));

    auto rep = run_convergence_study(sup, xhat, pseq, 0.0, 20000, 4004);
    for (std::size_t n = 0; n < rep.levels.size(); ++n) {
        require(rep.levels[n].e_max_sq.censored == 0, "censored paths present");
        if (n + 1 < rep.levels.size()) {
            const auto& a = rep.levels[n].e_max_sq;
            const auto& b = rep.levels[n + 1].e_max_sq;
            require(b.mean < a.mean, "level means not strictly decreasing");
            require(b.ci_hi < a.ci_lo, "95% CIs overlap between levels");
        }
    }
    require(rep.fit.slope >= 0.5,
            "fitted slope " + std::to_string(rep.fit.slope) + " below 0.5");
    require(timer.seconds() < 900.0, "runtime above 15 min");
    report(4, "bounded example: E max^2 decreases with slope >= 0.5, no censoring");
}

// 5. The (b, sigma, -sigma, sigma) setup reduces to the deterministic flow
//    bit for bit: the diffusion slots cancel pathwise.
void criterion_exact_reduction() {
    std::mt19937_64 eng(5005);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const char* names[3] = {"gbm", "additive_kernel", "bounded_separable"};
    for (int cfg = 0; cfg < 10; ++cfg) {
        const std::string name = names[cfg % 3];
        nlohmann::json params = nlohmann::json::object();
        if (name != "gbm") params["decay"] = 0.5 + 2.5 * unif(eng);
        auto coeffs = builtin_coefficients(name, params);

        const double r = (cfg % 2 == 0) ? 0.0 : 0.25;
        const std::size_t N = 16u << (cfg % 3);
        auto g = TimeGrid::uniform(r, r + 1.0, N, 4);
        GridPath xhat = GridPath::constant(g, Vec::Constant(1, 0.5 + unif(eng)));
        DriverPath h = DriverPath::constant_slope(g, Vec::Constant(1, 2.0 * unif(eng) - 1.0));

        auto W = sample_brownian(g, 1, substream(5005, static_cast<std::uint64_t>(cfg)));
        GeneralCoefficients gir = make_girsanov_setup(coeffs, h);
        auto res = solve_general_vie(gir, xhat, W);
        require(!res.censored, "configuration " + std::to_string(cfg) + " censored");
        GridPath det = solve_support_vie(coeffs, xhat, h);
        require(res.path.raw() == det.raw(),
                "configuration " + std::to_string(cfg) + " not bit-identical");
    }
    report(5, "diffusion-cancelling setup is bit-identical to the flow (10 configs)");
}

// 6. Correction-term algebra and the finite-difference vertical derivative.
void criterion_correction_algebra() {
    auto bnd = builtin_coefficients("bounded_separable");
    auto g = TimeGrid::uniform(0.0, 1.0, 32);
    GeneralCoefficients sup = make_support_setup(bnd, DriverPath::zero(g, 1));
    CoefficientSet fd = bnd;
    fd.dx_sigma = nullptr;

    std::mt19937_64 eng(6006);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        GridPath x(g, 1);
        for (std::size_t i = 0; i < x.raw().size(); ++i) x.raw()[i] = unif(eng);
        const double s = g->point(1 + static_cast<std::size_t>(eng() % (g->size() - 2)));
        const double rho = correction_rho(bnd, 1.0, s, x)[0];
        const double R = remainder_R(sup, 1.0, s, x)[0];
        require(std::abs(R - 0.5 * rho) <= 1e-12 * (1.0 + std::abs(rho)),
                "remainder vs rho/2 off at sample " + std::to_string(k));
        const double rho_fd = correction_rho(fd, 1.0, s, x)[0];
        require(std::abs(rho_fd - rho) <= 1e-5 * (1.0 + std::abs(rho)),
                "FD derivative off at sample " + std::to_string(k));
    }
    report(6, "remainder equals rho/2 and FD matches analytic derivatives");
}

// 7. Girsanov sanity: unit mean density, exact unit density for h = 0, k = 1.
void criterion_girsanov() {
    auto g = TimeGrid::uniform(0.0, 1.0, 16);
    DriverPath h = DriverPath::constant_slope(g, Vec::Ones(1));
    const std::vector<std::vector<double>> knots{
        {0.0, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.25, 0.5, 0.75, 1.0}};
    for (std::size_t lvl = 0; lvl < knots.size(); ++lvl) {
        Partition p = Partition::from_times(g, knots[lvl]);
        const std::size_t paths = 10000;
        std::vector<double> z(paths);
        for (std::size_t i = 0; i < paths; ++i) {
            auto W = sample_brownian(g, 1, substream(7007 + lvl, i));
            z[i] = density_terminal(h, p, W).Z_T;
        }
        auto est = MCEstimate::from_samples(z);
        require(std::abs(est.mean - 1.0) <= 3.0 * est.std_error,
                "E[Z] = " + std::to_string(est.mean) + " at level " + std::to_string(lvl));
    }
    Partition trivial = Partition::from_times(g, {0.0, 1.0});
    for (std::size_t i = 0; i < 100; ++i) {
        auto W = sample_brownian(g, 1, substream(7070, i));
        require(density_terminal(DriverPath::zero(g, 1), trivial, W).Z_T == 1.0,
                "zero-driver density not exactly one");
    }
    report(7, "density has unit mean and is exactly one for the zero driver");
}

// 8. Closed-form constants.
void criterion_constants() {
    const double kc = kc_constant(0.0, 2.0, 1.0);
    const double kc_expect = 8.0 / std::pow(std::sqrt(2.0) - 1.0, 2.0);
    require(std::abs(kc - kc_expect) <= 1e-12 * kc_expect, "kc constant off");
    require(std::abs(w_hat_constant(1.0, 2.0, 1.0, 2) - 2.0) <= 1e-12, "moment constant off");
    report(8, "kc_constant and w_hat_constant match their closed forms");
}

// 9. Forward support surrogate: exceedance fractions do not increase.
void criterion_support_forward() {
    Timer timer;
    auto gbm = builtin_coefficients("gbm");
    auto pseq = make_dyadic_sequence(0.0, 1.0, 3, 8, 4);
    GridPath xhat = GridPath::constant(pseq.grid, Vec::Ones(1));
    auto rep = run_support_diagnostic(gbm, xhat, pseq, 0.0, 0.25, 5000, {}, 9009);
    for (std::size_t n = 0; n + 1 < rep.forward.size(); ++n) {
        const auto& a = rep.forward[n].exceed_fraction;
        const auto& b = rep.forward[n + 1].exceed_fraction;
        const double slack = 1.96 * std::sqrt(a.std_error * a.std_error +
                                              b.std_error * b.std_error);
        require(b.mean <= a.mean + slack + 1e-12,
                "exceedance increased beyond CI between levels " + std::to_string(n) +
                    " and " + std::to_string(n + 1));
    }
    require(timer.seconds() < 600.0, "runtime above 10 min");
    report(9, "gbm exceedance fraction non-increasing across 3 levels");
}

// 10. Fixed-seed reruns produce byte-identical report files.
void criterion_determinism() {
    auto run_pair = [&](const std::string& tag,
                        const std::function<int(const cli::RunConfig&)>& cmd,
                        cli::RunConfig base, const std::string& file) {
        const fs::path a = scratch(tag + "_a");
        const fs::path b = scratch(tag + "_b");
        base.out = a.string();
        require(cmd(base) == cli::kExitOk, tag + " first run failed");
        base.out = b.string();
        require(cmd(base) == cli::kExitOk, tag + " second run failed");
        require(slurp(a / file) == slurp(b / file), tag + " outputs differ between reruns");
        fs::remove_all(a);
        fs::remove_all(b);
    };

    cli::RunConfig conv;
    conv.coefficients = "bounded_separable";
    conv.grid = {0.0, 1.0, 4, 3, 2};
    conv.alpha = 0.0;
    conv.paths = 200;
    conv.seed = 11;
    run_pair("converge", cli::cmd_converge, conv, "converge_report.json");

    cli::RunConfig supp = conv;
    supp.eps = 0.25;
    run_pair("support", cli::cmd_support, supp, "support_report.json");

    cli::RunConfig sim;
    sim.coefficients = "gbm";
    sim.grid = {0.0, 1.0, 4, 2, 2};
    sim.paths = 200;
    sim.seed = 12;
    run_pair("simulate", cli::cmd_simulate, sim, "simulate_summary.json");
    report(10, "fixed-seed reruns are byte-identical");
}

} // namespace

int main() {
    criterion_flow_oracle();
    criterion_strong_order();
    criterion_isometry();
    criterion_convergence();
    criterion_exact_reduction();
    criterion_correction_algebra();
    criterion_girsanov();
    criterion_constants();
    criterion_support_forward();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("acceptance: %d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
