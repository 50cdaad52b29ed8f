#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "svie/experiments.hpp"
#include "svie/parallel.hpp"
#include "svie/stats.hpp"
#include "svie/volterra_det.hpp"
#include "svie/volterra_sde.hpp"

namespace svie::cli {

namespace {

namespace fs = std::filesystem;

fs::path prepare_out(const RunConfig& c) {
    fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open output file " + p.string());
    return os;
}

// %.17g keeps report bytes identical across runs and locales.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    auto os = open_out(p);
    os << j.dump(2) << "\n";
}

void csv_estimate_row(std::ostream& os, std::size_t level, const std::string& quantity,
                      const MCEstimate& e) {
    os << level << "," << quantity << "," << fmt(e.mean) << "," << fmt(e.ci_lo) << ","
       << fmt(e.ci_hi) << "\n";
}

int run_guarded(const RunConfig& c, const std::function<int()>& body) {
    try {
        c.validate();
        return body();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int cmd_simulate(const RunConfig& c) {
    return run_guarded(c, [&]() {
        const auto dir = prepare_out(c);
        const CoefficientSet coeffs = builtin_coefficients(c.coefficients, c.coefficient_params);
        const PartitionSequence pseq = make_sequence(c);
        const GridPath xhat = make_xhat(c, pseq.grid);
        if (xhat.dim() != coeffs.m)
            throw std::invalid_argument("simulate: xhat dimension does not match the model");

        const std::size_t n = c.paths;
        std::vector<double> terminal(n, 0.0);
        std::vector<std::uint8_t> censored(n, 0);
        parallel_for(n, c.workers, [&](std::size_t i) {
            const BrownianPath W = sample_brownian(pseq.grid, coeffs.d, substream(c.seed, i));
            const PathSolveResult res = solve_svie(coeffs, xhat, W);
            censored[i] = res.censored ? 1 : 0;
            terminal[i] = Vec(res.path.at(res.path.size() - 1)).norm();
            if (i < c.dump_paths) {
                auto os = open_out(dir / ("path_" + std::to_string(i) + ".csv"));
                write_csv(res.path, os);
            }
        });

        std::vector<double> kept;
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (censored[i])
                ++bad;
            else
                kept.push_back(terminal[i]);
        }
        // Blow-up budget: more than 10% censored paths is a failed run.
        if (bad > std::max<std::size_t>(1, n / 10) || kept.empty())
            throw std::runtime_error("simulate: blow-up budget exceeded (" +
                                     std::to_string(bad) + " censored paths)");

        const MCEstimate est = MCEstimate::from_samples(kept, bad);
        double var = 0.0;
        for (double v : kept) var += (v - est.mean) * (v - est.mean);
        var /= static_cast<double>(kept.size() > 1 ? kept.size() - 1 : 1);

        if (c.format == "csv") {
            auto os = open_out(dir / "simulate_summary.csv");
            os << "quantity,value\n";
            os << "terminal_mean," << fmt(est.mean) << "\n";
            os << "terminal_var," << fmt(var) << "\n";
            os << "terminal_se," << fmt(est.std_error) << "\n";
            os << "paths," << n << "\n";
            os << "censored," << bad << "\n";
            os << "seed," << c.seed << "\n";
        } else {
            write_json(dir / "simulate_summary.json",
                       {{"terminal_mean", est.mean},
                        {"terminal_var", var},
                        {"terminal_se", est.std_error},
                        {"paths", n},
                        {"censored", bad},
                        {"seed", c.seed}});
        }
        return kExitOk;
    });
}

int cmd_flow(const RunConfig& c) {
    return run_guarded(c, [&]() {
        const auto dir = prepare_out(c);
        const CoefficientSet coeffs = builtin_coefficients(c.coefficients, c.coefficient_params);
        const PartitionSequence pseq = make_sequence(c);
        const GridPath xhat = make_xhat(c, pseq.grid);
        if (xhat.dim() != coeffs.m)
            throw std::invalid_argument("flow: xhat dimension does not match the model");
        const auto drivers = make_drivers(c, pseq.grid, coeffs.d);
        if (drivers.empty()) throw std::invalid_argument("flow: empty driver family");

        const FlowDiagnostics diag = flow_map(coeffs, xhat, drivers, c.p);
        nlohmann::json terminals = nlohmann::json::array();
        for (std::size_t k = 0; k < diag.solutions.size(); ++k) {
            auto os = open_out(dir / ("flow_" + std::to_string(k) + ".csv"));
            write_csv(diag.solutions[k], os);
            const Vec end = diag.solutions[k].at(diag.solutions[k].size() - 1);
            nlohmann::json t = nlohmann::json::array();
            for (Eigen::Index i = 0; i < end.size(); ++i) t.push_back(end[i]);
            terminals.push_back(t);
        }
        nlohmann::json ratios = nlohmann::json::array();
        for (const auto& rec : diag.lipschitz)
            ratios.push_back({{"i", rec.i}, {"j", rec.j}, {"ratio", rec.ratio},
                              {"skipped", rec.skipped}});
        write_json(dir / "flow_summary.json", {{"drivers", drivers.size()},
                                               {"p", c.p},
                                               {"terminal_values", terminals},
                                               {"lipschitz_ratios", ratios}});
        return kExitOk;
    });
}

int cmd_converge(const RunConfig& c) {
    return run_guarded(c, [&]() {
        const auto dir = prepare_out(c);
        const CoefficientSet coeffs = builtin_coefficients(c.coefficients, c.coefficient_params);
        const PartitionSequence pseq = make_sequence(c);
        const GridPath xhat = make_xhat(c, pseq.grid);
        if (xhat.dim() != coeffs.m)
            throw std::invalid_argument("converge: xhat dimension does not match the model");
        auto drivers = make_drivers(c, pseq.grid, coeffs.d);
        const GeneralCoefficients g = make_setup(c, coeffs, std::move(drivers.front()));

        const ConvergenceReport rep =
            run_convergence_study(g, xhat, pseq, c.alpha, c.paths, c.seed, c.workers);
        for (const auto& lvl : rep.levels)
            if (lvl.e_max_sq.censored > std::max<std::size_t>(1, c.paths / 10))
                throw std::runtime_error("converge: blow-up budget exceeded at level " +
                                         std::to_string(lvl.level));

        write_json(dir / "converge_report.json", to_json(rep));
        {
            auto os = open_out(dir / "converge_report.csv");
            os << "level,mesh,intervals,e_max_sq,e_max_sq_lo,e_max_sq_hi,"
                  "hoelder_sq,hoelder_sq_lo,hoelder_sq_hi,censored\n";
            for (const auto& lvl : rep.levels)
                os << lvl.level << "," << fmt(lvl.mesh) << "," << lvl.intervals << ","
                   << fmt(lvl.e_max_sq.mean) << "," << fmt(lvl.e_max_sq.ci_lo) << ","
                   << fmt(lvl.e_max_sq.ci_hi) << "," << fmt(lvl.hoelder_sq.mean) << ","
                   << fmt(lvl.hoelder_sq.ci_lo) << "," << fmt(lvl.hoelder_sq.ci_hi) << ","
                   << lvl.e_max_sq.censored << "\n";
        }
        {
            // plot-ready long format
            auto os = open_out(dir / "converge_long.csv");
            os << "level,quantity,mean,lo,hi\n";
            for (const auto& lvl : rep.levels) {
                csv_estimate_row(os, lvl.level, "e_max_sq", lvl.e_max_sq);
                csv_estimate_row(os, lvl.level, "hoelder_sq", lvl.hoelder_sq);
            }
        }
        return kExitOk;
    });
}

int cmd_support(const RunConfig& c) {
    return run_guarded(c, [&]() {
        const auto dir = prepare_out(c);
        const CoefficientSet coeffs = builtin_coefficients(c.coefficients, c.coefficient_params);
        const PartitionSequence pseq = make_sequence(c);
        const GridPath xhat = make_xhat(c, pseq.grid);
        if (xhat.dim() != coeffs.m)
            throw std::invalid_argument("support: xhat dimension does not match the model");
        std::vector<DriverPath> family;
        if (c.reverse) family = make_drivers(c, pseq.grid, coeffs.d);

        const SupportReport rep = run_support_diagnostic(coeffs, xhat, pseq, c.alpha, c.eps,
                                                         c.paths, family, c.seed, c.workers);
        if (rep.censored > std::max<std::size_t>(1, c.paths / 10))
            throw std::runtime_error("support: blow-up budget exceeded");

        write_json(dir / "support_report.json", to_json(rep));
        auto os = open_out(dir / "support_long.csv");
        os << "level,quantity,mean,lo,hi\n";
        for (const auto& lvl : rep.forward)
            csv_estimate_row(os, lvl.level, "exceed_fraction", lvl.exceed_fraction);
        return kExitOk;
    });
}

int cmd_print_config(const RunConfig& c) {
    std::cout << to_json(c).dump(2) << "\n";
    return kExitOk;
}

} // namespace svie::cli
