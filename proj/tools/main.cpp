#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
    using namespace svie::cli;

    CLI::App app{"Stochastic Volterra equation simulator and support-flow toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true); // accept global flags after the subcommand name

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;

    app.add_option("--config", config_path, "Configuration file (JSON)");
    app.add_option("--seed", seed, "Master seed (overrides config)");
    app.add_option("--workers", workers, "Worker threads, 0 = auto (overrides config)");
    app.add_option("--out", out, "Output directory (overrides config)");
    app.add_option("--format", format, "Report format: csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo paths of the equation");
    auto* flow = app.add_subcommand("flow", "Deterministic flow over a driver family");
    auto* converge = app.add_subcommand("converge", "Coupled two-level convergence study");
    auto* support = app.add_subcommand("support", "Support diagnostics (forward/reverse)");
    auto* print = app.add_subcommand("print-config", "Print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (workers) cfg.workers = *workers;
        if (out) cfg.out = *out;
        if (format) cfg.format = *format;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (simulate->parsed()) return cmd_simulate(cfg);
    if (flow->parsed()) return cmd_flow(cfg);
    if (converge->parsed()) return cmd_converge(cfg);
    if (support->parsed()) return cmd_support(cfg);
    if (print->parsed()) return cmd_print_config(cfg);
    return kExitConfig;
}
