#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "svie/coeffs.hpp"
#include "svie/paths.hpp"
#include "svie/timegrid.hpp"

namespace svie::cli {

struct GridSpec {
    double r = 0.0;
    double T = 1.0;
    int base_intervals = 8;
    int levels = 3;
    int oversampling = 4;
};

struct DriverSpec {
    std::string kind = "zero"; // zero | constant_slope | lattice
    std::vector<double> slope; // constant_slope
    int coarse_knots = 1;      // lattice
    std::vector<double> slope_levels{-1.0, 0.0, 1.0};
};

struct CustomSetupSpec {
    // Each slot is one of: b | sigma | -sigma | zero.
    std::string B_under = "b";
    std::string B_H = "zero";
    std::string B_bar = "sigma";
    std::string Sigma = "zero";
};

struct RunConfig {
    std::string coefficients = "gbm";
    nlohmann::json coefficient_params = nlohmann::json::object();
    GridSpec grid;
    std::string setup = "support"; // support | girsanov | custom
    CustomSetupSpec custom;
    double alpha = 0.0;
    double p = 2.0;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    DriverSpec driver;
    std::vector<double> xhat{1.0};
    double eps = 0.25;
    bool reverse = false; // support: also run the reverse (min-distance) diagnostic
    std::size_t dump_paths = 0;
    std::string out = "out";
    std::string format = "json"; // json | csv
    int workers = 0;

    void validate() const; // throws std::invalid_argument
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

// Realized objects built from a validated configuration.
PartitionSequence make_sequence(const RunConfig& c);
GridPath make_xhat(const RunConfig& c, TimeGridPtr grid);
std::vector<DriverPath> make_drivers(const RunConfig& c, TimeGridPtr grid, std::size_t d);
GeneralCoefficients make_setup(const RunConfig& c, const CoefficientSet& coeffs, DriverPath h);

} // namespace svie::cli
