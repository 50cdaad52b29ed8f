#pragma once

#include "config.hpp"

namespace svie::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

int cmd_simulate(const RunConfig& c);
int cmd_flow(const RunConfig& c);
int cmd_converge(const RunConfig& c);
int cmd_support(const RunConfig& c);
int cmd_print_config(const RunConfig& c);

} // namespace svie::cli
