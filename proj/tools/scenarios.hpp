// Scenario runners behind the command-line subcommands.
#pragma once

#include "config.hpp"

#include <functional>
#include <string>

namespace adlab::cli {

// ADIABATIC_LAB_THREADS caps the pool; default is the hardware concurrency.
int worker_count();

// Runs fn(0..n-1) on the pool; results are placed by index.
void parallel_for(int n, const std::function<void(int)>& fn);

// Full CSV text: config echo, scenario comments, header row, data rows.
std::string run_scenario(const ScenarioConfig& c);

}  // namespace adlab::cli
