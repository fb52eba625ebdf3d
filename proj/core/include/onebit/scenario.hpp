// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "onebit/config.hpp"

namespace onebit::scenario {

/// Raised after a numerical failure mid-run; the partial output file has
/// already been written with a failure marker appended.
class ScenarioFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunResult {
    std::string content;      // exact bytes written to the output file
    std::string output_path;  // where they went
};

/// Executes a scenario and writes its CSV/JSON table. Output is
/// byte-identical across runs for identical (config, seed): the metadata
/// header carries no timestamps and all numbers are printed with 12
/// significant digits.
RunResult run_scenario(const config::ScenarioConfig& cfg);

/// In-repo reproduction presets (also shipped under tools/presets/).
std::optional<std::string> preset_config_text(const std::string& name);

/// One self-check: measured error against the tolerated error.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Closed-form identity checks (output-sum identity, derivative mass
/// conservation, orthant symmetries). Deterministic given the seed.
std::vector<CheckResult> verify_identities(std::uint64_t seed);

/// Oracle agreement checks (finite-difference derivative vs closed form,
/// duty-cycle optimizer vs grid search, CDF vs quadrature, quadrature rule
/// moments). Heavier than the identities suite.
std::vector<CheckResult> verify_oracles(std::uint64_t seed);

}  // namespace onebit::scenario
