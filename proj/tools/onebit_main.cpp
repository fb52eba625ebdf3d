// SPDX-License-Identifier: Apache-2.0
//
// onebit: rates of 1-bit-output noncoherent fading channels.
//
//   onebit run --config <path|fig2|fig3> [--seed N] [--samples N] [--out PATH]
//   onebit verify --suite <identities|oracles|all>
//
// `run` executes one scenario config and writes a CSV/JSON table; output is
// byte-identical across runs for the same config and seed. `verify` runs the
// built-in identity/oracle self-checks and exits nonzero on any failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>

#include "onebit/scenario.hpp"

namespace {

int run_command(const std::string& config_arg, std::optional<std::uint64_t> seed,
                std::optional<std::int64_t> samples, std::optional<std::string> out_path) {
    onebit::config::Document doc = [&] {
        if (std::filesystem::exists(config_arg)) {
            return onebit::config::Document::parse_file(config_arg);
        }
        if (auto preset = onebit::scenario::preset_config_text(config_arg)) {
            return onebit::config::Document::parse_text(*preset, "preset:" + config_arg);
        }
        throw std::runtime_error("config '" + config_arg +
                                 "' is neither a file nor a known preset (fig2, fig3)");
    }();

    onebit::config::ScenarioConfig cfg = onebit::config::parse_scenario(doc);
    if (seed) {
        cfg.seed = *seed;
        cfg.seed_set = true;
    }
    if (samples) {
        if (*samples < 1) {
            throw std::runtime_error("--samples must be >= 1");
        }
        cfg.samples = *samples;
    }
    if (out_path) {
        cfg.output_path = *out_path;
    }

    const onebit::scenario::RunResult res = onebit::scenario::run_scenario(cfg);
    std::printf("wrote %s (%zu bytes)\n", res.output_path.c_str(), res.content.size());
    return 0;
}

int verify_command(const std::string& suite, std::uint64_t seed) {
    std::vector<onebit::scenario::CheckResult> checks;
    if (suite == "identities" || suite == "all") {
        const auto more = onebit::scenario::verify_identities(seed);
        checks.insert(checks.end(), more.begin(), more.end());
    }
    if (suite == "oracles" || suite == "all") {
        const auto more = onebit::scenario::verify_oracles(seed);
        checks.insert(checks.end(), more.begin(), more.end());
    }
    if (checks.empty()) {
        std::fprintf(stderr, "unknown suite '%s' (expected identities, oracles, all)\n",
                     suite.c_str());
        return 2;
    }
    bool all_pass = true;
    for (const auto& check : checks) {
        std::printf("[%s] %s: measured %.6g, tolerated %.6g\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.measured, check.tolerance);
        all_pass = all_pass && check.pass;
    }
    std::printf("%s: %zu checks\n", all_pass ? "OK" : "FAILED", checks.size());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rates of 1-bit-output noncoherent fading channels"};
    app.require_subcommand(1);

    std::string config_arg;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<std::string> out_path;
    CLI::App* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("--config", config_arg, "config file path, or preset name fig2/fig3")
        ->required();
    run->add_option("--seed", seed, "override the Monte Carlo seed");
    run->add_option("--samples", samples, "override the Monte Carlo sample count");
    run->add_option("--out", out_path, "override the output path");

    std::string suite = "all";
    std::uint64_t verify_seed = 7;
    CLI::App* verify = app.add_subcommand("verify", "run built-in self-checks");
    verify->add_option("--suite", suite, "identities, oracles, or all");
    verify->add_option("--seed", verify_seed, "seed for randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(config_arg, seed, samples, out_path);
        }
        return verify_command(suite, verify_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
