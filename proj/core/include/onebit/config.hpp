// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/report.hpp"

namespace onebit::config {

/// Parse/validation failure with the offending line of the source document.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& source, int line, const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

/// A declarative key-value document: one `key = value` per line, `#`
/// comments, comma-separated lists. Keys must be unique; every key must be
/// consumed by the scenario parser (unknown keys are line-precise errors).
class Document {
  public:
    static Document parse_text(const std::string& text, std::string source_name);
    static Document parse_file(const std::string& path);

    const std::string& source() const { return source_; }

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;

    template <typename T>
    T get_or(const std::string& key, T fallback) const;

    int line_of(const std::string& key) const;

    /// Error pointing at the key's line (or line 0 for missing keys).
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

    /// Rejects keys that were never read (typo protection).
    void check_all_consumed() const;

  private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    std::string source_;
    std::map<std::string, Entry> entries_;

    const Entry& require(const std::string& key) const;
};

enum class ModelKind { block_siso, simo_spread };
enum class EnsembleKind { qpsk_block, oofsk, ternary_iid };
enum class SweepKind { rates, ratio };
enum class OutputFormat { csv, json };

/// Fully validated scenario description.
struct ScenarioConfig {
    SweepKind sweep = SweepKind::rates;

    // rates mode
    ModelKind model = ModelKind::block_siso;
    int block_len = 1;
    channel::SimoSpec simo;               // model == simo_spread only
    EnsembleKind ensemble = EnsembleKind::qpsk_block;
    double beta = 1.0;
    double gamma = 1.0;
    int frequencies = -1;
    std::vector<double> snr_grid;
    std::vector<Method> methods;
    std::int64_t samples = 200000;
    std::uint64_t seed = 0;
    bool seed_set = false;

    // ratio mode
    std::vector<double> sigma_over_mu;
    std::vector<int> taps_list;

    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    std::string source_name;

    /// Builds the channel law for rates mode.
    channel::ChannelLaw make_law() const;
    /// Builds the input ensemble (dimension block_len) for rates mode.
    channel::InputEnsemble make_ensemble() const;
};

/// Parses and validates a scenario; throws ConfigError with the offending
/// line on any problem (unknown key, missing key, bad value, method not
/// valid for the model, enumeration budget exceeded, missing seed, ...).
ScenarioConfig parse_scenario(const Document& doc);

/// Parses the SIMO model block (n_rx, taps, rx_corr family, r family,
/// alpha) out of a document. Exposed separately so model files can be
/// validated on their own.
channel::SimoSpec parse_simo_spec(const Document& doc);

}  // namespace onebit::config
