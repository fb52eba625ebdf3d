// SPDX-License-Identifier: Apache-2.0
#include "onebit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "onebit/mi_exact.hpp"

namespace onebit::config {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string current;
    std::istringstream in(value);
    while (std::getline(in, current, ',')) {
        items.push_back(trim(current));
    }
    return items;
}

}  // namespace

Document Document::parse_text(const std::string& text, std::string source_name) {
    Document doc;
    doc.source_ = std::move(source_name);
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(doc.source_, line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(doc.source_, line_no, "empty key");
        }
        if (doc.entries_.count(key)) {
            throw ConfigError(doc.source_, line_no,
                              "duplicate key '" + key + "' (first on line " +
                                  std::to_string(doc.entries_[key].line) + ")");
        }
        doc.entries_[key] = Entry{value, line_no, false};
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_text(text.str(), path);
}

bool Document::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

const Document::Entry& Document::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(source_, 0, "missing required key '" + key + "'");
    }
    it->second.consumed = true;
    return it->second;
}

std::string Document::get_string(const std::string& key) const {
    return require(key).value;
}

double Document::get_double(const std::string& key) const {
    const Entry& e = require(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) {
            throw std::invalid_argument("");
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(source_, e.line, "key '" + key + "': expected a number, got '" +
                                               e.value + "'");
    }
}

int Document::get_int(const std::string& key) const {
    const Entry& e = require(key);
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) {
            throw std::invalid_argument("");
        }
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError(source_, e.line, "key '" + key + "': expected an integer, got '" +
                                               e.value + "'");
    }
}

std::uint64_t Document::get_u64(const std::string& key) const {
    const Entry& e = require(key);
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) {
            throw std::invalid_argument("");
        }
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError(source_, e.line, "key '" + key +
                                               "': expected an unsigned integer, got '" +
                                               e.value + "'");
    }
}

bool Document::get_bool(const std::string& key) const {
    const Entry& e = require(key);
    if (e.value == "true" || e.value == "1") {
        return true;
    }
    if (e.value == "false" || e.value == "0") {
        return false;
    }
    throw ConfigError(source_, e.line, "key '" + key + "': expected true/false");
}

std::vector<std::string> Document::get_string_list(const std::string& key) const {
    return split_list(require(key).value);
}

std::vector<double> Document::get_double_list(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    for (const std::string& item : split_list(e.value)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) {
                throw std::invalid_argument("");
            }
        } catch (const std::exception&) {
            throw ConfigError(source_, e.line,
                              "key '" + key + "': expected a number list, got '" + item + "'");
        }
    }
    return out;
}

std::vector<int> Document::get_int_list(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<int> out;
    for (const std::string& item : split_list(e.value)) {
        try {
            std::size_t pos = 0;
            out.push_back(static_cast<int>(std::stol(item, &pos)));
            if (pos != item.size()) {
                throw std::invalid_argument("");
            }
        } catch (const std::exception&) {
            throw ConfigError(source_, e.line,
                              "key '" + key + "': expected an integer list, got '" + item + "'");
        }
    }
    return out;
}

template <typename T>
T Document::get_or(const std::string& key, T fallback) const {
    if (!has(key)) {
        return fallback;
    }
    if constexpr (std::is_same_v<T, double>) {
        return get_double(key);
    } else if constexpr (std::is_same_v<T, int>) {
        return get_int(key);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        return get_u64(key);
    } else if constexpr (std::is_same_v<T, bool>) {
        return get_bool(key);
    } else {
        return get_string(key);
    }
}

template std::string Document::get_or(const std::string&, std::string) const;
template double Document::get_or(const std::string&, double) const;
template int Document::get_or(const std::string&, int) const;
template std::uint64_t Document::get_or(const std::string&, std::uint64_t) const;
template bool Document::get_or(const std::string&, bool) const;

int Document::line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

void Document::fail(const std::string& key, const std::string& message) const {
    throw ConfigError(source_, line_of(key), "key '" + key + "': " + message);
}

void Document::check_all_consumed() const {
    for (const auto& [key, entry] : entries_) {
        if (!entry.consumed) {
            throw ConfigError(source_, entry.line, "unknown key '" + key + "'");
        }
    }
}

channel::SimoSpec parse_simo_spec(const Document& doc) {
    channel::SimoSpec spec;
    spec.n_rx = doc.get_int("n_rx");
    spec.taps = doc.get_int("taps");
    if (spec.n_rx < 1) {
        doc.fail("n_rx", "must be >= 1");
    }
    if (spec.taps < 1) {
        doc.fail("taps", "must be >= 1");
    }

    const std::string family = doc.get_string("rx_corr");
    const int n = spec.n_rx;
    if (family == "identity") {
        spec.rx_corr = ComplexMatrix::Identity(n, n);
    } else if (family == "constant") {
        const double c = doc.get_double("rx_corr_param");
        if (n > 1 && (c < -1.0 / (n - 1) || c > 1.0)) {
            doc.fail("rx_corr_param", "constant correlation must keep R PSD");
        }
        ComplexMatrix r = ComplexMatrix::Constant(n, n, c);
        r.diagonal().setOnes();
        spec.rx_corr = r;
    } else if (family == "exponential") {
        const double c = doc.get_double("rx_corr_param");
        if (std::abs(c) >= 1.0) {
            doc.fail("rx_corr_param", "exponential correlation requires |c| < 1");
        }
        ComplexMatrix r(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                r(i, j) = std::pow(c, std::abs(i - j));
            }
        }
        spec.rx_corr = r;
    } else {
        doc.fail("rx_corr", "unknown family '" + family +
                                "' (expected identity, constant, exponential)");
    }

    const std::string r_family = doc.get_string("r");
    if (r_family == "delta") {
        spec.autocorr = [](int k) { return k == 0 ? 1.0 : 0.0; };
    } else if (r_family == "geometric") {
        const double a = doc.get_double("r_param");
        if (std::abs(a) >= 1.0) {
            doc.fail("r_param", "geometric autocorrelation requires |a| < 1");
        }
        spec.autocorr = [a](int k) { return std::pow(a, std::abs(k)); };
    } else {
        doc.fail("r", "unknown family '" + r_family + "' (expected delta, geometric)");
    }

    if (doc.has("alpha")) {
        spec.delay_profile = doc.get_double_list("alpha");
    } else {
        spec.delay_profile.assign(static_cast<std::size_t>(spec.taps), 1.0 / spec.taps);
    }
    spec.autocorr_horizon = doc.get_or<int>("autocorr_horizon", spec.autocorr_horizon);

    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(doc.source(), doc.line_of("n_rx"),
                          std::string("invalid SIMO model: ") + e.what());
    }
    return spec;
}

channel::ChannelLaw ScenarioConfig::make_law() const {
    if (model == ModelKind::block_siso) {
        return channel::block_fading_siso(block_len);
    }
    return channel::simo_block_law(simo, block_len);
}

channel::InputEnsemble ScenarioConfig::make_ensemble() const {
    switch (ensemble) {
        case EnsembleKind::qpsk_block:
            return channel::ensemble_qpsk_block(block_len);
        case EnsembleKind::oofsk:
            return channel::ensemble_oofsk(block_len, beta, gamma, frequencies);
        case EnsembleKind::ternary_iid:
            return channel::ensemble_ternary_iid(block_len, beta, gamma);
    }
    throw std::logic_error("unreachable ensemble kind");
}

ScenarioConfig parse_scenario(const Document& doc) {
    ScenarioConfig cfg;
    cfg.source_name = doc.source();

    const std::string sweep = doc.get_or<std::string>("sweep", "rates");
    if (sweep == "rates") {
        cfg.sweep = SweepKind::rates;
    } else if (sweep == "ratio") {
        cfg.sweep = SweepKind::ratio;
    } else {
        doc.fail("sweep", "expected 'rates' or 'ratio'");
    }

    cfg.output_path = doc.get_or<std::string>("output", "scenario_out.csv");
    const std::string format = doc.get_or<std::string>("format", "csv");
    if (format == "csv") {
        cfg.format = OutputFormat::csv;
    } else if (format == "json") {
        cfg.format = OutputFormat::json;
    } else {
        doc.fail("format", "expected 'csv' or 'json'");
    }

    if (cfg.sweep == SweepKind::ratio) {
        cfg.beta = doc.get_double("beta");
        if (!(cfg.beta >= 1.0)) {
            doc.fail("beta", "must be >= 1");
        }
        cfg.taps_list = doc.get_int_list("taps_list");
        if (cfg.taps_list.empty()) {
            doc.fail("taps_list", "must not be empty");
        }
        if (doc.has("sigma_over_mu")) {
            cfg.sigma_over_mu = doc.get_double_list("sigma_over_mu");
        } else {
            const double lo = doc.get_double("ratio_min");
            const double hi = doc.get_double("ratio_max");
            const int points = doc.get_int("ratio_points");
            if (!(lo > 0.0) || !(hi > lo)) {
                doc.fail("ratio_min", "need 0 < ratio_min < ratio_max");
            }
            if (points < 2) {
                doc.fail("ratio_points", "must be >= 2");
            }
            cfg.sigma_over_mu.resize(static_cast<std::size_t>(points));
            const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
            for (int i = 0; i < points; ++i) {
                cfg.sigma_over_mu[static_cast<std::size_t>(i)] =
                    std::pow(10.0, std::log10(lo) + step * i);
            }
        }
        for (double s : cfg.sigma_over_mu) {
            if (!(s > 0.0)) {
                doc.fail("sigma_over_mu", "grid values must be positive");
            }
        }
        doc.check_all_consumed();
        return cfg;
    }

    // rates mode
    const std::string model = doc.get_string("model");
    if (model == "block-siso") {
        cfg.model = ModelKind::block_siso;
    } else if (model == "simo-spread") {
        cfg.model = ModelKind::simo_spread;
    } else {
        doc.fail("model", "expected 'block-siso' or 'simo-spread'");
    }

    cfg.block_len = doc.get_int("block_len");
    if (cfg.block_len < 1) {
        doc.fail("block_len", "must be >= 1");
    }
    if (cfg.model == ModelKind::simo_spread) {
        cfg.simo = parse_simo_spec(doc);
        if (cfg.block_len <= cfg.simo.taps) {
            doc.fail("block_len", "must exceed the tap count");
        }
    }

    const std::string ens = doc.get_string("ensemble");
    if (ens == "qpsk-block") {
        cfg.ensemble = EnsembleKind::qpsk_block;
    } else if (ens == "oofsk") {
        cfg.ensemble = EnsembleKind::oofsk;
    } else if (ens == "ternary-iid") {
        cfg.ensemble = EnsembleKind::ternary_iid;
    } else {
        doc.fail("ensemble", "expected qpsk-block, oofsk, or ternary-iid");
    }
    if (cfg.ensemble != EnsembleKind::qpsk_block) {
        cfg.beta = doc.get_double("beta");
        cfg.gamma = doc.get_double("gamma");
        cfg.frequencies = doc.get_or<int>("frequencies", -1);
    }

    cfg.snr_grid = doc.get_double_list("snr_grid");
    if (cfg.snr_grid.empty()) {
        doc.fail("snr_grid", "must not be empty");
    }
    for (double rho : cfg.snr_grid) {
        if (rho < 0.0) {
            doc.fail("snr_grid", "SNR values must be nonnegative");
        }
    }

    const std::vector<std::string> method_names = doc.get_string_list("methods");
    if (method_names.empty()) {
        doc.fail("methods", "must not be empty");
    }
    for (const std::string& name : method_names) {
        const auto m = method_from_name(name);
        if (!m) {
            doc.fail("methods", "unknown method '" + name + "'");
        }
        cfg.methods.push_back(*m);
    }

    bool needs_seed = false;
    for (Method m : cfg.methods) {
        const bool simo_only =
            m == Method::iid_closed_form || m == Method::upper_bound_prop1;
        if (simo_only && cfg.model != ModelKind::simo_spread) {
            doc.fail("methods", std::string(method_name(m)) + " requires model simo-spread");
        }
        if (m == Method::exact_enum) {
            needs_seed = true;
            const int total_rx =
                cfg.model == ModelKind::block_siso ? cfg.block_len
                                                   : cfg.simo.n_rx * cfg.block_len;
            std::int64_t n_symbols = 0;
            if (cfg.ensemble == EnsembleKind::qpsk_block) {
                n_symbols = std::int64_t{1} << (2 * cfg.block_len);
            } else if (cfg.ensemble == EnsembleKind::oofsk) {
                n_symbols = cfg.block_len;  // off state + n-1 tones
            } else {
                n_symbols = static_cast<std::int64_t>(std::pow(3.0, cfg.block_len));
            }
            if (total_rx > 11 ||
                channel::pattern_count(total_rx) * n_symbols > mi::enumeration_budget()) {
                doc.fail("methods", "exact-enum enumeration budget exceeded for this model");
            }
        }
        if (m == Method::lower_bound && cfg.model == ModelKind::simo_spread) {
            needs_seed = true;  // Monte Carlo fallback over H
        }
    }

    cfg.samples = doc.get_or<int>("samples", 200000);
    if (cfg.samples < 1) {
        doc.fail("samples", "must be >= 1");
    }
    if (doc.has("seed")) {
        cfg.seed = doc.get_u64("seed");
        cfg.seed_set = true;
    }
    if (needs_seed && !cfg.seed_set) {
        throw ConfigError(doc.source(), 0,
                          "seed is mandatory when a Monte Carlo method is selected");
    }

    doc.check_all_consumed();
    return cfg;
}

}  // namespace onebit::config
