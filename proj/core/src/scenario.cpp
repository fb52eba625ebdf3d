// SPDX-License-Identifier: Apache-2.0
#include "onebit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "onebit/asymptotic.hpp"
#include "onebit/gauss.hpp"
#include "onebit/mi_exact.hpp"
#include "onebit/simo_lowsnr.hpp"

namespace onebit::scenario {

namespace {

using config::ModelKind;
using config::OutputFormat;
using config::ScenarioConfig;
using config::SweepKind;

std::string method_list(const std::vector<Method>& methods) {
    std::string out;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += method_name(methods[i]);
    }
    return out;
}

std::vector<std::string> metadata_lines(const ScenarioConfig& cfg) {
    std::vector<std::string> meta;
    meta.push_back("onebit scenario run");
    meta.push_back("source: " + cfg.source_name);
    if (cfg.sweep == SweepKind::ratio) {
        meta.push_back("sweep: ratio");
        meta.push_back("beta: " + format_sig12(cfg.beta));
        std::string taps;
        for (std::size_t i = 0; i < cfg.taps_list.size(); ++i) {
            taps += (i ? "," : "") + std::to_string(cfg.taps_list[i]);
        }
        meta.push_back("taps: " + taps);
        meta.push_back("grid_points: " + std::to_string(cfg.sigma_over_mu.size()));
        return meta;
    }
    meta.push_back("sweep: rates");
    if (cfg.model == ModelKind::block_siso) {
        meta.push_back("model: block-siso block_len=" + std::to_string(cfg.block_len));
    } else {
        meta.push_back("model: simo-spread block_len=" + std::to_string(cfg.block_len) +
                       " n_rx=" + std::to_string(cfg.simo.n_rx) +
                       " taps=" + std::to_string(cfg.simo.taps));
    }
    switch (cfg.ensemble) {
        case config::EnsembleKind::qpsk_block:
            meta.push_back("ensemble: qpsk-block");
            break;
        case config::EnsembleKind::oofsk:
            meta.push_back("ensemble: oofsk beta=" + format_sig12(cfg.beta) +
                           " gamma=" + format_sig12(cfg.gamma));
            break;
        case config::EnsembleKind::ternary_iid:
            meta.push_back("ensemble: ternary-iid beta=" + format_sig12(cfg.beta) +
                           " gamma=" + format_sig12(cfg.gamma));
            break;
    }
    meta.push_back("methods: " + method_list(cfg.methods));
    meta.push_back("samples: " + std::to_string(cfg.samples));
    if (cfg.seed_set) {
        meta.push_back("seed: " + std::to_string(cfg.seed));
    }
    meta.push_back("enum_budget: " + std::to_string(mi::enumeration_budget()));
    meta.push_back(
        "normalization: exact-enum/lower-bound/quadratic/unquantized-quadratic per block; "
        "iid-closed-form/upper-bound-prop1 per symbol");
    return meta;
}

struct RateRow {
    double rho;
    Method method;
    double value;
    double std_error;
};

std::string render_rates(const ScenarioConfig& cfg, const std::vector<std::string>& meta,
                         const std::vector<RateRow>& rows, const std::string& failure) {
    std::ostringstream out;
    if (cfg.format == OutputFormat::csv) {
        for (const std::string& m : meta) {
            out << "# " << m << "\n";
        }
        out << "rho,method,value,std_error\n";
        for (const RateRow& row : rows) {
            out << format_sig12(row.rho) << ',' << method_name(row.method) << ','
                << format_sig12(row.value) << ',' << format_sig12(row.std_error) << "\n";
        }
        if (!failure.empty()) {
            out << "# FAILED: " << failure << "\n";
        }
        return out.str();
    }
    out << "{\n  \"metadata\": [";
    for (std::size_t i = 0; i < meta.size(); ++i) {
        out << (i ? ", " : "") << '"' << meta[i] << '"';
    }
    out << "],\n  \"columns\": [\"rho\", \"method\", \"value\", \"std_error\"],\n  \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << (i ? ",\n    " : "\n    ");
        out << "[" << format_sig12(rows[i].rho) << ", \"" << method_name(rows[i].method)
            << "\", " << format_sig12(rows[i].value) << ", " << format_sig12(rows[i].std_error)
            << "]";
    }
    out << "\n  ]";
    if (!failure.empty()) {
        out << ",\n  \"failed\": \"" << failure << "\"";
    }
    out << "\n}\n";
    return out.str();
}

std::string render_ratio(const ScenarioConfig& cfg, const std::vector<std::string>& meta,
                         const std::vector<simo::RatioRow>& rows) {
    std::ostringstream out;
    if (cfg.format == OutputFormat::csv) {
        for (const std::string& m : meta) {
            out << "# " << m << "\n";
        }
        out << "sigma_over_mu,T,beta,ratio\n";
        for (const simo::RatioRow& row : rows) {
            if (!row.valid) {
                out << "# undefined ratio at sigma_over_mu=" << format_sig12(row.sigma_over_mu)
                    << ",T=" << row.taps << "\n";
                continue;
            }
            out << format_sig12(row.sigma_over_mu) << ',' << row.taps << ','
                << format_sig12(row.beta) << ',' << format_sig12(row.ratio) << "\n";
        }
        return out.str();
    }
    out << "{\n  \"metadata\": [";
    for (std::size_t i = 0; i < meta.size(); ++i) {
        out << (i ? ", " : "") << '"' << meta[i] << '"';
    }
    out << "],\n  \"columns\": [\"sigma_over_mu\", \"T\", \"beta\", \"ratio\"],\n  \"rows\": [";
    bool first = true;
    for (const simo::RatioRow& row : rows) {
        if (!row.valid) {
            continue;
        }
        out << (first ? "\n    " : ",\n    ");
        first = false;
        out << "[" << format_sig12(row.sigma_over_mu) << ", " << row.taps << ", "
            << format_sig12(row.beta) << ", " << format_sig12(row.ratio) << "]";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    const std::vector<std::string> meta = metadata_lines(cfg);

    if (cfg.sweep == SweepKind::ratio) {
        const std::vector<simo::RatioRow> rows =
            simo::ratio_sweep(cfg.sigma_over_mu, cfg.taps_list, cfg.beta);
        RunResult res{render_ratio(cfg, meta, rows), cfg.output_path};
        write_file(res.output_path, res.content);
        return res;
    }

    const channel::ChannelLaw law = cfg.make_law();
    const channel::InputEnsemble ens = cfg.make_ensemble();

    // rho-independent coefficients computed once.
    std::optional<asym::QuadraticCoefficient> quant, unquant;
    std::optional<simo::CoherenceStats> stats;
    for (Method m : cfg.methods) {
        if (m == Method::quadratic && !quant) {
            quant = asym::theorem1_coefficient(law, ens);
        }
        if (m == Method::unquantized_quadratic && !unquant) {
            unquant = asym::unquantized_coefficient(law, ens);
        }
        if ((m == Method::iid_closed_form || m == Method::upper_bound_prop1) && !stats) {
            stats = simo::coherence_stats(cfg.simo, cfg.block_len);
        }
    }

    std::vector<RateRow> rows;
    std::string failure;
    try {
        for (double rho : cfg.snr_grid) {
            for (Method m : cfg.methods) {
                RateRow row{rho, m, 0.0, 0.0};
                switch (m) {
                    case Method::exact_enum: {
                        const mi::McSpec mc{cfg.samples, cfg.seed,
                                            gauss::OrthantMethod::monte_carlo};
                        const RateReport r = mi::mutual_info_exact(law, ens, rho, mc);
                        row.value = r.value;
                        row.std_error = r.std_error;
                        break;
                    }
                    case Method::lower_bound: {
                        mi::QuadratureSpec quad;
                        quad.seed = cfg.seed;
                        const RateReport r = mi::mutual_info_lower_bound(law, ens, rho, quad);
                        row.value = r.value;
                        row.std_error = r.std_error;
                        break;
                    }
                    case Method::quadratic:
                        row.value = quant->kappa * rho * rho;
                        break;
                    case Method::unquantized_quadratic:
                        row.value = unquant->kappa * rho * rho;
                        break;
                    case Method::iid_closed_form: {
                        const RateReport r =
                            simo::iid_rate(cfg.simo, *stats, cfg.beta, rho, cfg.block_len);
                        row.value = r.value;
                        break;
                    }
                    case Method::upper_bound_prop1: {
                        const RateReport r = simo::prop1_upper_bound(*stats, cfg.beta, rho);
                        row.value = r.value;
                        break;
                    }
                }
                rows.push_back(row);
            }
        }
    } catch (const std::runtime_error& e) {
        failure = e.what();
    }

    RunResult res{render_rates(cfg, meta, rows, failure), cfg.output_path};
    write_file(res.output_path, res.content);
    if (!failure.empty()) {
        throw ScenarioFailure("numerical failure, partial output preserved: " + failure);
    }
    return res;
}

std::optional<std::string> preset_config_text(const std::string& name) {
    if (name == "fig2") {
        return std::string(
            "# Mono-bit block-fading SISO with coherence block 3, QPSK inputs:\n"
            "# exact mutual information, chain-rule lower bound, and the low-SNR\n"
            "# quadratic approximation over an SNR grid.\n"
            "sweep = rates\n"
            "model = block-siso\n"
            "block_len = 3\n"
            "ensemble = qpsk-block\n"
            "methods = exact-enum, lower-bound, quadratic\n"
            "snr_grid = 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0\n"
            "samples = 200000\n"
            "seed = 20260810\n"
            "output = fig2.csv\n"
            "format = csv\n");
    }
    if (name == "fig3") {
        return std::string(
            "# Ratio of the i.i.d. ternary rate to the peak-constrained upper\n"
            "# bound versus the spatial-to-temporal coherence ratio sigma/mu,\n"
            "# for peak power 2 and uniform delay profiles with 1 and 5 taps.\n"
            "sweep = ratio\n"
            "beta = 2\n"
            "taps_list = 1, 5\n"
            "ratio_min = 0.01\n"
            "ratio_max = 1000\n"
            "ratio_points = 51\n"
            "output = fig3.csv\n"
            "format = csv\n");
    }
    return std::nullopt;
}

namespace {

ComplexMatrix random_zero_diag_hermitian(int n, Rng& rng) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            p(i, j) = std::complex<double>(rng.normal(), rng.normal());
            p(j, i) = std::conj(p(i, j));
        }
    }
    return p;
}

RealMatrix random_psd(int dim, Rng& rng, double ridge) {
    RealMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            a(i, j) = rng.normal();
        }
    }
    RealMatrix cov = a * a.transpose();
    cov += ridge * RealMatrix::Identity(dim, dim);
    return cov;
}

double simpson(const std::function<double(double)>& f, double a, double b, int depth,
               double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, depth - 1, tol / 2.0) + simpson(f, m, b, depth - 1, tol / 2.0);
}

}  // namespace

std::vector<CheckResult> verify_identities(std::uint64_t seed) {
    std::vector<CheckResult> checks;

    {  // (1/4^N) sum_y (y^H P y)^2 = 4 tr(P^2) for zero-diagonal Hermitian P
        Rng rng(Rng::derive(seed, 1));
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const int n = 2 + (i % 2);
            const asym::SignIdentity id =
                asym::sign_identity_check(random_zero_diag_hermitian(n, rng));
            worst = std::max(worst, std::abs(id.lhs - id.rhs));
        }
        checks.push_back({"sign-identity (max |lhs-rhs|, 50 random P)", worst, 1e-9,
                          worst <= 1e-9});
    }

    {  // sum_y P'(y|x) = 0: derivative mass conservation
        const channel::ChannelLaw law = channel::block_fading_siso(3);
        const auto patterns = channel::all_sign_patterns(law.n_rx);
        Rng rng(Rng::derive(seed, 2));
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            ComplexVector x(3);
            for (int k = 0; k < 3; ++k) {
                x[k] = std::complex<double>(rng.normal(), rng.normal()) * M_SQRT1_2;
            }
            double sum = 0.0;
            for (const auto& y : patterns) {
                sum += asym::lemma1_derivative(law, x, y);
            }
            worst = std::max(worst, std::abs(sum));
        }
        checks.push_back({"lemma1-mass-conservation (max |sum_y P'|)", worst, 1e-12,
                          worst <= 1e-12});
    }

    {  // orthant(cov, s) equals orthant(D cov D, all-plus) in expectation
        Rng rng(Rng::derive(seed, 3));
        double worst_sigmas = 0.0;
        for (int i = 0; i < 5; ++i) {
            const RealMatrix cov = random_psd(4, rng, 0.1);
            const std::vector<int> signs{1, -1, -1, 1};
            RealMatrix flipped = cov;
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    flipped(a, b) *= signs[static_cast<std::size_t>(a)] *
                                     signs[static_cast<std::size_t>(b)];
                }
            }
            const auto lhs = gauss::orthant_probability(
                gauss::RealCovariance::from_matrix(cov), signs, 200000,
                Rng::derive(seed, 100 + static_cast<std::uint64_t>(i)));
            const auto rhs = gauss::orthant_probability(
                gauss::RealCovariance::from_matrix(flipped), {1, 1, 1, 1}, 200000,
                Rng::derive(seed, 200 + static_cast<std::uint64_t>(i)));
            const double combined =
                std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
            worst_sigmas = std::max(worst_sigmas, std::abs(lhs.value - rhs.value) / combined);
        }
        checks.push_back({"orthant-sign-flip (max deviation in combined sigmas)", worst_sigmas,
                          3.0, worst_sigmas <= 3.0});
    }

    {  // orthant masses over all sign patterns sum to one
        Rng rng(Rng::derive(seed, 4));
        const RealMatrix cov = random_psd(4, rng, 0.05);
        const auto rc = gauss::RealCovariance::from_matrix(cov);
        double sum = 0.0, sum_se = 0.0;
        for (std::uint32_t code = 0; code < 16; ++code) {
            std::vector<int> signs(4);
            for (int b = 0; b < 4; ++b) {
                signs[static_cast<std::size_t>(b)] = (code >> b) & 1u ? 1 : -1;
            }
            const auto est =
                gauss::orthant_probability(rc, signs, 50000, Rng::derive(seed, 300 + code));
            sum += est.value;
            sum_se += est.std_error;
        }
        const double err = std::abs(sum - 1.0);
        checks.push_back({"orthant-sum-one (|sum - 1|, tol 4*summed se)", err, 4.0 * sum_se,
                          err <= 4.0 * sum_se});
    }

    {  // CDF symmetry on a dense grid
        double worst = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double x = -8.0 + 16.0 * i / 10000.0;
            worst = std::max(worst,
                             std::abs(gauss::normal_cdf(x) + gauss::normal_cdf(-x) - 1.0));
        }
        checks.push_back({"cdf-symmetry (max |F(x)+F(-x)-1|)", worst, 1e-15, worst <= 1e-15});
    }

    return checks;
}

std::vector<CheckResult> verify_oracles(std::uint64_t seed) {
    std::vector<CheckResult> checks;

    {  // Lemma-1 closed form vs common-random-number finite difference
        const channel::ChannelLaw law = channel::block_fading_siso(2);
        Rng rng(Rng::derive(seed, 10));
        int misses = 0;
        const int cases = 5;
        for (int i = 0; i < cases; ++i) {
            ComplexVector x(2);
            for (int k = 0; k < 2; ++k) {
                x[k] = std::complex<double>(rng.normal(), rng.normal()) * M_SQRT1_2;
            }
            const auto y = channel::SignPattern::from_index(
                2, static_cast<std::uint32_t>(rng.next_u64() % 16));
            const double closed = asym::lemma1_derivative(law, x, y);
            const mi::SlopeEstimate fd = mi::cond_prob_slope_fd(
                law, x, y, 2e-3, 2000000, Rng::derive(seed, 400 + static_cast<std::uint64_t>(i)));
            if (std::abs(fd.slope - closed) > 3.0 * fd.std_error) {
                ++misses;
            }
        }
        checks.push_back({"lemma1-finite-difference (misses beyond 3 sigma of 5)",
                          static_cast<double>(misses), 1.0, misses <= 1});
    }

    {  // closed-form U(beta)/gamma_opt vs grid maximization
        Rng rng(Rng::derive(seed, 11));
        double worst_rel = 0.0, worst_arg = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double mu = 2.0 * rng.uniform01();
            const double sigma = 0.01 + 2.0 * rng.uniform01();
            const double beta = 1.0 + 3.0 * rng.uniform01();
            double best = -1.0, best_g = 0.0;
            for (int gi = 0; gi <= 10000; ++gi) {
                const double g = gi * 1e-4;
                const double v = g * beta * mu + g * (beta - g) * sigma;
                if (v > best) {
                    best = v;
                    best_g = g;
                }
            }
            const double u = simo::prop1_u(mu, sigma, beta);
            const simo::CoherenceStats stats{mu, sigma, mu, 0};
            worst_rel = std::max(worst_rel, std::abs(u - best) / std::max(1e-300, u));
            worst_arg = std::max(worst_arg, std::abs(simo::gamma_opt(stats, beta) - best_g));
        }
        checks.push_back({"prop1-grid (max rel gap, 100 random)", worst_rel, 1e-6,
                          worst_rel <= 1e-6});
        checks.push_back({"gamma-opt-grid (max |argmax gap|)", worst_arg, 2e-4,
                          worst_arg <= 2e-4});
    }

    {  // normal CDF vs adaptive quadrature of the density
        const auto density = [](double t) {
            return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
        };
        double worst = 0.0;
        for (double x : {-0.5, 1.0, 2.3}) {
            const double integral = simpson(density, -10.0, x, 40, 1e-14);
            worst = std::max(worst, std::abs(integral - gauss::normal_cdf(x)));
        }
        checks.push_back({"cdf-quadrature (max |quad - cdf|)", worst, 1e-12, worst <= 1e-12});
    }

    {  // Gauss-Hermite rule reproduces standard normal moments
        const auto rule = gauss::gauss_hermite(32);
        double worst = 0.0;
        const double expected[3] = {1.0, 3.0, 15.0};
        for (int p = 0; p < 3; ++p) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
                const double z = M_SQRT2 * rule.nodes[i];
                acc += rule.weights[i] / std::sqrt(M_PI) * std::pow(z, 2 * (p + 1));
            }
            worst = std::max(worst, std::abs(acc - expected[p]));
        }
        checks.push_back({"gauss-hermite-moments (max |E[z^k] error|, k=2,4,6)", worst, 1e-10,
                          worst <= 1e-10});
    }

    return checks;
}

}  // namespace onebit::scenario
