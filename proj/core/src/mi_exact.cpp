// SPDX-License-Identifier: Apache-2.0
#include "onebit/mi_exact.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace onebit::mi {

namespace {

constexpr std::int64_t kDefaultBudget = std::int64_t{1} << 22;

gauss::RealCovariance receive_embedding(const channel::ChannelLaw& law, const ComplexVector& x,
                                        double rho) {
    if (rho < 0.0) {
        throw std::invalid_argument("SNR must be nonnegative");
    }
    const ComplexMatrix cov = ComplexMatrix::Identity(law.n_rx, law.n_rx) + rho * law.cond_cov(x);
    return gauss::complex_to_real_cov(cov);
}

/// Products of per-dimension probabilities over all 2^dims sign codes.
/// probs_plus[j] is the probability that dimension j is positive; entry
/// [code] is the product over j of (bit j set ? probs_plus[j] : 1 - probs_plus[j]).
std::vector<double> product_table(const std::vector<double>& probs_plus) {
    std::vector<double> table(std::size_t{1} << probs_plus.size());
    table[0] = 1.0;
    std::size_t filled = 1;
    for (std::size_t j = 0; j < probs_plus.size(); ++j) {
        const double plus = probs_plus[j];
        const double minus = 1.0 - plus;
        for (std::size_t code = 0; code < filled; ++code) {
            table[filled + code] = table[code] * plus;
            table[code] *= minus;
        }
        filled <<= 1;
    }
    return table;
}

std::vector<double> cond_prob_table_given_h(const ComplexMatrix& h, const ComplexVector& x,
                                            double rho, int n_rx) {
    const ComplexVector hx = h * x;
    const double s = std::sqrt(2.0 * rho);
    std::vector<double> plus(2 * static_cast<std::size_t>(n_rx));
    for (int i = 0; i < n_rx; ++i) {
        plus[i] = gauss::normal_cdf(s * hx[i].real());
        plus[n_rx + i] = gauss::normal_cdf(s * hx[i].imag());
    }
    return product_table(plus);
}

}  // namespace

std::int64_t enumeration_budget() {
    if (const char* env = std::getenv("ONEBIT_ENUM_BUDGET")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::int64_t>(v);
        }
        throw std::runtime_error("ONEBIT_ENUM_BUDGET must be a positive integer");
    }
    return kDefaultBudget;
}

gauss::OrthantEstimate cond_prob_given_x(const channel::ChannelLaw& law, const ComplexVector& x,
                                         const channel::SignPattern& y, double rho,
                                         const McSpec& mc) {
    if (y.size() != law.n_rx) {
        throw std::invalid_argument("cond_prob_given_x: pattern size mismatch");
    }
    const gauss::RealCovariance cov = receive_embedding(law, x, rho);
    return gauss::orthant_probability(cov, y.real_signs(), mc.samples, mc.seed, mc.method);
}

double cond_prob_given_x_H(const ComplexMatrix& h, const ComplexVector& x,
                           const channel::SignPattern& y, double rho) {
    if (rho < 0.0) {
        throw std::invalid_argument("SNR must be nonnegative");
    }
    const ComplexVector hx = h * x;
    if (hx.size() != y.components.size()) {
        throw std::invalid_argument("cond_prob_given_x_H: pattern size mismatch");
    }
    const double s = std::sqrt(2.0 * rho);
    double p = 1.0;
    for (Eigen::Index i = 0; i < hx.size(); ++i) {
        p *= gauss::normal_cdf(y.components[i].real() * hx[i].real() * s);
        p *= gauss::normal_cdf(y.components[i].imag() * hx[i].imag() * s);
    }
    return p;
}

SlopeEstimate cond_prob_slope_fd(const channel::ChannelLaw& law, const ComplexVector& x,
                                 const channel::SignPattern& y, double rho_step,
                                 std::int64_t samples, std::uint64_t seed) {
    if (!(rho_step > 0.0)) {
        throw std::invalid_argument("cond_prob_slope_fd: step must be positive");
    }
    const gauss::RealCovariance at_step = receive_embedding(law, x, rho_step);
    const gauss::RealCovariance at_zero = receive_embedding(law, x, 0.0);
    const gauss::OrthantPair pair =
        gauss::orthant_probability_pair(at_step, at_zero, y.real_signs(), samples, seed);
    SlopeEstimate out;
    out.slope = pair.diff / rho_step;
    out.std_error = pair.diff_std_error / rho_step;
    out.p_at_step = pair.a.value;
    out.p_at_zero = pair.b.value;
    return out;
}

RateReport mutual_info_exact(const channel::ChannelLaw& law, const channel::InputEnsemble& ens,
                             double rho, const McSpec& mc) {
    ens.validate();
    const std::int64_t patterns = channel::pattern_count(law.n_rx);
    const std::int64_t work = patterns * static_cast<std::int64_t>(ens.size());
    if (work > enumeration_budget()) {
        throw std::invalid_argument("mutual_info_exact: enumeration budget exceeded (" +
                                    std::to_string(work) + " > " +
                                    std::to_string(enumeration_budget()) + " pairs)");
    }
    if (mc.samples < 1) {
        throw std::invalid_argument("mutual_info_exact: samples must be >= 1");
    }

    const std::size_t n_x = ens.size();
    const std::size_t n_y = static_cast<std::size_t>(patterns);
    const int dim = 2 * law.n_rx;

    // One standard-normal stream shared by every input symbol (common random
    // numbers): the sampling noise of P(y|x) and P(y) cancels in the MI
    // difference, and the estimate is exactly zero at rho = 0.
    std::vector<RealMatrix> factor(n_x);
    for (std::size_t k = 0; k < n_x; ++k) {
        factor[k] = gauss::covariance_factor(receive_embedding(law, ens.symbols[k], rho).matrix);
    }

    std::vector<std::vector<std::int64_t>> counts(n_x, std::vector<std::int64_t>(n_y, 0));
    {
        Rng rng(mc.seed);
        RealVector xi(dim), z(dim);
        for (std::int64_t s = 0; s < mc.samples; ++s) {
            for (int i = 0; i < dim; ++i) {
                xi[i] = rng.normal();
            }
            for (std::size_t k = 0; k < n_x; ++k) {
                z.noalias() = factor[k] * xi;
                std::size_t code = 0;
                for (int i = 0; i < dim; ++i) {
                    code |= (z[i] >= 0.0 ? std::size_t{1} : std::size_t{0}) << i;
                }
                ++counts[k][code];
            }
        }
    }

    // Weighted counts are accumulated before the single division by the
    // sample count: with dyadic probabilities this keeps P(y) bit-identical
    // to P(y|x) whenever every conditional stream agrees (rho = 0).
    const double n_samples = static_cast<double>(mc.samples);
    std::vector<std::vector<double>> cond(n_x, std::vector<double>(n_y, 0.0));
    std::vector<double> marginal(n_y, 0.0);
    for (std::size_t k = 0; k < n_x; ++k) {
        for (std::size_t y = 0; y < n_y; ++y) {
            cond[k][y] = static_cast<double>(counts[k][y]) / n_samples;
            marginal[y] += ens.probs[k] * static_cast<double>(counts[k][y]);
        }
    }
    for (std::size_t y = 0; y < n_y; ++y) {
        marginal[y] /= n_samples;
    }

    // Plug-in value and the per-sample weights g = ln(P(y|x)/P(y)).
    double value = 0.0;
    std::vector<std::vector<double>> weight(n_x, std::vector<double>(n_y, 0.0));
    for (std::size_t k = 0; k < n_x; ++k) {
        for (std::size_t y = 0; y < n_y; ++y) {
            const double q = cond[k][y];
            if (q <= 0.0) {
                continue;  // 0 ln 0 = 0
            }
            weight[k][y] = std::log(q / marginal[y]);
            value += ens.probs[k] * q * weight[k][y];
        }
    }

    // First-order error propagation: replay the stream, collect the variance
    // of the per-sample statistic W = sum_x p_x g(x, y_x(sample)).
    double var_w = 0.0;
    {
        Rng rng(mc.seed);
        RealVector xi(dim), z(dim);
        double mean_w = 0.0;
        for (std::int64_t s = 0; s < mc.samples; ++s) {
            for (int i = 0; i < dim; ++i) {
                xi[i] = rng.normal();
            }
            double w = 0.0;
            for (std::size_t k = 0; k < n_x; ++k) {
                z.noalias() = factor[k] * xi;
                std::size_t code = 0;
                for (int i = 0; i < dim; ++i) {
                    code |= (z[i] >= 0.0 ? std::size_t{1} : std::size_t{0}) << i;
                }
                w += ens.probs[k] * weight[k][code];
            }
            const double delta = w - mean_w;
            mean_w += delta / static_cast<double>(s + 1);
            var_w += delta * (w - mean_w);
        }
        var_w = mc.samples > 1 ? var_w / static_cast<double>(mc.samples - 1) : 0.0;
    }
    const double se = std::sqrt(var_w / n_samples);

    if (value < -3.0 * se - 1e-12) {
        throw std::runtime_error("mutual_info_exact: estimate negative beyond noise tolerance "
                                 "(Monte Carlo quality failure)");
    }
    return RateReport{value, se, Method::exact_enum, rho, /*per_block=*/true};
}

namespace {

/// Lower-bound evaluation given a fixed set of weighted H realizations.
double lower_bound_for_states(const channel::ChannelLaw& law, const channel::InputEnsemble& ens,
                              double rho, const std::vector<ComplexMatrix>& states,
                              const std::vector<double>& weights) {
    const std::size_t n_y = static_cast<std::size_t>(channel::pattern_count(law.n_rx));
    const std::size_t n_x = ens.size();
    const std::size_t n_h = states.size();

    // Pass 1: inner expectations E_H[P(y|x,.)] and E_x[P(y|.,H)].
    std::vector<std::vector<double>> over_h(n_x, std::vector<double>(n_y, 0.0));
    std::vector<std::vector<double>> over_x(n_h, std::vector<double>(n_y, 0.0));
    for (std::size_t s = 0; s < n_h; ++s) {
        for (std::size_t k = 0; k < n_x; ++k) {
            const std::vector<double> table =
                cond_prob_table_given_h(states[s], ens.symbols[k], rho, law.n_rx);
            for (std::size_t y = 0; y < n_y; ++y) {
                over_h[k][y] += weights[s] * table[y];
                over_x[s][y] += ens.probs[k] * table[y];
            }
        }
    }

    // Pass 2: outer expectation of sum_y P(y|x,H) ln(E_H P / E_x P).
    double bound = 0.0;
    for (std::size_t s = 0; s < n_h; ++s) {
        for (std::size_t k = 0; k < n_x; ++k) {
            const std::vector<double> table =
                cond_prob_table_given_h(states[s], ens.symbols[k], rho, law.n_rx);
            double inner = 0.0;
            for (std::size_t y = 0; y < n_y; ++y) {
                const double p = table[y];
                if (p <= 0.0) {
                    continue;
                }
                inner += p * std::log(over_h[k][y] / over_x[s][y]);
            }
            bound += weights[s] * ens.probs[k] * inner;
        }
    }
    return bound;
}

double lower_bound_quadrature(const channel::ChannelLaw& law, const channel::InputEnsemble& ens,
                              double rho, int order) {
    const gauss::GaussHermite rule = gauss::gauss_hermite(order);
    const int d = law.h_param_dim;
    std::size_t n_nodes = 1;
    for (int i = 0; i < d; ++i) {
        n_nodes *= static_cast<std::size_t>(order);
    }
    const double norm = std::pow(M_PI, -0.5 * d);
    std::vector<ComplexMatrix> states;
    std::vector<double> weights;
    states.reserve(n_nodes);
    weights.reserve(n_nodes);
    RealVector g(d);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < n_nodes; ++flat) {
        double w = norm;
        for (int i = 0; i < d; ++i) {
            g[i] = M_SQRT2 * rule.nodes[idx[static_cast<std::size_t>(i)]];
            w *= rule.weights[idx[static_cast<std::size_t>(i)]];
        }
        states.push_back(law.h_from_param(g));
        weights.push_back(w);
        for (int i = 0; i < d; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < order) {
                break;
            }
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return lower_bound_for_states(law, ens, rho, states, weights);
}

}  // namespace

RateReport mutual_info_lower_bound(const channel::ChannelLaw& law,
                                   const channel::InputEnsemble& ens, double rho,
                                   const QuadratureSpec& quad) {
    ens.validate();
    if (rho < 0.0) {
        throw std::invalid_argument("SNR must be nonnegative");
    }
    if (law.h_param_dim > 0) {
        int order = quad.initial_order;
        double prev = lower_bound_quadrature(law, ens, rho, order);
        while (true) {
            const int next = 2 * order;
            if (next > quad.max_order) {
                throw std::runtime_error(
                    "mutual_info_lower_bound: quadrature order too low (drift above tolerance "
                    "at max order)");
            }
            const double cur = lower_bound_quadrature(law, ens, rho, next);
            if (std::abs(cur - prev) <= quad.drift_tol) {
                return RateReport{cur, 0.0, Method::lower_bound, rho, /*per_block=*/true};
            }
            prev = cur;
            order = next;
        }
    }

    // Monte Carlo fallback over H: independent batches give the error bar.
    if (quad.mc_batches < 2 || quad.mc_h_samples < quad.mc_batches) {
        throw std::invalid_argument("mutual_info_lower_bound: invalid MC fallback settings");
    }
    const std::int64_t per_batch = quad.mc_h_samples / quad.mc_batches;
    std::vector<double> batch_values;
    batch_values.reserve(static_cast<std::size_t>(quad.mc_batches));
    for (int b = 0; b < quad.mc_batches; ++b) {
        Rng rng(Rng::derive(quad.seed, static_cast<std::uint64_t>(b)));
        std::vector<ComplexMatrix> states;
        states.reserve(static_cast<std::size_t>(per_batch));
        for (std::int64_t s = 0; s < per_batch; ++s) {
            states.push_back(law.sample_h(rng));
        }
        const std::vector<double> weights(states.size(), 1.0 / static_cast<double>(per_batch));
        batch_values.push_back(lower_bound_for_states(law, ens, rho, states, weights));
    }
    double mean = 0.0;
    for (double v : batch_values) {
        mean += v;
    }
    mean /= static_cast<double>(batch_values.size());
    double var = 0.0;
    for (double v : batch_values) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(batch_values.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(batch_values.size()));
    return RateReport{mean, se, Method::lower_bound, rho, /*per_block=*/true};
}

}  // namespace onebit::mi
