// SPDX-License-Identifier: Apache-2.0
#include "onebit/simo_lowsnr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "onebit/linalg.hpp"

namespace onebit::simo {

namespace {

constexpr double kTailTol = 1e-10;
constexpr int kTailRun = 32;  // consecutive sub-tolerance terms that end the sum

double quantized_scale(double rho) {
    const double f = 2.0 / M_PI * rho;
    return f * f;
}

}  // namespace

CoherenceStats coherence_stats(const channel::SimoSpec& spec, int horizon_n) {
    spec.validate();
    if (horizon_n < 1) {
        throw std::invalid_argument("coherence_stats: horizon must be >= 1");
    }
    // The proof's (sum_t alpha_t)^2 prefactor; spec validation pins it to 1,
    // carried here so unnormalized profiles cannot slip through silently.
    double alpha_sum = 0.0;
    for (double a : spec.delay_profile) {
        alpha_sum += a;
    }
    const double profile_factor = alpha_sum * alpha_sum;

    const double tr_r2 = spec.rx_corr.squaredNorm();  // tr(R^2), R Hermitian
    const double sigma = 0.5 * nondiag(spec.rx_corr).squaredNorm();

    double tail_sum = 0.0;
    int small_run = 0;
    bool settled = false;
    for (int k = 1; k <= spec.autocorr_horizon; ++k) {
        const double rk = spec.autocorr(k);
        const double term = rk * rk;
        tail_sum += term;
        small_run = term < kTailTol ? small_run + 1 : 0;
        if (small_run >= kTailRun) {
            settled = true;
            break;
        }
    }
    if (!settled) {
        throw std::runtime_error(
            "coherence_stats: sum of r(k)^2 did not settle within the truncation horizon "
            "(square-summability violated?)");
    }

    double weighted = 0.0;
    for (int k = 1; k < horizon_n; ++k) {
        const double rk = spec.autocorr(k);
        weighted += (1.0 - static_cast<double>(k) / horizon_n) * rk * rk;
    }

    CoherenceStats stats;
    stats.mu = profile_factor * tr_r2 * tail_sum;
    stats.sigma = profile_factor * sigma;
    stats.mu_n = profile_factor * tr_r2 * weighted;
    stats.horizon = horizon_n;
    return stats;
}

double prop1_u(double mu, double sigma, double beta) {
    if (!(beta >= 1.0)) {
        throw std::invalid_argument("prop1_u: beta must be >= 1");
    }
    if (mu < 0.0 || sigma < 0.0) {
        throw std::invalid_argument("prop1_u: statistics must be nonnegative");
    }
    if (sigma == 0.0 || beta * (mu + sigma) >= 2.0 * sigma) {
        return beta * mu + (beta - 1.0) * sigma;
    }
    const double s = mu + sigma;
    return beta * beta * s * s / (4.0 * sigma);
}

RateReport prop1_upper_bound(const CoherenceStats& stats, double beta, double rho) {
    if (rho < 0.0) {
        throw std::invalid_argument("prop1_upper_bound: SNR must be nonnegative");
    }
    const double value = quantized_scale(rho) * prop1_u(stats.mu, stats.sigma, beta);
    return RateReport{value, 0.0, Method::upper_bound_prop1, rho, /*per_block=*/false};
}

double gamma_opt(const CoherenceStats& stats, double beta) {
    if (!(beta >= 1.0)) {
        throw std::invalid_argument("gamma_opt: beta must be >= 1");
    }
    if (stats.sigma == 0.0) {
        return 1.0;
    }
    return std::min(1.0, beta * (stats.mu + stats.sigma) / (2.0 * stats.sigma));
}

double iid_objective_max(double mu_n, double sum_alpha_sq, double sigma, double beta) {
    // f(g) = a g^2 + b g on [0,1] with a = mu_n sum_alpha_sq - sigma, b = beta sigma.
    const double a = mu_n * sum_alpha_sq - sigma;
    const double b = beta * sigma;
    if (a >= 0.0) {
        return a + b;  // increasing on [0,1]
    }
    const double interior = -b / (2.0 * a);
    const double g = std::min(1.0, interior);
    return a * g * g + b * g;
}

RateReport iid_rate(const channel::SimoSpec& spec, const CoherenceStats& stats, double beta,
                    double rho, int horizon_n) {
    if (!(beta >= 1.0)) {
        throw std::invalid_argument("iid_rate: beta must be >= 1");
    }
    if (rho < 0.0) {
        throw std::invalid_argument("iid_rate: SNR must be nonnegative");
    }
    const CoherenceStats at_horizon =
        stats.horizon == horizon_n ? stats : coherence_stats(spec, horizon_n);
    double sum_alpha_sq = 0.0;
    for (double a : spec.delay_profile) {
        sum_alpha_sq += a * a;
    }
    const double value = quantized_scale(rho) *
                         iid_objective_max(at_horizon.mu_n, sum_alpha_sq, at_horizon.sigma, beta);
    return RateReport{value, 0.0, Method::iid_closed_form, rho, /*per_block=*/false};
}

RatioRow ratio_point(double mu, double sigma, int taps, double beta) {
    if (taps < 1) {
        throw std::invalid_argument("ratio_point: taps must be >= 1");
    }
    RatioRow row;
    row.sigma_over_mu = mu > 0.0 ? sigma / mu : std::numeric_limits<double>::infinity();
    row.taps = taps;
    row.beta = beta;
    const double upper = prop1_u(mu, sigma, beta);
    if (upper <= 0.0) {
        row.valid = false;
        row.ratio = 0.0;
        return row;
    }
    const double sum_alpha_sq = 1.0 / taps;  // uniform delay profile
    row.ratio = iid_objective_max(mu, sum_alpha_sq, sigma, beta) / upper;
    return row;
}

std::vector<RatioRow> ratio_sweep(const std::vector<double>& sigma_over_mu,
                                  const std::vector<int>& taps_list, double beta) {
    std::vector<RatioRow> rows;
    rows.reserve(sigma_over_mu.size() * taps_list.size());
    for (double s : sigma_over_mu) {
        if (!(s > 0.0)) {
            throw std::invalid_argument("ratio_sweep: sigma/mu grid must be positive");
        }
        for (int taps : taps_list) {
            RatioRow row = ratio_point(1.0, s, taps, beta);
            row.sigma_over_mu = s;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace onebit::simo
