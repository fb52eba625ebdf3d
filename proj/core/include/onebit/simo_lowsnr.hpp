// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "onebit/channel.hpp"
#include "onebit/report.hpp"

namespace onebit::simo {

/// Temporal and spatial coherence statistics of a SIMO spec:
///   mu    = tr(R^2) sum_{k>=1} r(k)^2          (limiting, truncated sum)
///   sigma = (1/2) tr((nondiag R)^2)
///   mu_n  = tr(R^2) sum_{k=1}^{n-1} (1 - k/n) r(k)^2   (finite horizon n)
struct CoherenceStats {
    double mu = 0.0;
    double sigma = 0.0;
    double mu_n = 0.0;
    int horizon = 0;
};

/// Computes the statistics, truncating the temporal sum once the tail
/// contribution stays below 1e-10 (flags non-square-summable r if the sum
/// has not settled by spec.autocorr_horizon).
CoherenceStats coherence_stats(const channel::SimoSpec& spec, int horizon_n);

/// Peak-constrained limiting bound coefficient
///   U(beta) = beta mu + (beta-1) sigma          if beta (mu+sigma) >= 2 sigma
///           = beta^2 (mu+sigma)^2 / (4 sigma)   otherwise.
/// sigma = 0 always takes the first branch.
double prop1_u(double mu, double sigma, double beta);

/// Per-symbol upper bound (2/pi)^2 rho^2 U(beta).
RateReport prop1_upper_bound(const CoherenceStats& stats, double beta, double rho);

/// Optimal duty parameter gamma_opt = min{1, beta (mu + sigma) / (2 sigma)},
/// with gamma_opt = 1 when sigma = 0.
double gamma_opt(const CoherenceStats& stats, double beta);

/// Closed-form maximum over gamma in [0,1] of
///   gamma^2 mu_n sum_alpha_sq + gamma (beta - gamma) sigma.
double iid_objective_max(double mu_n, double sum_alpha_sq, double sigma, double beta);

/// Per-symbol rate of i.i.d. ternary inputs:
///   (2/pi)^2 rho^2 max_gamma [gamma^2 mu^{(n)} sum_t alpha_t^2
///                             + gamma (beta - gamma) sigma].
RateReport iid_rate(const channel::SimoSpec& spec, const CoherenceStats& stats, double beta,
                    double rho, int horizon_n);

/// iid_rate / prop1_upper_bound at one abstract (mu, sigma) point with a
/// uniform delay profile over `taps` taps; the SNR cancels exactly.
/// valid is false when both statistics vanish (bound is zero).
struct RatioRow {
    double sigma_over_mu = 0.0;
    int taps = 0;
    double beta = 0.0;
    double ratio = 0.0;
    bool valid = true;
};

RatioRow ratio_point(double mu, double sigma, int taps, double beta);

/// Grid sweep of the rate ratio over sigma/mu (limiting statistics, mu
/// normalized to 1) for each tap count; row order follows the input grids.
std::vector<RatioRow> ratio_sweep(const std::vector<double>& sigma_over_mu,
                                  const std::vector<int>& taps_list, double beta);

}  // namespace onebit::simo
