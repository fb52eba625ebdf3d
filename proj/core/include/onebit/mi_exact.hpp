// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "onebit/channel.hpp"
#include "onebit/gauss.hpp"
#include "onebit/report.hpp"

namespace onebit::mi {

/// Monte Carlo budget for the orthant evaluations behind the conditional
/// probabilities. One master seed fully determines every estimate.
struct McSpec {
    std::int64_t samples = 200000;
    std::uint64_t seed = 1;
    gauss::OrthantMethod method = gauss::OrthantMethod::monte_carlo;
};

/// Enumeration guard for exact mutual information: |constellation| * 4^N
/// must not exceed this budget. Overridable via the ONEBIT_ENUM_BUDGET
/// environment variable.
std::int64_t enumeration_budget();

/// P(y|x) at SNR rho: the orthant mass of N(0, embed(I + rho cond_cov(x)))
/// under y's sign pattern.
gauss::OrthantEstimate cond_prob_given_x(const channel::ChannelLaw& law, const ComplexVector& x,
                                         const channel::SignPattern& y, double rho,
                                         const McSpec& mc);

/// P(y|x,H): product of per-component normal CDFs, exact (no sampling).
double cond_prob_given_x_H(const ComplexMatrix& h, const ComplexVector& x,
                           const channel::SignPattern& y, double rho);

/// Finite-difference slope of P(y|x; rho) at rho = 0 using common random
/// numbers across the two covariances: [P(y|x;step) - P(y|x;0)] / step.
struct SlopeEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    double p_at_step = 0.0;
    double p_at_zero = 0.0;
};

SlopeEstimate cond_prob_slope_fd(const channel::ChannelLaw& law, const ComplexVector& x,
                                 const channel::SignPattern& y, double rho_step,
                                 std::int64_t samples, std::uint64_t seed);

/// Exact mutual information by full enumeration over the constellation and
/// all 4^N sign patterns. Every P(y|x) table and P(y) are estimated from one
/// shared standard-normal stream (common random numbers), so the sampling
/// noise cancels in the MI difference and the estimate is exactly zero at
/// rho = 0. std_error by first-order propagation of the shared-stream noise.
RateReport mutual_info_exact(const channel::ChannelLaw& law, const channel::InputEnsemble& ens,
                             double rho, const McSpec& mc);

/// Fading-state expectation controls for the chain-rule lower bound. When
/// the law carries a low-dimensional H parameterization, tensorized
/// Gauss-Hermite quadrature is used, starting at `initial_order` per real
/// dimension and doubling until the bound moves by less than `drift_tol`
/// (error if still drifting at `max_order`). Otherwise falls back to seeded
/// Monte Carlo over H with `mc_batches` independent batches for the error
/// estimate.
struct QuadratureSpec {
    int initial_order = 32;
    int max_order = 256;
    double drift_tol = 1e-6;
    std::int64_t mc_h_samples = 16000;
    int mc_batches = 8;
    std::uint64_t seed = 1;
};

/// Chain-rule lower bound on I(x;y):
///   E_{x,H}[ sum_y P(y|x,H) ln( E_H[P(y|x,H)] / E_x[P(y|x,H)] ) ].
RateReport mutual_info_lower_bound(const channel::ChannelLaw& law,
                                   const channel::InputEnsemble& ens, double rho,
                                   const QuadratureSpec& quad);

}  // namespace onebit::mi
