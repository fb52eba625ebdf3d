// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "onebit/linalg.hpp"
#include "onebit/rng.hpp"

namespace onebit::channel {

/// Quantized output: N complex components, each in {+-1 +- j}.
///
/// Packed code layout (used everywhere a pattern indexes a table): bit i is
/// the real-part sign of component i, bit N+i the imaginary-part sign, set
/// when the sign is +. This matches the real-then-imaginary ordering of the
/// covariance embedding.
struct SignPattern {
    ComplexVector components;

    int size() const { return static_cast<int>(components.size()); }

    static SignPattern from_index(int n_rx, std::uint32_t code);
    std::uint32_t index() const;

    /// The 2N real signs, [re_1..re_N, im_1..im_N], each +-1.
    std::vector<int> real_signs() const;
};

/// All 4^n_rx patterns in code order.
std::vector<SignPattern> all_sign_patterns(int n_rx);

/// Number of sign patterns for N receive dimensions (4^N).
std::int64_t pattern_count(int n_rx);

/// Finite input constellation with probability masses and the power
/// constraint levels it was built under (average E||x||^2/n <= avg_power,
/// per-symbol peak |x_k|^2 <= peak_power).
struct InputEnsemble {
    std::vector<ComplexVector> symbols;
    std::vector<double> probs;
    double avg_power = 1.0;
    double peak_power = 1.0;

    int dim() const { return symbols.empty() ? 0 : static_cast<int>(symbols[0].size()); }
    std::size_t size() const { return symbols.size(); }

    /// E[x x^H] over the constellation.
    ComplexMatrix mean_outer() const;

    /// Draw a symbol index according to probs (for empirical tests).
    int sample_index(Rng& rng) const;

    /// Enforces the type invariants; throws on violation.
    void validate() const;
};

/// Distribution of the channel matrix H, exposed through the conditional
/// covariance map x -> E[H x x^H H^H | x] plus a seeded sampler of H
/// realizations. Immutable after construction.
struct ChannelLaw {
    int n_rx = 0;
    int n_tx = 0;
    std::function<ComplexMatrix(const ComplexVector&)> cond_cov;
    std::function<ComplexMatrix(Rng&)> sample_h;

    // Optional low-dimensional parameterization of H by standard normal
    // variables, for quadrature over the fading state (0 = unavailable).
    int h_param_dim = 0;
    std::function<ComplexMatrix(const RealVector&)> h_from_param;
};

/// Block-fading SISO channel over a coherence interval: H = h I_n with
/// h ~ CN(0,1). cond_cov(x) = x x^H.
ChannelLaw block_fading_siso(int block_len);

/// SIMO channel with delay spread and separable receive correlation.
struct SimoSpec {
    int n_rx = 1;                            // N
    int taps = 1;                            // T
    ComplexMatrix rx_corr;                   // R, N x N Hermitian PSD, tr R = N
    std::function<double(int)> autocorr;     // r(k), evaluated at |k|; r(0) = 1
    int autocorr_horizon = 200000;           // K_max for tail sums
    std::vector<double> delay_profile;       // alpha_0..alpha_{T-1}, sums to 1

    void validate() const;
};

/// Block-cyclic law over n symbol periods: receive dimension index k*N + i
/// is antenna i at time k, and
///   cond_cov(x)[(kN+i),(k'N+i')] = R(i,i') r(k-k') sum_t alpha_t x_{k-t} conj(x_{k'-t})
/// with cyclic indexing of the input subscripts. Requires n > T.
ChannelLaw simo_block_law(const SimoSpec& spec, int block_len);

/// Componentwise 1-bit quantizer, sign(0) = +1.
SignPattern quantize(const ComplexVector& r);

/// Uniform i.i.d. QPSK block of length n: symbols {(+-1+-j)/sqrt(2)}^n.
/// n <= 6 (4^n enumeration guard).
InputEnsemble ensemble_qpsk_block(int n);

/// On-off frequency-shift keying: x_k = Z e^{j k Omega} with Z = sqrt(beta)
/// with probability gamma/beta (else 0) and Omega uniform over the first
/// `frequencies` multiples of 2*pi/n starting at 2*pi/n. frequencies <= n-1;
/// pass -1 for the full grid of n-1 tones.
InputEnsemble ensemble_oofsk(int n, double beta, double gamma, int frequencies = -1);

/// I.i.d. symbols from {-sqrt(beta), 0, sqrt(beta)} with P(+-sqrt(beta)) =
/// gamma/(2 beta) each. Constellation enumerates 3^n joint symbols.
InputEnsemble ensemble_ternary_iid(int n, double beta, double gamma);

}  // namespace onebit::channel
