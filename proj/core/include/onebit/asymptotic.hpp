// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "onebit/channel.hpp"
#include "onebit/linalg.hpp"

namespace onebit::asym {

/// Coefficient of rho^2 in the low-SNR expansion of the mutual information,
/// reported per block together with the two trace terms it is built from:
///   kappa = scale * (first_term - second_term)
/// where scale is (1/2)(2/pi)^2 for the quantized channel and 1/2 for the
/// unquantized one.
struct QuadraticCoefficient {
    double kappa = 0.0;
    bool per_block = true;
    double first_term = 0.0;
    double second_term = 0.0;

    double per_symbol(int block_len) const { return kappa / block_len; }
};

/// Quantized-output expansion coefficient:
///   kappa = (1/2)(2/pi)^2 tr{ E[(nondiag E[Hxx^H H^H|x])^2]
///                             - (nondiag E[H E[xx^H] H^H])^2 }.
/// Expectations over x are exact sums over the constellation.
QuadraticCoefficient theorem1_coefficient(const channel::ChannelLaw& law,
                                          const channel::InputEnsemble& ens);

/// Unquantized (soft-output) counterpart: same trace difference without the
/// diagonal removal, kappa = (1/2)(first - second).
QuadraticCoefficient unquantized_coefficient(const channel::ChannelLaw& law,
                                             const channel::InputEnsemble& ens);

/// d P(y|x) / d rho at rho = 0:
///   (1/4^N)(1/pi) y^H nondiag(E[Hxx^H H^H|x]) y.
/// The quadratic form is real for Hermitian argument; its imaginary part is
/// asserted below 1e-10 and discarded.
double lemma1_derivative(const channel::ChannelLaw& law, const ComplexVector& x,
                         const channel::SignPattern& y);

/// Both sides of the output-sum identity for zero-diagonal Hermitian P:
///   lhs = (1/4^N) sum_{y in {+-1+-j}^N} (y^H P y)^2,   rhs = 4 tr(P^2).
/// Enumerates 4^N terms; requires N <= 4 and a zero diagonal.
struct SignIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
};

SignIdentity sign_identity_check(const ComplexMatrix& p);

/// E_x[ ||x||_4^{4+epsilon} ] with ||x||_4^4 = sum over real components to
/// the fourth power. Always finite for finite ensembles; informational
/// check of the expansion's moment hypothesis.
double moment_condition_check(const channel::InputEnsemble& ens, double epsilon);

}  // namespace onebit::asym
