// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "onebit/linalg.hpp"
#include "onebit/rng.hpp"

namespace onebit::gauss {

/// Standard normal CDF. Saturates cleanly at 0/1 for large |x|.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0,1). Used by the QMC orthant path.
double normal_quantile(double p);

/// Covariance of the real embedding of a circular complex Gaussian vector.
///
/// Dimension is always even: the first half of the coordinates are the real
/// parts, the second half the imaginary parts (this ordering is fixed across
/// the whole library).
struct RealCovariance {
    RealMatrix matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }

    /// Validates symmetry (1e-12 relative), PSD up to -1e-10 eigenvalue
    /// noise, and even dimension.
    static RealCovariance from_matrix(RealMatrix m);
};

/// Real embedding of a Hermitian PSD complex covariance C:
///   (1/2) [[Re C, -Im C], [Im C, Re C]]
/// so that each real component of unit-variance complex noise has variance
/// one half. Rejects non-Hermitian input.
RealCovariance complex_to_real_cov(const ComplexMatrix& c);

struct OrthantEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

enum class OrthantMethod {
    monte_carlo,  // seeded indicator averaging; CLT std_error
    genz_qmc,     // separation-of-variables with randomized Kronecker points
};

/// P(sign(z_i) = signs_i for all i), z ~ N(0, cov), sign(0) := +1.
///
/// signs entries are +-1 and follow the real-then-imaginary ordering of the
/// covariance. Near-singular covariances are handled by clipping eigenvalues
/// below 1e-12 to zero; they never raise.
OrthantEstimate orthant_probability(const RealCovariance& cov, const std::vector<int>& signs,
                                    std::int64_t samples, std::uint64_t seed,
                                    OrthantMethod method = OrthantMethod::monte_carlo);

/// All 2^dim orthant masses from one sample stream (common random numbers).
///
/// prob[code] estimates the orthant whose sign in coordinate i is + when bit
/// i of code is set. Entries sum to one exactly by construction.
struct OrthantTable {
    std::vector<double> prob;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;

    double std_error(std::size_t code) const;
};

OrthantTable orthant_table(const RealCovariance& cov, std::int64_t samples, std::uint64_t seed);

/// Orthant masses of two covariances estimated with the same standard-normal
/// stream; diff = P_a - P_b with the (much smaller) paired std_error.
/// Both covariances must be strictly positive definite.
struct OrthantPair {
    OrthantEstimate a;
    OrthantEstimate b;
    double diff = 0.0;
    double diff_std_error = 0.0;
};

OrthantPair orthant_probability_pair(const RealCovariance& cov_a, const RealCovariance& cov_b,
                                     const std::vector<int>& signs, std::int64_t samples,
                                     std::uint64_t seed);

/// Seeded draws of a circular complex Gaussian with E[z z^H] = C.
/// Eigenvalues below 1e-12 are clipped to zero (rank-deficient C is fine);
/// eigenvalues below -1e-10 raise.
std::vector<ComplexVector> sample_complex_gaussian(const ComplexMatrix& c, int count,
                                                   std::uint64_t seed);

/// Factor A with A A^T = cov (Cholesky when PD, eigen square root with
/// clipping otherwise). Exposed for the common-random-number estimators.
RealMatrix covariance_factor(const RealMatrix& cov);

/// Gauss-Hermite rule for integrals of the form  integral e^{-t^2} f(t) dt.
/// Nodes ascending; weights sum to sqrt(pi).
struct GaussHermite {
    RealVector nodes;
    RealVector weights;
};

GaussHermite gauss_hermite(int order);

}  // namespace onebit::gauss
