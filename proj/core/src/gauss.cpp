// SPDX-License-Identifier: Apache-2.0
#include "onebit/gauss.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace onebit::gauss {

namespace {

constexpr double kEigClip = 1e-12;    // eigenvalues below this are treated as zero
constexpr double kPsdTol = 1e-10;     // eigenvalues below -kPsdTol reject the matrix
constexpr double kSymTol = 1e-12;     // relative symmetry tolerance

// First primes, sqrt used as Kronecker sequence generators (Richtmyer).
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    }
    // Acklam's rational approximation, then one Halley step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against the erfc-based CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

RealCovariance RealCovariance::from_matrix(RealMatrix m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("RealCovariance: matrix must be square");
    }
    if (m.rows() % 2 != 0 || m.rows() == 0) {
        throw std::invalid_argument("RealCovariance: dimension must be even and positive");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale) {
        throw std::invalid_argument("RealCovariance: matrix not symmetric");
    }
    m = 0.5 * (m + m.transpose().eval());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol * scale) {
        throw std::invalid_argument("RealCovariance: matrix not PSD");
    }
    return RealCovariance{std::move(m)};
}

RealCovariance complex_to_real_cov(const ComplexMatrix& c) {
    if (c.rows() != c.cols()) {
        throw std::invalid_argument("complex_to_real_cov: matrix must be square");
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if (hermitian_asymmetry(c) > kSymTol * scale) {
        throw std::invalid_argument("complex_to_real_cov: matrix not Hermitian");
    }
    const auto n = c.rows();
    RealMatrix re = c.real();
    RealMatrix im = c.imag();
    // Hermitian C has symmetric Re and antisymmetric Im; enforce exactly so
    // the embedding is symmetric to machine precision.
    re = (0.5 * (re + re.transpose().eval())).eval();
    im = (0.5 * (im - im.transpose().eval())).eval();
    RealMatrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = re;
    out.topRightCorner(n, n) = -im;
    out.bottomLeftCorner(n, n) = im;
    out.bottomRightCorner(n, n) = re;
    out *= 0.5;
    return RealCovariance{std::move(out)};
}

RealMatrix covariance_factor(const RealMatrix& cov) {
    Eigen::LLT<RealMatrix> llt(cov);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(cov);
    RealVector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        lam[i] = lam[i] < kEigClip ? 0.0 : lam[i];
    }
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

namespace {

void check_signs(const RealCovariance& cov, const std::vector<int>& signs) {
    if (static_cast<int>(signs.size()) != cov.dim()) {
        throw std::invalid_argument("orthant_probability: signs length must match dimension");
    }
    for (int s : signs) {
        if (s != 1 && s != -1) {
            throw std::invalid_argument("orthant_probability: signs must be +-1");
        }
    }
}

OrthantEstimate orthant_mc(const RealCovariance& cov, const std::vector<int>& signs,
                           std::int64_t samples, std::uint64_t seed) {
    const int d = cov.dim();
    const RealMatrix factor = covariance_factor(cov.matrix);
    Rng rng(seed);
    RealVector xi(d), z(d);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < d; ++i) {
            xi[i] = rng.normal();
        }
        z.noalias() = factor * xi;
        bool match = true;
        for (int i = 0; i < d; ++i) {
            if ((z[i] >= 0.0) != (signs[i] > 0)) {
                match = false;
                break;
            }
        }
        hits += match ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    const double se = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(samples)));
    return OrthantEstimate{p, se, samples, seed};
}

// Genz separation-of-variables over the positive orthant of D cov D, with
// randomized Kronecker point sets (sqrt-prime generators, shifted per batch).
OrthantEstimate orthant_genz(const RealCovariance& cov, const std::vector<int>& signs,
                             std::int64_t samples, std::uint64_t seed) {
    const int d = cov.dim();
    if (d - 1 > static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0]))) {
        throw std::invalid_argument("orthant_probability: qmc path supports dim <= 27");
    }
    RealMatrix flipped = cov.matrix;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            flipped(i, j) *= signs[i] * signs[j];
        }
    }
    // Sequential conditioning needs a full-rank triangular factor; floor the
    // spectrum at the clip level before factoring.
    Eigen::LLT<RealMatrix> llt(flipped);
    RealMatrix low;
    if (llt.info() == Eigen::Success) {
        low = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(flipped);
        RealVector lam = es.eigenvalues().cwiseMax(kEigClip);
        RealMatrix floored =
            es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
        low = Eigen::LLT<RealMatrix>(floored).matrixL();
    }

    const int batches = 12;
    const std::int64_t per_batch = std::max<std::int64_t>(1, samples / batches);
    std::vector<double> gen(d > 1 ? d - 1 : 0);
    for (int k = 0; k < d - 1; ++k) {
        double g = std::sqrt(static_cast<double>(kPrimes[k]));
        gen[k] = g - std::floor(g);
    }

    Rng shift_rng(seed);
    RealVector y(d);
    double mean_of_batches = 0.0;
    double m2 = 0.0;
    for (int b = 0; b < batches; ++b) {
        std::vector<double> shift(gen.size());
        for (auto& sft : shift) {
            sft = shift_rng.uniform01();
        }
        double acc = 0.0;
        for (std::int64_t j = 0; j < per_batch; ++j) {
            double prod = 1.0;
            for (int i = 0; i < d; ++i) {
                double lower = 0.0;
                for (int k = 0; k < i; ++k) {
                    lower -= low(i, k) * y[k];
                }
                lower /= low(i, i);
                const double phi_low = normal_cdf(lower);
                const double pi_mass = 1.0 - phi_low;
                prod *= pi_mass;
                if (prod <= 0.0) {
                    break;
                }
                if (i < d - 1) {
                    double w = static_cast<double>(j + 1) * gen[i] + shift[i];
                    w -= std::floor(w);
                    double u = phi_low + w * pi_mass;
                    u = std::min(std::max(u, 1e-16), 1.0 - 1e-16);
                    y[i] = normal_quantile(u);
                }
            }
            acc += prod;
        }
        const double batch_mean = acc / static_cast<double>(per_batch);
        const double delta = batch_mean - mean_of_batches;
        mean_of_batches += delta / static_cast<double>(b + 1);
        m2 += delta * (batch_mean - mean_of_batches);
    }
    const double var_batches = m2 / static_cast<double>(batches - 1);
    const double se = std::sqrt(std::max(0.0, var_batches / static_cast<double>(batches)));
    const double p = std::min(1.0, std::max(0.0, mean_of_batches));
    return OrthantEstimate{p, se, per_batch * batches, seed};
}

}  // namespace

OrthantEstimate orthant_probability(const RealCovariance& cov, const std::vector<int>& signs,
                                    std::int64_t samples, std::uint64_t seed,
                                    OrthantMethod method) {
    check_signs(cov, signs);
    if (samples < 1) {
        throw std::invalid_argument("orthant_probability: samples must be >= 1");
    }
    switch (method) {
        case OrthantMethod::genz_qmc:
            return orthant_genz(cov, signs, samples, seed);
        case OrthantMethod::monte_carlo:
        default:
            return orthant_mc(cov, signs, samples, seed);
    }
}

double OrthantTable::std_error(std::size_t code) const {
    const double p = prob.at(code);
    return std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(samples)));
}

OrthantTable orthant_table(const RealCovariance& cov, std::int64_t samples, std::uint64_t seed) {
    const int d = cov.dim();
    if (d > 24) {
        throw std::invalid_argument("orthant_table: dimension too large to enumerate orthants");
    }
    if (samples < 1) {
        throw std::invalid_argument("orthant_table: samples must be >= 1");
    }
    const RealMatrix factor = covariance_factor(cov.matrix);
    Rng rng(seed);
    RealVector xi(d), z(d);
    std::vector<std::int64_t> counts(std::size_t{1} << d, 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < d; ++i) {
            xi[i] = rng.normal();
        }
        z.noalias() = factor * xi;
        std::size_t code = 0;
        for (int i = 0; i < d; ++i) {
            code |= (z[i] >= 0.0 ? std::size_t{1} : std::size_t{0}) << i;
        }
        ++counts[code];
    }
    OrthantTable out;
    out.samples = samples;
    out.seed = seed;
    out.prob.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.prob[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
    }
    return out;
}

OrthantPair orthant_probability_pair(const RealCovariance& cov_a, const RealCovariance& cov_b,
                                     const std::vector<int>& signs, std::int64_t samples,
                                     std::uint64_t seed) {
    check_signs(cov_a, signs);
    check_signs(cov_b, signs);
    if (samples < 2) {
        throw std::invalid_argument("orthant_probability_pair: samples must be >= 2");
    }
    Eigen::LLT<RealMatrix> llt_a(cov_a.matrix);
    Eigen::LLT<RealMatrix> llt_b(cov_b.matrix);
    if (llt_a.info() != Eigen::Success || llt_b.info() != Eigen::Success) {
        throw std::invalid_argument(
            "orthant_probability_pair: covariances must be positive definite");
    }
    const RealMatrix fa = llt_a.matrixL();
    const RealMatrix fb = llt_b.matrixL();
    const int d = cov_a.dim();
    if (cov_b.dim() != d) {
        throw std::invalid_argument("orthant_probability_pair: dimension mismatch");
    }
    Rng rng(seed);
    RealVector xi(d), za(d), zb(d);
    std::int64_t hits_a = 0, hits_b = 0;
    double sum_d = 0.0, sum_d2 = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < d; ++i) {
            xi[i] = rng.normal();
        }
        za.noalias() = fa * xi;
        zb.noalias() = fb * xi;
        bool ma = true, mb = true;
        for (int i = 0; i < d; ++i) {
            const bool want = signs[i] > 0;
            ma = ma && ((za[i] >= 0.0) == want);
            mb = mb && ((zb[i] >= 0.0) == want);
        }
        hits_a += ma ? 1 : 0;
        hits_b += mb ? 1 : 0;
        const double diff = (ma ? 1.0 : 0.0) - (mb ? 1.0 : 0.0);
        sum_d += diff;
        sum_d2 += diff * diff;
    }
    const double n = static_cast<double>(samples);
    const double pa = static_cast<double>(hits_a) / n;
    const double pb = static_cast<double>(hits_b) / n;
    OrthantPair out;
    out.a = OrthantEstimate{pa, std::sqrt(std::max(0.0, pa * (1 - pa) / n)), samples, seed};
    out.b = OrthantEstimate{pb, std::sqrt(std::max(0.0, pb * (1 - pb) / n)), samples, seed};
    out.diff = sum_d / n;
    const double var_d = std::max(0.0, sum_d2 / n - out.diff * out.diff);
    out.diff_std_error = std::sqrt(var_d / n);
    return out;
}

std::vector<ComplexVector> sample_complex_gaussian(const ComplexMatrix& c, int count,
                                                   std::uint64_t seed) {
    if (c.rows() != c.cols()) {
        throw std::invalid_argument("sample_complex_gaussian: matrix must be square");
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if (hermitian_asymmetry(c) > kSymTol * scale) {
        throw std::invalid_argument("sample_complex_gaussian: matrix not Hermitian");
    }
    if (count < 0) {
        throw std::invalid_argument("sample_complex_gaussian: count must be >= 0");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c);
    RealVector lam = es.eigenvalues();
    if (lam.size() > 0 && lam.minCoeff() < -kPsdTol * scale) {
        throw std::invalid_argument("sample_complex_gaussian: matrix not PSD");
    }
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        lam[i] = lam[i] < kEigClip ? 0.0 : lam[i];
    }
    const ComplexMatrix factor = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
    const auto n = c.rows();
    Rng rng(seed);
    std::vector<ComplexVector> out;
    out.reserve(static_cast<std::size_t>(count));
    ComplexVector w(n);
    for (int s = 0; s < count; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            w[i] = std::complex<double>(re, im) * M_SQRT1_2;
        }
        out.emplace_back(factor * w);
    }
    return out;
}

GaussHermite gauss_hermite(int order) {
    if (order < 1) {
        throw std::invalid_argument("gauss_hermite: order must be >= 1");
    }
    // Golub-Welsch on the Jacobi matrix of the (physicists') Hermite
    // polynomials: off-diagonals sqrt(k/2), weights sqrt(pi) * v0^2.
    RealMatrix jacobi = RealMatrix::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(static_cast<double>(k) / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(jacobi);
    GaussHermite rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(order);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int k = 0; k < order; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[k] = sqrt_pi * v0 * v0;
    }
    return rule;
}

}  // namespace onebit::gauss
