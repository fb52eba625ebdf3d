// SPDX-License-Identifier: Apache-2.0
#include "onebit/asymptotic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace onebit::asym {

namespace {

/// E_H[H Q H^H] for a Hermitian PSD Q, using only the law's conditional
/// covariance map: the map is linear in x x^H, so decompose Q into
/// eigenvector outer products and sum cond_cov(sqrt(lambda) v).
ComplexMatrix average_law_cov(const channel::ChannelLaw& law, const ComplexMatrix& q) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(q);
    ComplexMatrix out = ComplexMatrix::Zero(law.n_rx, law.n_rx);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()[i];
        if (lam <= 0.0) {
            continue;
        }
        const ComplexVector v = std::sqrt(lam) * es.eigenvectors().col(i);
        out += law.cond_cov(v);
    }
    return out;
}

double hermitian_sq_trace(const ComplexMatrix& a) {
    // tr(A^2) = ||A||_F^2 for Hermitian A.
    return a.squaredNorm();
}

struct TraceTerms {
    double first = 0.0;
    double second = 0.0;
};

TraceTerms trace_terms(const channel::ChannelLaw& law, const channel::InputEnsemble& ens,
                       bool strip_diagonal) {
    ens.validate();
    TraceTerms t;
    for (std::size_t k = 0; k < ens.size(); ++k) {
        if (ens.probs[k] == 0.0) {
            continue;
        }
        ComplexMatrix cov = law.cond_cov(ens.symbols[k]);
        if (!is_hermitian(cov, 1e-10)) {
            throw std::runtime_error("theorem1_coefficient: conditional covariance not Hermitian");
        }
        if (strip_diagonal) {
            cov = nondiag(cov);
        }
        t.first += ens.probs[k] * hermitian_sq_trace(cov);
    }
    ComplexMatrix avg = average_law_cov(law, ens.mean_outer());
    if (strip_diagonal) {
        avg = nondiag(avg);
    }
    t.second = hermitian_sq_trace(avg);
    return t;
}

}  // namespace

QuadraticCoefficient theorem1_coefficient(const channel::ChannelLaw& law,
                                          const channel::InputEnsemble& ens) {
    const TraceTerms t = trace_terms(law, ens, /*strip_diagonal=*/true);
    const double scale = 0.5 * (2.0 / M_PI) * (2.0 / M_PI);
    return QuadraticCoefficient{scale * (t.first - t.second), true, t.first, t.second};
}

QuadraticCoefficient unquantized_coefficient(const channel::ChannelLaw& law,
                                             const channel::InputEnsemble& ens) {
    const TraceTerms t = trace_terms(law, ens, /*strip_diagonal=*/false);
    return QuadraticCoefficient{0.5 * (t.first - t.second), true, t.first, t.second};
}

double lemma1_derivative(const channel::ChannelLaw& law, const ComplexVector& x,
                         const channel::SignPattern& y) {
    if (y.size() != law.n_rx) {
        throw std::invalid_argument("lemma1_derivative: pattern size mismatch");
    }
    const ComplexMatrix stripped = nondiag(law.cond_cov(x));
    const std::complex<double> form = y.components.adjoint() * stripped * y.components;
    if (std::abs(form.imag()) > 1e-10 * std::max(1.0, std::abs(form.real()))) {
        throw std::runtime_error("lemma1_derivative: quadratic form unexpectedly complex");
    }
    const double patterns = std::pow(4.0, law.n_rx);
    return form.real() / (patterns * M_PI);
}

SignIdentity sign_identity_check(const ComplexMatrix& p) {
    if (p.rows() != p.cols()) {
        throw std::invalid_argument("sign_identity_check: matrix must be square");
    }
    const int n = static_cast<int>(p.rows());
    if (n < 1 || n > 4) {
        throw std::invalid_argument("sign_identity_check: dimension must be in [1,4]");
    }
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if (p.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("sign_identity_check: diagonal must be zero");
    }
    if (!is_hermitian(p)) {
        throw std::invalid_argument("sign_identity_check: matrix must be Hermitian");
    }
    SignIdentity out;
    const std::int64_t count = channel::pattern_count(n);
    double lhs = 0.0;
    for (std::int64_t code = 0; code < count; ++code) {
        const channel::SignPattern y =
            channel::SignPattern::from_index(n, static_cast<std::uint32_t>(code));
        const std::complex<double> form = y.components.adjoint() * p * y.components;
        lhs += form.real() * form.real();
    }
    out.lhs = lhs / static_cast<double>(count);
    out.rhs = 4.0 * hermitian_sq_trace(p);
    return out;
}

double moment_condition_check(const channel::InputEnsemble& ens, double epsilon) {
    if (epsilon < 0.0) {
        throw std::invalid_argument("moment_condition_check: epsilon must be nonnegative");
    }
    ens.validate();
    double acc = 0.0;
    for (std::size_t k = 0; k < ens.size(); ++k) {
        double norm4_pow4 = 0.0;
        for (Eigen::Index i = 0; i < ens.symbols[k].size(); ++i) {
            const double re = ens.symbols[k][i].real();
            const double im = ens.symbols[k][i].imag();
            norm4_pow4 += re * re * re * re + im * im * im * im;
        }
        acc += ens.probs[k] * std::pow(norm4_pow4, (4.0 + epsilon) / 4.0);
    }
    return acc;
}

}  // namespace onebit::asym
