// SPDX-License-Identifier: Apache-2.0
#include "onebit/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace onebit::channel {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kPowerTol = 1e-12;

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    RealVector lam = es.eigenvalues();
    const double scale = std::max(1.0, lam.size() ? lam.cwiseAbs().maxCoeff() : 1.0);
    if (lam.size() && lam.minCoeff() < -1e-10 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix not PSD");
    }
    lam = lam.cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

SignPattern SignPattern::from_index(int n_rx, std::uint32_t code) {
    if (n_rx < 1 || n_rx > 15) {
        throw std::invalid_argument("SignPattern: n_rx out of range");
    }
    SignPattern p;
    p.components.resize(n_rx);
    for (int i = 0; i < n_rx; ++i) {
        const double re = (code >> i) & 1u ? 1.0 : -1.0;
        const double im = (code >> (n_rx + i)) & 1u ? 1.0 : -1.0;
        p.components[i] = std::complex<double>(re, im);
    }
    return p;
}

std::uint32_t SignPattern::index() const {
    const int n = size();
    std::uint32_t code = 0;
    for (int i = 0; i < n; ++i) {
        if (components[i].real() > 0.0) {
            code |= 1u << i;
        }
        if (components[i].imag() > 0.0) {
            code |= 1u << (n + i);
        }
    }
    return code;
}

std::vector<int> SignPattern::real_signs() const {
    const int n = size();
    std::vector<int> s(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        s[i] = components[i].real() > 0.0 ? 1 : -1;
        s[n + i] = components[i].imag() > 0.0 ? 1 : -1;
    }
    return s;
}

std::vector<SignPattern> all_sign_patterns(int n_rx) {
    const std::int64_t count = pattern_count(n_rx);
    std::vector<SignPattern> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t code = 0; code < count; ++code) {
        out.push_back(SignPattern::from_index(n_rx, static_cast<std::uint32_t>(code)));
    }
    return out;
}

std::int64_t pattern_count(int n_rx) {
    if (n_rx < 1 || n_rx > 15) {
        throw std::invalid_argument("pattern_count: n_rx out of range");
    }
    return std::int64_t{1} << (2 * n_rx);
}

ComplexMatrix InputEnsemble::mean_outer() const {
    const int n = dim();
    ComplexMatrix q = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        q.noalias() += probs[k] * (symbols[k] * symbols[k].adjoint());
    }
    return q;
}

int InputEnsemble::sample_index(Rng& rng) const {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u <= acc) {
            return static_cast<int>(k);
        }
    }
    return static_cast<int>(probs.size()) - 1;
}

void InputEnsemble::validate() const {
    if (symbols.empty() || symbols.size() != probs.size()) {
        throw std::invalid_argument("InputEnsemble: symbols/probs size mismatch");
    }
    const int n = dim();
    double mass = 0.0;
    double mean_energy = 0.0;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        if (static_cast<int>(symbols[k].size()) != n) {
            throw std::invalid_argument("InputEnsemble: inconsistent symbol dimension");
        }
        if (probs[k] < 0.0) {
            throw std::invalid_argument("InputEnsemble: negative probability");
        }
        mass += probs[k];
        mean_energy += probs[k] * symbols[k].squaredNorm();
        for (int i = 0; i < n; ++i) {
            if (std::norm(symbols[k][i]) > peak_power + kPowerTol) {
                throw std::invalid_argument("InputEnsemble: peak power constraint violated");
            }
        }
    }
    if (std::abs(mass - 1.0) > kProbTol) {
        throw std::invalid_argument("InputEnsemble: probabilities must sum to 1");
    }
    if (mean_energy / n > avg_power + kPowerTol) {
        throw std::invalid_argument("InputEnsemble: average power constraint violated");
    }
}

ChannelLaw block_fading_siso(int block_len) {
    if (block_len < 1) {
        throw std::invalid_argument("block_fading_siso: block length must be >= 1");
    }
    ChannelLaw law;
    law.n_rx = block_len;
    law.n_tx = block_len;
    law.cond_cov = [](const ComplexVector& x) -> ComplexMatrix {
        return x * x.adjoint();
    };
    law.sample_h = [block_len](Rng& rng) -> ComplexMatrix {
        const std::complex<double> h(rng.normal() * M_SQRT1_2, rng.normal() * M_SQRT1_2);
        return h * ComplexMatrix::Identity(block_len, block_len);
    };
    law.h_param_dim = 2;
    law.h_from_param = [block_len](const RealVector& g) -> ComplexMatrix {
        const std::complex<double> h(g[0] * M_SQRT1_2, g[1] * M_SQRT1_2);
        return h * ComplexMatrix::Identity(block_len, block_len);
    };
    return law;
}

void SimoSpec::validate() const {
    if (n_rx < 1) {
        throw std::invalid_argument("SimoSpec: N must be >= 1");
    }
    if (taps < 1 || static_cast<int>(delay_profile.size()) != taps) {
        throw std::invalid_argument("SimoSpec: delay profile must have T entries");
    }
    if (rx_corr.rows() != n_rx || rx_corr.cols() != n_rx) {
        throw std::invalid_argument("SimoSpec: R must be N x N");
    }
    if (!is_hermitian(rx_corr)) {
        throw std::invalid_argument("SimoSpec: R must be Hermitian");
    }
    if (std::abs(rx_corr.trace().real() - n_rx) > 1e-9 ||
        std::abs(rx_corr.trace().imag()) > 1e-9) {
        throw std::invalid_argument("SimoSpec: tr(R) must equal N");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rx_corr, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("SimoSpec: R must be PSD");
    }
    if (!autocorr) {
        throw std::invalid_argument("SimoSpec: autocorrelation function missing");
    }
    if (std::abs(autocorr(0) - 1.0) > 1e-12) {
        throw std::invalid_argument("SimoSpec: r(0) must equal 1");
    }
    double alpha_sum = 0.0;
    for (double a : delay_profile) {
        if (a < 0.0) {
            throw std::invalid_argument("SimoSpec: delay profile entries must be nonnegative");
        }
        alpha_sum += a;
    }
    if (std::abs(alpha_sum - 1.0) > kProbTol) {
        throw std::invalid_argument("SimoSpec: delay profile must sum to 1");
    }
    if (autocorr_horizon < 1) {
        throw std::invalid_argument("SimoSpec: autocorrelation horizon must be >= 1");
    }
}

ChannelLaw simo_block_law(const SimoSpec& spec, int block_len) {
    spec.validate();
    if (block_len <= spec.taps) {
        throw std::invalid_argument("simo_block_law: block length must exceed tap count");
    }
    const int n = block_len;
    const int nr = spec.n_rx;
    const int taps = spec.taps;
    const ComplexMatrix rx_corr = spec.rx_corr;
    const std::vector<double> alpha = spec.delay_profile;
    const auto r_of = spec.autocorr;

    ChannelLaw law;
    law.n_rx = nr * n;
    law.n_tx = n;
    law.cond_cov = [n, nr, taps, rx_corr, alpha, r_of](const ComplexVector& x) -> ComplexMatrix {
        if (static_cast<int>(x.size()) != n) {
            throw std::invalid_argument("simo_block_law: input length mismatch");
        }
        // Temporal factor: s(k,k') = sum_t alpha_t x_{k-t} conj(x_{k'-t}), cyclic.
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            for (int kp = 0; kp < n; ++kp) {
                std::complex<double> acc = 0.0;
                for (int t = 0; t < taps; ++t) {
                    const int a = ((k - t) % n + n) % n;
                    const int b = ((kp - t) % n + n) % n;
                    acc += alpha[t] * x[a] * std::conj(x[b]);
                }
                s(k, kp) = acc * r_of(std::abs(k - kp));
            }
        }
        ComplexMatrix cov(nr * n, nr * n);
        for (int k = 0; k < n; ++k) {
            for (int kp = 0; kp < n; ++kp) {
                cov.block(k * nr, kp * nr, nr, nr) = s(k, kp) * rx_corr;
            }
        }
        return cov;
    };

    // Sampler: h[t] = sqrt(alpha_t) R^{1/2} W_t Cr^{1/2} with W_t iid CN(0,1),
    // assembled into the block-cyclic H.
    const ComplexMatrix r_half = hermitian_sqrt(rx_corr, "simo_block_law");
    RealMatrix temporal(n, n);
    for (int k = 0; k < n; ++k) {
        for (int kp = 0; kp < n; ++kp) {
            temporal(k, kp) = r_of(std::abs(k - kp));
        }
    }
    const ComplexMatrix cr_half =
        hermitian_sqrt(temporal.cast<std::complex<double>>(), "simo_block_law");

    law.sample_h = [n, nr, taps, alpha, r_half, cr_half](Rng& rng) -> ComplexMatrix {
        std::vector<ComplexMatrix> h(taps);
        ComplexMatrix w(nr, n);
        for (int t = 0; t < taps; ++t) {
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < nr; ++i) {
                    w(i, k) = std::complex<double>(rng.normal(), rng.normal()) * M_SQRT1_2;
                }
            }
            h[t] = std::sqrt(alpha[t]) * (r_half * w * cr_half);
        }
        ComplexMatrix big = ComplexMatrix::Zero(nr * n, n);
        for (int k = 0; k < n; ++k) {
            for (int c = 0; c < n; ++c) {
                const int t = ((k - c) % n + n) % n;
                if (t < taps) {
                    big.block(k * nr, c, nr, 1) = h[t].col(k);
                }
            }
        }
        return big;
    };
    return law;
}

SignPattern quantize(const ComplexVector& r) {
    SignPattern p;
    p.components.resize(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double re = r[i].real() >= 0.0 ? 1.0 : -1.0;
        const double im = r[i].imag() >= 0.0 ? 1.0 : -1.0;
        p.components[i] = std::complex<double>(re, im);
    }
    return p;
}

InputEnsemble ensemble_qpsk_block(int n) {
    if (n < 1 || n > 6) {
        throw std::invalid_argument("ensemble_qpsk_block: n must be in [1,6]");
    }
    const std::int64_t count = std::int64_t{1} << (2 * n);
    InputEnsemble ens;
    ens.avg_power = 1.0;
    ens.peak_power = 1.0;
    ens.symbols.reserve(static_cast<std::size_t>(count));
    for (std::int64_t code = 0; code < count; ++code) {
        ComplexVector x(n);
        for (int i = 0; i < n; ++i) {
            const double re = (code >> (2 * i)) & 1 ? 1.0 : -1.0;
            const double im = (code >> (2 * i + 1)) & 1 ? 1.0 : -1.0;
            x[i] = std::complex<double>(re, im) * M_SQRT1_2;
        }
        ens.symbols.push_back(std::move(x));
    }
    ens.probs.assign(static_cast<std::size_t>(count), 1.0 / static_cast<double>(count));
    ens.validate();
    return ens;
}

InputEnsemble ensemble_oofsk(int n, double beta, double gamma, int frequencies) {
    if (n < 2) {
        throw std::invalid_argument("ensemble_oofsk: n must be >= 2");
    }
    if (!(beta >= 1.0) || !(gamma >= 0.0) || gamma > 1.0 || gamma / beta > 1.0) {
        throw std::invalid_argument("ensemble_oofsk: invalid (gamma, beta)");
    }
    const int tones = frequencies < 0 ? n - 1 : frequencies;
    if (tones < 1 || tones > n - 1) {
        throw std::invalid_argument("ensemble_oofsk: frequency grid size out of range");
    }
    const double duty = gamma / beta;
    InputEnsemble ens;
    ens.avg_power = gamma;
    ens.peak_power = beta;
    if (duty < 1.0) {
        ens.symbols.push_back(ComplexVector::Zero(n));
        ens.probs.push_back(1.0 - duty);
    }
    const double amp = std::sqrt(beta);
    for (int m = 1; m <= tones; ++m) {
        const double omega = 2.0 * M_PI * m / n;
        ComplexVector x(n);
        for (int k = 0; k < n; ++k) {
            x[k] = amp * std::polar(1.0, omega * k);
        }
        ens.symbols.push_back(std::move(x));
        ens.probs.push_back(duty / tones);
    }
    ens.validate();
    return ens;
}

InputEnsemble ensemble_ternary_iid(int n, double beta, double gamma) {
    if (n < 1 || n > 8) {
        throw std::invalid_argument("ensemble_ternary_iid: n must be in [1,8]");
    }
    if (!(beta >= 1.0) || !(gamma >= 0.0) || gamma > beta || gamma > 1.0) {
        throw std::invalid_argument("ensemble_ternary_iid: invalid (gamma, beta)");
    }
    const double p_on = gamma / (2.0 * beta);
    const double p_off = 1.0 - gamma / beta;
    const double amp = std::sqrt(beta);
    const double levels[3] = {-amp, 0.0, amp};
    const double level_probs[3] = {p_on, p_off, p_on};

    std::int64_t count = 1;
    for (int i = 0; i < n; ++i) {
        count *= 3;
    }
    InputEnsemble ens;
    ens.avg_power = gamma;
    ens.peak_power = beta;
    ens.symbols.reserve(static_cast<std::size_t>(count));
    ens.probs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t code = 0; code < count; ++code) {
        ComplexVector x(n);
        double prob = 1.0;
        std::int64_t rest = code;
        for (int i = 0; i < n; ++i) {
            const int digit = static_cast<int>(rest % 3);
            rest /= 3;
            x[i] = levels[digit];
            prob *= level_probs[digit];
        }
        ens.symbols.push_back(std::move(x));
        ens.probs.push_back(prob);
    }
    ens.validate();
    return ens;
}

}  // namespace onebit::channel
