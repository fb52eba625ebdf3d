// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "onebit/asymptotic.hpp"
#include "onebit/mi_exact.hpp"

using namespace onebit;
using namespace onebit::mi;
using channel::SignPattern;

namespace {

channel::SimoSpec simo_n1(double geo) {
    channel::SimoSpec spec;
    spec.n_rx = 1;
    spec.taps = 1;
    spec.rx_corr = ComplexMatrix::Identity(1, 1);
    spec.autocorr = [geo](int k) { return std::pow(geo, std::abs(k)); };
    spec.delay_profile = {1.0};
    return spec;
}

}  // namespace

TEST_CASE("conditional probability given the channel realization") {
    const auto law = channel::block_fading_siso(2);
    Rng rng(3);
    const ComplexMatrix h = law.sample_h(rng);
    ComplexVector x(2);
    x << std::complex<double>(0.3, -0.7), std::complex<double>(-1.1, 0.2);

    SUBCASE("rho = 0 gives exactly 4^-N for every pattern") {
        for (const auto& y : channel::all_sign_patterns(2)) {
            CHECK(cond_prob_given_x_H(h, x, y, 0.0) == 1.0 / 16.0);
        }
    }

    SUBCASE("single-dimension closed form") {
        const ComplexMatrix identity = ComplexMatrix::Identity(1, 1);
        ComplexVector one(1);
        one << 1.0;  // H x = 1 + 0j
        const SignPattern y = channel::quantize([] {
            ComplexVector v(1);
            v << std::complex<double>(1.0, 1.0);
            return v;
        }());
        // Phi(1 * 1 * sqrt(2 * 0.5)) * Phi(1 * 0 * ...) = Phi(1) * 0.5
        const double expected = gauss::normal_cdf(1.0) * 0.5;
        CHECK(cond_prob_given_x_H(identity, one, y, 0.5) ==
              doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("aligned pattern saturates at high SNR") {
        const ComplexVector hx = h * x;
        const SignPattern y = channel::quantize(hx);
        CHECK(cond_prob_given_x_H(h, x, y, 1e4) > 1.0 - 1e-6);
    }
}

TEST_CASE("conditional probability of a quantized output") {
    const auto law = channel::block_fading_siso(2);
    ComplexVector x(2);
    x << std::complex<double>(M_SQRT1_2, M_SQRT1_2), std::complex<double>(-M_SQRT1_2, 0.0);
    const SignPattern y = SignPattern::from_index(2, 9);

    SUBCASE("rho = 0 is uniform over the 16 patterns") {
        const auto mc = cond_prob_given_x(law, x, y, 0.0, McSpec{200000, 11});
        CHECK(std::abs(mc.value - 1.0 / 16.0) <= 3.0 * mc.std_error);
        // the qmc path integrates the independent-component case exactly
        const auto qmc =
            cond_prob_given_x(law, x, y, 0.0, McSpec{4096, 11, gauss::OrthantMethod::genz_qmc});
        CHECK(qmc.value == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    }

    SUBCASE("scalar channel outputs stay equiprobable at any SNR") {
        const auto scalar = channel::block_fading_siso(1);
        ComplexVector x1(1);
        x1 << std::complex<double>(0.6, -0.8);  // |x|^2 = 1
        for (double rho : {0.1, 1.0}) {
            for (const auto& pattern : channel::all_sign_patterns(1)) {
                const auto est =
                    cond_prob_given_x(scalar, x1, pattern, rho, McSpec{100000, 5});
                CHECK(std::abs(est.value - 0.25) <= 3.0 * est.std_error);
            }
        }
    }
}

TEST_CASE("finite-difference slope agrees with the closed-form derivative") {
    const auto law = channel::block_fading_siso(2);
    ComplexVector x(2);
    x << M_SQRT1_2, M_SQRT1_2;
    const SignPattern y = SignPattern::from_index(2, 0b0011);  // (1+j, 1+j)

    // nondiag(x x^H) has off-diagonal 1/2: y^H P y = 2, derivative 2/(16 pi)
    const double closed = asym::lemma1_derivative(law, x, y);
    CHECK(closed == doctest::Approx(2.0 / (16.0 * M_PI)).epsilon(1e-12));

    const SlopeEstimate fd = cond_prob_slope_fd(law, x, y, 2e-3, 4000000, 17);
    CHECK(std::abs(fd.slope - closed) <= 3.0 * fd.std_error);
    CHECK(fd.p_at_zero == doctest::Approx(1.0 / 16.0).epsilon(0.05));
}

TEST_CASE("exact mutual information by enumeration") {
    SUBCASE("zero SNR gives exactly zero (shared stream)") {
        const auto law = channel::block_fading_siso(2);
        const auto ens = channel::ensemble_qpsk_block(2);
        const auto r = mutual_info_exact(law, ens, 0.0, McSpec{20000, 7});
        CHECK(r.value == 0.0);
        CHECK(r.std_error == 0.0);
        CHECK(r.per_block);
    }

    SUBCASE("scalar block channel carries no information at any SNR") {
        // all unit-power inputs share the same conditional covariance
        const auto law = channel::block_fading_siso(1);
        const auto ens = channel::ensemble_qpsk_block(1);
        for (double rho : {0.3, 1.5}) {
            const auto r = mutual_info_exact(law, ens, rho, McSpec{50000, 13});
            CHECK(r.value == 0.0);
            CHECK(r.std_error == 0.0);
        }
    }

    SUBCASE("bounded by the output alphabet entropy") {
        const auto law = channel::block_fading_siso(2);
        const auto ens = channel::ensemble_qpsk_block(2);
        const auto r = mutual_info_exact(law, ens, 1.0, McSpec{50000, 23});
        CHECK(r.value >= 0.0);
        CHECK(r.value - 3.0 * r.std_error <= 4.0 * std::log(2.0));
    }

    SUBCASE("reproducible per seed") {
        const auto law = channel::block_fading_siso(2);
        const auto ens = channel::ensemble_qpsk_block(2);
        const auto a = mutual_info_exact(law, ens, 0.4, McSpec{20000, 99});
        const auto b = mutual_info_exact(law, ens, 0.4, McSpec{20000, 99});
        CHECK(a.value == b.value);
        const auto c = mutual_info_exact(law, ens, 0.4, McSpec{20000, 100});
        CHECK(a.value != c.value);
    }

    SUBCASE("enumeration budget enforced") {
        const auto law = channel::block_fading_siso(3);
        const auto ens = channel::ensemble_qpsk_block(3);
        ::setenv("ONEBIT_ENUM_BUDGET", "100", 1);
        CHECK_THROWS_AS(mutual_info_exact(law, ens, 0.1, McSpec{1000, 1}),
                        std::invalid_argument);
        ::unsetenv("ONEBIT_ENUM_BUDGET");
        CHECK(enumeration_budget() == std::int64_t{1} << 22);
    }
}

TEST_CASE("conditional probabilities sum to one over the output alphabet") {
    const auto law = channel::block_fading_siso(2);
    ComplexVector x(2);
    x << std::complex<double>(M_SQRT1_2, -M_SQRT1_2), std::complex<double>(0.0, 1.0);
    double sum = 0.0, sum_se = 0.0;
    for (const auto& y : channel::all_sign_patterns(2)) {
        const auto est = cond_prob_given_x(law, x, y, 0.5,
                                           McSpec{20000, Rng::derive(55, y.index())});
        sum += est.value;
        sum_se += est.std_error;
    }
    CHECK(std::abs(sum - 1.0) <= 4.0 * sum_se);
}

TEST_CASE("permutation of receive dimensions leaves mutual information unchanged") {
    const channel::SimoSpec spec = simo_n1(0.6);
    const auto law = channel::simo_block_law(spec, 3);
    const auto ens = channel::ensemble_qpsk_block(3);

    // relabel receive dimensions by a fixed permutation
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
    perm.indices() << 2, 0, 1;
    channel::ChannelLaw permuted = law;
    permuted.cond_cov = [law, perm](const ComplexVector& x) {
        return ComplexMatrix(perm * law.cond_cov(x) * perm.transpose());
    };

    const auto base = mutual_info_exact(law, ens, 0.4, McSpec{60000, 31});
    const auto swapped = mutual_info_exact(permuted, ens, 0.4, McSpec{60000, 32});
    const double combined =
        std::sqrt(base.std_error * base.std_error + swapped.std_error * swapped.std_error);
    CHECK(std::abs(base.value - swapped.value) <= 3.0 * combined);
}

TEST_CASE("chain-rule lower bound") {
    const auto law = channel::block_fading_siso(2);
    const auto ens = channel::ensemble_qpsk_block(2);

    SUBCASE("exactly zero at rho = 0") {
        QuadratureSpec quad;
        quad.initial_order = 8;
        const auto r = mutual_info_lower_bound(law, ens, 0.0, quad);
        CHECK(std::abs(r.value) < 1e-12);
        CHECK(r.std_error == 0.0);
    }

    SUBCASE("below the exact value at positive SNR") {
        for (double rho : {0.2, 0.6}) {
            const auto lb = mutual_info_lower_bound(law, ens, rho, QuadratureSpec{});
            const auto exact = mutual_info_exact(law, ens, rho, McSpec{200000, 77});
            CHECK(lb.value <= exact.value + 3.0 * exact.std_error);
            CHECK(lb.value >= 0.0);
        }
    }

    SUBCASE("unconverged quadrature is detected") {
        QuadratureSpec quad;
        quad.initial_order = 2;
        quad.max_order = 4;
        quad.drift_tol = 1e-12;
        CHECK_THROWS_AS(mutual_info_lower_bound(law, ens, 0.8, quad), std::runtime_error);
    }

    SUBCASE("Monte Carlo fallback over sampled channels") {
        const channel::SimoSpec spec = simo_n1(0.5);
        const auto simo_law = channel::simo_block_law(spec, 2);
        const auto small_ens = channel::ensemble_qpsk_block(2);
        QuadratureSpec quad;
        quad.mc_h_samples = 4000;
        quad.seed = 3;
        const auto lb = mutual_info_lower_bound(simo_law, small_ens, 0.3, quad);
        const auto exact = mutual_info_exact(simo_law, small_ens, 0.3, McSpec{100000, 5});
        CHECK(lb.std_error > 0.0);
        CHECK(lb.value <= exact.value + 3.0 * (exact.std_error + lb.std_error));
        CHECK(lb.value >= -3.0 * lb.std_error);
    }
}
