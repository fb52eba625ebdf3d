// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "onebit/asymptotic.hpp"
#include "onebit/simo_lowsnr.hpp"

using namespace onebit;
using namespace onebit::simo;

namespace {

channel::SimoSpec make_spec(int n_rx, double corr, double geo, int taps = 1,
                            std::vector<double> alpha = {}) {
    channel::SimoSpec spec;
    spec.n_rx = n_rx;
    spec.taps = taps;
    ComplexMatrix r = ComplexMatrix::Constant(n_rx, n_rx, corr);
    r.diagonal().setOnes();
    spec.rx_corr = r;
    if (geo == 0.0) {
        spec.autocorr = [](int k) { return k == 0 ? 1.0 : 0.0; };
    } else {
        spec.autocorr = [geo](int k) { return std::pow(geo, std::abs(k)); };
    }
    if (alpha.empty()) {
        spec.delay_profile.assign(static_cast<std::size_t>(taps), 1.0 / taps);
    } else {
        spec.delay_profile = std::move(alpha);
    }
    return spec;
}

}  // namespace

TEST_CASE("coherence statistics") {
    SUBCASE("identity receive correlation has no spatial term") {
        const auto stats = coherence_stats(make_spec(3, 0.0, 0.5), 16);
        CHECK(stats.sigma == 0.0);
        // tr(R^2) = 3, geometric tail a^2/(1-a^2) = 1/3
        CHECK(stats.mu == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("memoryless fading has no temporal term") {
        const auto stats = coherence_stats(make_spec(2, 0.4, 0.0), 8);
        CHECK(stats.mu == 0.0);
        CHECK(stats.mu_n == 0.0);
        CHECK(stats.sigma == doctest::Approx(0.16).epsilon(1e-12));
    }

    SUBCASE("2x2 geometric closed form and direct summation") {
        const double c = 0.6, a = 0.4;
        const auto stats = coherence_stats(make_spec(2, c, a), 64);
        CHECK(stats.sigma == doctest::Approx(c * c).epsilon(1e-12));
        const double closed = (2.0 + 2.0 * c * c) * a * a / (1.0 - a * a);
        CHECK(stats.mu == doctest::Approx(closed).epsilon(1e-9));

        double direct = 0.0;  // summation oracle
        for (int k = 1; k <= 400; ++k) {
            direct += std::pow(a, 2 * k);
        }
        CHECK(stats.mu == doctest::Approx((2.0 + 2.0 * c * c) * direct).epsilon(1e-9));

        // finite-horizon value by hand for n = 3
        const auto small = coherence_stats(make_spec(2, c, a), 3);
        const double tr_r2 = 2.0 + 2.0 * c * c;
        const double expected =
            tr_r2 * ((1.0 - 1.0 / 3.0) * a * a + (1.0 - 2.0 / 3.0) * std::pow(a, 4));
        CHECK(small.mu_n == doctest::Approx(expected).epsilon(1e-12));
        CHECK(small.horizon == 3);
    }

    SUBCASE("finite-horizon statistic grows monotonically to the limit") {
        const auto spec = make_spec(2, 0.5, 0.6);
        double prev = -1.0;
        double limit = coherence_stats(spec, 2).mu;
        for (int n : {2, 4, 8, 16, 32, 64, 128, 256, 512}) {
            const auto stats = coherence_stats(spec, n);
            CHECK(stats.mu_n >= prev);
            CHECK(stats.mu_n <= stats.mu + 1e-12);
            prev = stats.mu_n;
            limit = stats.mu;
        }
        CHECK(limit - prev < 0.01 * limit);
    }

    SUBCASE("non-square-summable autocorrelation is flagged") {
        channel::SimoSpec spec = make_spec(2, 0.3, 0.0);
        spec.autocorr = [](int) { return 1.0; };  // r(k) = 1 for all k
        spec.autocorr_horizon = 1000;
        CHECK_THROWS_AS(coherence_stats(spec, 8), std::runtime_error);
    }
}

TEST_CASE("peak-constrained bound coefficient") {
    SUBCASE("first branch at beta = 1 when mu dominates") {
        CHECK(prop1_u(2.0, 1.0, 1.0) == doctest::Approx(2.0));
    }

    SUBCASE("second branch when spatial correlation dominates") {
        // mu = 0, beta = 1: condition sigma >= 2 sigma fails, U = sigma/4
        CHECK(prop1_u(0.0, 1.0, 1.0) == doctest::Approx(0.25));
    }

    SUBCASE("branches agree at the switch point") {
        // beta (mu + sigma) = 2 sigma at mu = sigma, beta = 1
        const double first = 1.0 * 1.0 + 0.0 * 1.0;
        const double second = 1.0 * (1.0 + 1.0) * (1.0 + 1.0) / (4.0 * 1.0);
        CHECK(first == doctest::Approx(second));
        CHECK(prop1_u(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    }

    SUBCASE("sigma = 0 takes the first branch") {
        CHECK(prop1_u(1.5, 0.0, 2.0) == doctest::Approx(3.0));
    }

    SUBCASE("nondecreasing in the peak constraint") {
        double prev = 0.0;
        for (double beta = 1.0; beta <= 4.0; beta += 0.05) {
            const double u = prop1_u(0.3, 1.2, beta);
            CHECK(u >= prev - 1e-12);
            prev = u;
        }
    }

    SUBCASE("report carries the quantized scale per symbol") {
        const CoherenceStats stats{0.5, 0.25, 0.5, 0};
        const RateReport r = prop1_upper_bound(stats, 2.0, 0.3);
        const double scale = std::pow(2.0 / M_PI * 0.3, 2);
        CHECK(r.value == doctest::Approx(scale * prop1_u(0.5, 0.25, 2.0)).epsilon(1e-12));
        CHECK_FALSE(r.per_block);
        CHECK(r.method == Method::upper_bound_prop1);
    }
}

TEST_CASE("optimal duty parameter") {
    CHECK(gamma_opt(CoherenceStats{1.0, 0.0, 1.0, 0}, 2.0) == 1.0);
    CHECK(gamma_opt(CoherenceStats{1.0, 1.0, 1.0, 0}, 1.0) == doctest::Approx(1.0));
    CHECK(gamma_opt(CoherenceStats{0.1, 1.0, 0.1, 0}, 1.0) == doctest::Approx(0.55));

    SUBCASE("grid search agreement on random instances") {
        Rng rng(55);
        for (int trial = 0; trial < 50; ++trial) {
            const double mu = 2.0 * rng.uniform01();
            const double sigma = 0.05 + 2.0 * rng.uniform01();
            const double beta = 1.0 + 3.0 * rng.uniform01();
            double best = -1.0, best_g = 0.0;
            for (int gi = 0; gi <= 10000; ++gi) {
                const double g = gi * 1e-4;
                const double v = g * beta * mu + g * (beta - g) * sigma;
                if (v > best) {
                    best = v;
                    best_g = g;
                }
            }
            CHECK(std::abs(gamma_opt(CoherenceStats{mu, sigma, mu, 0}, beta) - best_g) <=
                  2e-4);
            CHECK(std::abs(prop1_u(mu, sigma, beta) - best) <= 1e-6 * std::max(1.0, best));
        }
    }
}

TEST_CASE("iid closed-form maximization") {
    SUBCASE("no spatial correlation pushes the duty to one") {
        CHECK(iid_objective_max(0.8, 0.5, 0.0, 2.0) == doctest::Approx(0.4));
    }

    SUBCASE("grid agreement on random instances") {
        Rng rng(66);
        for (int trial = 0; trial < 50; ++trial) {
            const double mu_n = 2.0 * rng.uniform01();
            const double sum_alpha_sq = 0.1 + 0.9 * rng.uniform01();
            const double sigma = 2.0 * rng.uniform01();
            const double beta = 1.0 + 3.0 * rng.uniform01();
            double best = -1.0;
            for (int gi = 0; gi <= 10000; ++gi) {
                const double g = gi * 1e-4;
                best = std::max(best, g * g * mu_n * sum_alpha_sq + g * (beta - g) * sigma);
            }
            CHECK(iid_objective_max(mu_n, sum_alpha_sq, sigma, beta) ==
                  doctest::Approx(best).epsilon(1e-6));
        }
    }
}

TEST_CASE("iid rate against the upper bound") {
    const double beta = 2.0;

    SUBCASE("feasibility: never exceeds the bound") {
        Rng rng(77);
        for (int trial = 0; trial < 30; ++trial) {
            const auto spec = make_spec(2, 0.2 + 0.7 * rng.uniform01(),
                                        0.1 + 0.8 * rng.uniform01());
            const auto stats = coherence_stats(spec, 32);
            const double rho = 0.05 + rng.uniform01();
            const auto iid = iid_rate(spec, stats, beta, rho, 32);
            const auto upper = prop1_upper_bound(stats, beta, rho);
            CHECK(iid.value <= upper.value * (1.0 + 1e-12));
        }
    }

    SUBCASE("delay spread hurts the iid rate") {
        const auto one_tap = make_spec(2, 0.6, 0.4, 1);
        auto five_tap = make_spec(2, 0.6, 0.4, 5);
        const auto stats1 = coherence_stats(one_tap, 64);
        const auto stats5 = coherence_stats(five_tap, 64);
        const auto r1 = iid_rate(one_tap, stats1, beta, 0.2, 64);
        const auto r5 = iid_rate(five_tap, stats5, beta, 0.2, 64);
        CHECK(r5.value <= r1.value + 1e-15);
    }

    SUBCASE("the SNR cancels exactly in the ratio") {
        const auto spec = make_spec(2, 0.6, 0.4);
        const auto stats = coherence_stats(spec, 64);
        double first_ratio = 0.0;
        bool first = true;
        for (double rho : {0.05, 0.3, 1.0}) {
            const auto iid = iid_rate(spec, stats, beta, rho, 64);
            const auto upper = prop1_upper_bound(stats, beta, rho);
            const double ratio = iid.value / upper.value;
            if (first) {
                first_ratio = ratio;
                first = false;
            } else {
                CHECK(ratio == doctest::Approx(first_ratio).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ratio sweep properties") {
    SUBCASE("approaches one as spatial coherence dominates") {
        const auto rows = ratio_sweep({1000.0}, {1}, 2.0);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].ratio > 0.99);
        CHECK(rows[0].ratio <= 1.0 + 1e-12);
    }

    SUBCASE("more taps never helps, every ratio is at most one") {
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) {
            grid.push_back(std::pow(10.0, -2.0 + 5.0 * i / 40.0));
        }
        const auto rows = ratio_sweep(grid, {1, 5}, 2.0);
        REQUIRE(rows.size() == grid.size() * 2);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& t1 = rows[2 * i];
            const auto& t5 = rows[2 * i + 1];
            CHECK(t1.taps == 1);
            CHECK(t5.taps == 5);
            CHECK(t1.sigma_over_mu == doctest::Approx(grid[i]));
            CHECK(t1.ratio <= 1.0 + 1e-12);
            CHECK(t5.ratio <= t1.ratio + 1e-12);
            CHECK(t1.valid);
        }
    }

    SUBCASE("no temporal coherence makes the ratio one for any tap count") {
        for (int taps : {1, 5}) {
            for (double beta : {1.5, 3.0}) {
                const auto row = ratio_point(0.0, 1.0, taps, beta);
                CHECK(row.valid);
                CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }

    SUBCASE("degenerate statistics are flagged") {
        const auto row = ratio_point(0.0, 0.0, 1, 2.0);
        CHECK_FALSE(row.valid);
    }

    SUBCASE("nonpositive grid rejected") {
        CHECK_THROWS_AS(ratio_sweep({-0.5}, {1}, 2.0), std::invalid_argument);
    }
}

TEST_CASE("finite-block coefficient climbs toward the limiting bound") {
    channel::SimoSpec spec = make_spec(2, 0.9, 0.1, 2, {0.7, 0.3});
    const double beta = 1.5;
    const auto stats = coherence_stats(spec, 64);
    const double g_opt = gamma_opt(stats, beta);
    const double u = prop1_u(stats.mu, stats.sigma, beta);
    CHECK(g_opt < 1.0);  // interior optimum for this geometry

    double prev = -1.0;
    for (int n : {8, 16}) {
        const auto law = channel::simo_block_law(spec, n);
        const auto ens = channel::ensemble_oofsk(n, beta, g_opt);
        const auto coef = asym::theorem1_coefficient(law, ens);
        const double per_symbol_unscaled = 0.5 * (coef.first_term - coef.second_term) / n;
        CHECK(per_symbol_unscaled <= u + 1e-12);
        CHECK(per_symbol_unscaled > prev);
        prev = per_symbol_unscaled;
    }
}
