// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "onebit/gauss.hpp"

using namespace onebit;

namespace {

gauss::RealCovariance correlated_cov(int n_complex) {
    ComplexMatrix c = ComplexMatrix::Identity(n_complex, n_complex);
    for (int i = 0; i < n_complex; ++i) {
        for (int j = 0; j < n_complex; ++j) {
            if (i != j) {
                c(i, j) = std::complex<double>(0.4, 0.1 * (i - j));
            }
        }
    }
    return gauss::complex_to_real_cov(ComplexMatrix::Identity(n_complex, n_complex) +
                                      0.3 * (c * c.adjoint()));
}

void bm_orthant_mc(benchmark::State& state) {
    const int n_complex = static_cast<int>(state.range(0));
    const auto cov = correlated_cov(n_complex);
    const std::vector<int> signs(static_cast<std::size_t>(2 * n_complex), 1);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauss::orthant_probability(cov, signs, 20000, seed++));
    }
    state.SetItemsProcessed(state.iterations() * 20000);
}

void bm_orthant_qmc(benchmark::State& state) {
    const int n_complex = static_cast<int>(state.range(0));
    const auto cov = correlated_cov(n_complex);
    const std::vector<int> signs(static_cast<std::size_t>(2 * n_complex), 1);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauss::orthant_probability(
            cov, signs, 20000, seed++, gauss::OrthantMethod::genz_qmc));
    }
    state.SetItemsProcessed(state.iterations() * 20000);
}

void bm_orthant_table(benchmark::State& state) {
    const int n_complex = static_cast<int>(state.range(0));
    const auto cov = correlated_cov(n_complex);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauss::orthant_table(cov, 20000, seed++));
    }
    state.SetItemsProcessed(state.iterations() * 20000);
}

}  // namespace

BENCHMARK(bm_orthant_mc)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(bm_orthant_qmc)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(bm_orthant_table)->Arg(2)->Arg(3);
