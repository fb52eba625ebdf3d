// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "onebit/asymptotic.hpp"
#include "onebit/mi_exact.hpp"
#include "onebit/simo_lowsnr.hpp"

using namespace onebit;

namespace {

void bm_mutual_info_exact(benchmark::State& state) {
    const int block = static_cast<int>(state.range(0));
    const auto law = channel::block_fading_siso(block);
    const auto ens = channel::ensemble_qpsk_block(block);
    mi::McSpec mc{10000, 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mi::mutual_info_exact(law, ens, 0.2, mc));
        ++mc.seed;
    }
}

void bm_lower_bound_quadrature(benchmark::State& state) {
    const int block = static_cast<int>(state.range(0));
    const auto law = channel::block_fading_siso(block);
    const auto ens = channel::ensemble_qpsk_block(block);
    mi::QuadratureSpec quad;
    quad.initial_order = 16;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mi::mutual_info_lower_bound(law, ens, 0.2, quad));
    }
}

void bm_theorem1_coefficient(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    channel::SimoSpec spec;
    spec.n_rx = 2;
    spec.taps = 2;
    spec.rx_corr = ComplexMatrix(2, 2);
    spec.rx_corr << 1.0, 0.8, 0.8, 1.0;
    spec.autocorr = [](int k) { return std::pow(0.5, std::abs(k)); };
    spec.delay_profile = {0.6, 0.4};
    const auto law = channel::simo_block_law(spec, n);
    const auto ens = channel::ensemble_oofsk(n, 2.0, 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(asym::theorem1_coefficient(law, ens));
    }
}

}  // namespace

BENCHMARK(bm_mutual_info_exact)->Arg(2)->Arg(3);
BENCHMARK(bm_lower_bound_quadrature)->Arg(2)->Arg(3);
BENCHMARK(bm_theorem1_coefficient)->Arg(8)->Arg(16)->Arg(32);
