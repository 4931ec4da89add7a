// Copyright 2026 The qbroadcast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qbroadcast/analysis.h"
#include "qbroadcast/broadcast.h"
#include "qbroadcast/cli.h"
#include "qbroadcast/parallel.h"

using namespace qbroadcast;

namespace {

ComplexMatrix broadcast_fixture() {
    return broadcast_density(EntangledInput::from_alpha_sq(0.3), ClonerParameter::make(0.25));
}

SweepConfig sweep_fixture() {
    SweepConfig cfg;
    cfg.xi_grid = parse_grid("0.1464466094067263:0.5:16");
    cfg.alpha_sq_grid = parse_grid("0:1:16");
    cfg.quantities = {Quantity::PptNonlocal, Quantity::PptLocal, Quantity::BellM, Quantity::Fidelity,
                      Quantity::WernerX};
    return cfg;
}

const std::vector<size_t> kCrossPair{0, 4};

void BM_partial_trace(benchmark::State &state) {
    ComplexMatrix rho = broadcast_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_trace(rho, kBroadcastLayout, kCrossPair));
    }
}
BENCHMARK(BM_partial_trace);

void BM_partial_trace_serial(benchmark::State &state) {
    ComplexMatrix rho = broadcast_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::partial_trace(rho, kBroadcastLayout, kCrossPair));
    }
}
BENCHMARK(BM_partial_trace_serial);

void BM_outer_product(benchmark::State &state) {
    auto psi = broadcast_state_vector(EntangledInput::from_alpha_sq(0.3), ClonerParameter::make(0.25));
    for (auto _ : state) {
        benchmark::DoNotOptimize(outer_product(psi));
    }
}
BENCHMARK(BM_outer_product);

void BM_outer_product_serial(benchmark::State &state) {
    auto psi = broadcast_state_vector(EntangledInput::from_alpha_sq(0.3), ClonerParameter::make(0.25));
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::outer_product(psi));
    }
}
BENCHMARK(BM_outer_product_serial);

void BM_filter_search(benchmark::State &state) {
    auto in = EntangledInput::from_alpha_sq(0.2);
    auto p = ClonerParameter::make(1.0 / 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter_search_max_m(in, p, static_cast<size_t>(state.range(0))));
    }
}
BENCHMARK(BM_filter_search)->Arg(31)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_filter_search_serial(benchmark::State &state) {
    auto in = EntangledInput::from_alpha_sq(0.2);
    auto p = ClonerParameter::make(1.0 / 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::filter_search_max_m(in, p, static_cast<size_t>(state.range(0))));
    }
}
BENCHMARK(BM_filter_search_serial)->Arg(31)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_sweep(benchmark::State &state) {
    SweepConfig cfg = sweep_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(cfg));
    }
}
BENCHMARK(BM_sweep)->Unit(benchmark::kMillisecond);

void BM_sweep_serial(benchmark::State &state) {
    SweepConfig cfg = sweep_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::run_sweep(cfg));
    }
}
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char **argv) {
    benchmark::Initialize(&argc, argv);
    benchmark::AddCustomContext("omp_max_threads", std::to_string(parallel::max_threads()));
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
