// Copyright 2026 The aklt-mqc Authors
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

#include "aklt/contraction.h"
#include "aklt/tensors.h"
#include "benchmark/benchmark.h"

using namespace aklt;

static void contraction_build_state(benchmark::State &state) {
    HexLattice lat = build_lattice(2, (int)state.range(0));
    auto term = BoundaryTermination::fixed();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_state(lat, term));
    }
}
BENCHMARK(contraction_build_state)->Arg(2)->Arg(4)->Arg(6);

static void contraction_strip_reduced_density(benchmark::State &state) {
    HexLattice lat = build_lattice(2, (int)state.range(0));
    auto term = BoundaryTermination::traced();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_density(lat, term, SiteId{0, 1}, Engine::Strip));
    }
}
BENCHMARK(contraction_strip_reduced_density)->Arg(4)->Arg(8)->Arg(16);

static void contraction_strip_correlator(benchmark::State &state) {
    HexLattice lat = build_lattice((int)state.range(0), 8);
    auto term = BoundaryTermination::traced();
    std::vector<std::optional<Mat4>> ops(lat.num_sites());
    ops[lat.index(SiteId{0, 1})] = spin_operator(Axis::Z);
    ops[lat.index(SiteId{0, 6})] = spin_operator(Axis::Z);
    for (auto _ : state) {
        benchmark::DoNotOptimize(operator_expectation(lat, term, ops, Engine::Strip));
    }
}
BENCHMARK(contraction_strip_correlator)->Arg(2)->Arg(3)->Arg(4);
