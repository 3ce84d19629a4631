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

#include "aklt/sampler.h"
#include "benchmark/benchmark.h"

using namespace aklt;

static void sampler_stage1_exact(benchmark::State &state) {
    HexLattice lat = build_lattice(2, (int)state.range(0));
    auto term = BoundaryTermination::fixed();
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stage1_sample(lat, term, SamplingMode::Exact, seed++));
    }
}
BENCHMARK(sampler_stage1_exact)->Arg(4)->Arg(6);

static void sampler_stage1_iid(benchmark::State &state) {
    HexLattice lat = build_lattice(8, 16);
    auto term = BoundaryTermination::fixed();
    uint64_t seed = 0;
    for (auto _ : state) {
        AxisAssignment a = stage1_sample(lat, term, SamplingMode::IID, seed++);
        benchmark::DoNotOptimize(matched_bonds(lat, a));
    }
}
BENCHMARK(sampler_stage1_iid);
