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

#include "aklt/router.h"
#include "aklt/sampler.h"
#include "benchmark/benchmark.h"

using namespace aklt;

static void router_spanning_probability(benchmark::State &state) {
    int n = (int)state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spanning_probability(n, 2 * n, 0.65, 100, 7));
    }
}
BENCHMARK(router_spanning_probability)->Arg(8)->Arg(16)->Arg(32);

static void router_route_identity(benchmark::State &state) {
    HexLattice lat = build_lattice(8, 16);
    auto term = BoundaryTermination::fixed();
    CircuitSpec circuit = identity_circuit(1);
    uint64_t seed = 0;
    for (auto _ : state) {
        AxisAssignment a = stage1_sample(lat, term, SamplingMode::IID, seed++);
        benchmark::DoNotOptimize(route_assignment(lat, a, circuit, term));
    }
}
BENCHMARK(router_route_identity);
