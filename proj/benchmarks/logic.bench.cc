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

#include "aklt/logic.h"
#include "aklt/verify.h"
#include "benchmark/benchmark.h"

using namespace aklt;

static void logic_run_protocol(benchmark::State &state) {
    HexLattice lat = build_lattice(2, 6);
    auto term = BoundaryTermination::fixed();
    CircuitSpec circuit;
    circuit.num_wires = 1;
    circuit.gates = {Gate::init(0), Gate::rz(0, 0.5), Gate::rx(0, 1.0), Gate::readout(0)};
    ProtocolOptions o;
    o.router.spacing = 3;
    uint64_t seed = 0;
    for (auto _ : state) {
        o.seed = seed++;
        try {
            benchmark::DoNotOptimize(run_protocol(lat, term, circuit, o));
        } catch (const ProtocolError &) {
        }
    }
}
BENCHMARK(logic_run_protocol);

static void logic_check_widgets(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_widgets());
    }
}
BENCHMARK(logic_check_widgets)->Unit(benchmark::kMillisecond);

static void logic_check_cnot_assembly(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_cnot_assembly());
    }
}
BENCHMARK(logic_check_cnot_assembly)->Unit(benchmark::kMillisecond);
