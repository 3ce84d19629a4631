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

#ifndef AKLT_VERIFY_H
#define AKLT_VERIFY_H

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aklt/circuit.h"
#include "aklt/contraction.h"
#include "aklt/router.h"
#include "aklt/sampler.h"

namespace aklt {

enum class VerifyLevel : uint8_t { Quick, Full };

VerifyLevel verify_level_from_string(const std::string &text);

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    /// Worst observed value and the bound it is compared against.
    double measured = 0;
    double bound = 0;
    double seconds = 0;
    std::string detail;
};

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Full;
    uint64_t seed = 7;
    int jobs = 1;
};

/// First IID stage-1 sample (seeds 0..max_seeds-1) with nonzero probability that routes `circuit`.
std::optional<std::pair<AxisAssignment, Backbone>> first_routable_sample(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit, uint64_t max_seeds,
    const RouterOptions &router);

CheckResult check_povm_completeness();
CheckResult check_reduced_density();
CheckResult check_widgets();
CheckResult check_cnot_assembly();
CheckResult check_renormalization();
CheckResult check_decoupling();
CheckResult check_stage1_statistics();
CheckResult check_percolation(uint64_t seed, int jobs);
CheckResult check_hamiltonian();
CheckResult check_correlation_decay();

/// Runs the checks of `level` in criterion order; Quick skips decoupling and percolation.
std::vector<CheckResult> run_verification(
    const VerifyOptions &options, const std::function<void(const CheckResult &)> &on_result = {});

/// One line: PASS or FAIL, criterion, name, detail and wall time.
std::string format_check(const CheckResult &r);

/// {"format_version": 1, "level", "passed", "failed", "checks": [...]}; wall times are left out.
std::string verification_to_json(VerifyLevel level, const std::vector<CheckResult> &results);

}  // namespace aklt

#endif
