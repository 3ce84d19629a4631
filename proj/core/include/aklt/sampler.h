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

#ifndef AKLT_SAMPLER_H
#define AKLT_SAMPLER_H

#include <string>
#include <vector>

#include "aklt/contraction.h"
#include "aklt/lattice.h"

namespace aklt {

/// Stage-1 polarization axis of every site, row-major.
struct AxisAssignment {
    int rows = 0;
    int cols = 0;
    std::vector<Axis> axes;

    Axis at(SiteId s) const {
        return axes[(size_t)s.row * (size_t)cols + (size_t)s.col];
    }
    Axis &at(SiteId s) {
        return axes[(size_t)s.row * (size_t)cols + (size_t)s.col];
    }
    bool operator==(const AxisAssignment &) const = default;
};

AxisAssignment uniform_assignment(const HexLattice &lattice, Axis mu);

enum class SamplingMode : uint8_t { Exact, IID };

SamplingMode sampling_mode_from_string(const std::string &text);
const char *sampling_mode_name(SamplingMode mode);

/// The three polarizing POVM elements as a plan step for one site (outcome k is ALL_AXES[k]).
PlanStep polarizing_step(size_t site);

/// Exact: chain-rule sampling of the POVM on every site in row-major order.
/// IID: every axis drawn uniformly and independently.
AxisAssignment stage1_sample(
    const HexLattice &lattice, const BoundaryTermination &term, SamplingMode mode, uint64_t seed,
    Engine engine = Engine::Auto, const ContractionLimits &limits = {});

/// Exact probability of an assignment (all sites polarized).
double assignment_probability(
    const HexLattice &lattice, const BoundaryTermination &term, const AxisAssignment &assignment,
    Engine engine = Engine::Auto, const ContractionLimits &limits = {});

/// matched[i] is true iff both ends of lattice.bonds[i] have the same axis.
struct MatchedBondSet {
    std::vector<bool> matched;

    size_t count() const;
    bool operator==(const MatchedBondSet &) const = default;
};

MatchedBondSet matched_bonds(const HexLattice &lattice, const AxisAssignment &assignment);

/// Exact probability that a bond is matched: sum over mu of P(both ends polarized along mu).
double matched_bond_probability(
    const HexLattice &lattice, const BoundaryTermination &term, size_t bond, Engine engine = Engine::Auto,
    const ContractionLimits &limits = {});

/// {"format_version": 1, "rows": R, "cols": C, "axes": [["x", "z", ...], ...]}, one array per row.
std::string assignment_to_json(const AxisAssignment &assignment);
AxisAssignment assignment_from_json(const std::string &text);

}  // namespace aklt

#endif
