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

#ifndef AKLT_ORACLE_H
#define AKLT_ORACLE_H

#include <functional>
#include <vector>

#include "aklt/circuit.h"
#include "aklt/contraction.h"
#include "aklt/lattice.h"
#include "aklt/logic.h"

namespace aklt {

/// Distribution over readout tuples; index bit w is the bit of wire w.
using Distribution = std::vector<double>;

/// Dense state of up to three logical wires; amplitude index bit w is wire w.
struct LogicalState {
    int num_wires = 1;
    std::vector<cplx> amplitudes;
};

LogicalState reference_state(const CircuitSpec &circuit);

/// Rz = diag(1, e^{i theta}); Rx the same in the +/- basis; CNOT flips the target when the control is 1.
Distribution reference_circuit_sim(const CircuitSpec &circuit);

/// Half the L1 distance. Throws InvalidInput on different lengths.
double tv_distance(const Distribution &p, const Distribution &q);

/// Two spin-3/2 sites: S1.S2 and the total-spin-3 projector (16 x 16, first site slowest).
MatX pair_dot();
MatX spin3_projector();

struct AffineCheck {
    double c = 0;
    double d = 0;
    /// max |f(S.S) - c P3 - d 1| over all entries.
    double residual = 0;
};

/// f(x) = x + 116/243 x^2 + 16/243 x^3 written as c P3 + d.
AffineCheck affine_projector_check();

/// max over bonds of |P3(bond)|G>| / |G|.
double hamiltonian_pair_check(
    const HexLattice &lattice, const BoundaryTermination &term, const ContractionLimits &limits = {});

/// Dense state from explicit singlets and on-site symmetrization (fixed terminations only).
StateVector valence_bond_state(const HexLattice &lattice, const BoundaryTermination &term);

/// <S^a_i S^a_j> - <S^a_i><S^a_j> from the dense normalized state, or from strip contractions
/// when the dense state exceeds the amplitude cap.
double two_point_correlation(
    const HexLattice &lattice, const BoundaryTermination &term, SiteId i, SiteId j, Axis a,
    const ContractionLimits &limits = {});

/// Per-site measurement choices for exhaustive enumeration. variants[s][v][k] is the Kraus map
/// (rows x 4) of outcome k under variant v; a site with one variant and one outcome is a fixed
/// operator (for example a stage-1 POVM element whose rows are summed over).
struct BranchPlan {
    std::vector<std::vector<std::vector<MatX>>> variants;
    /// Variant used at every site given the full outcome vector.
    std::function<std::vector<int>(const std::vector<int> &)> select;
};

struct Branch {
    std::vector<int> outcomes;
    double probability = 0;
};

struct JointDistribution {
    std::vector<Branch> branches;
    /// Sum of the unnormalized branch weights divided by <G|G>.
    double total = 0;
};

/// Enumerates every outcome vector with the variants chosen by `select`. Branch probabilities sum
/// to 1; `total` is their weight relative to <G|G>.
JointDistribution brute_force_joint(
    const HexLattice &lattice, const BoundaryTermination &term, const BranchPlan &plan,
    size_t max_branches = 1000000, const ContractionLimits &limits = {});

/// Branch plan of a compiled protocol: stage-1 POVM elements on unmeasured sites, covectors with
/// both adapted angles on adaptive sites, the replayed adaptation as selector.
BranchPlan protocol_branch_plan(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const MeasurementPlan &plan);

struct DecouplingReport {
    Distribution reference;
    /// Largest TV distance between the corrected readout distribution of a branch and `reference`.
    double max_tv = 0;
    /// Branches of the non-readout outcomes with nonzero weight.
    size_t branches = 0;
    /// Total weight of all enumerated outcomes relative to <G|G>; equals P(assignment).
    double total = 0;
};

/// Enumerates every stage-2 outcome of a routed assignment and compares the corrected readout
/// distribution, conditioned on the non-readout outcomes, with the reference circuit.
DecouplingReport decoupling_check(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const ContractionLimits &limits = {});

}  // namespace aklt

#endif
