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

#ifndef AKLT_LOGIC_H
#define AKLT_LOGIC_H

#include <optional>
#include <string>
#include <vector>

#include "aklt/circuit.h"
#include "aklt/contraction.h"
#include "aklt/lattice.h"
#include "aklt/router.h"
#include "aklt/sampler.h"

namespace aklt {

/// Pauli X^x Z^z with the global phase dropped.
struct Byproduct {
    int x = 0;
    int z = 0;

    Byproduct operator^(const Byproduct &o) const {
        return {x ^ o.x, z ^ o.z};
    }
    Byproduct &operator^=(const Byproduct &o) {
        x ^= o.x;
        z ^= o.z;
        return *this;
    }
    bool operator==(const Byproduct &) const = default;
};

/// Byproduct indices of every logical wire.
struct ByproductFrame {
    std::vector<Byproduct> wires;
};

/// Byproduct table of the printed widget geometry: x -> (b^c, 1), y -> (b^c, b^c^1), z -> (1, b^c).
Byproduct byproduct_indices(Axis mu, int b, int c);

/// Byproduct of a complementary site whose logical input and output legs have roles `in` and `out`.
/// `c_eff` is effective_c of the conditioning input.
Byproduct widget_byproduct(LegRole in, LegRole out, Axis mu, int b, int c_eff);

/// The site realizes R(sign * theta): +1 for a bra input leg, -1 for a ket input leg.
int rotation_sign(LegRole in);

/// (-1)^a theta with a the frame index anticommuting with the gate axis (a^x for z, a^z for x).
double adapt_angle(double theta, Byproduct frame, Axis gate_axis);

/// Angle to measure so that a site with input role `in` applies R(theta) after the frame.
double measurement_angle(double theta, Byproduct frame, Axis gate_axis, LegRole in);

/// Index-wise basis vector |label^axis> carried by a bond into a leg.
struct LegState {
    Axis axis = Axis::Z;
    int label = 0;
    bool operator==(const LegState &) const = default;
};

/// Label a standard-measured site with outcome c puts on its leg of role `leg`.
int standard_leg_label(LegRole leg, Axis nu, int c);

/// Byproduct-table c for a conditioning input `label` arriving on a leg of role `cond_leg`.
int effective_c(LegRole cond_leg, Axis nu, int label);

/// Label change of |label^nu> under the Pauli `p`.
int label_flip(Axis nu, Byproduct p);

struct NodeResult {
    LegState out;
    Byproduct pauli;
};

/// Cluster site measured in the complementary basis conditioned on `q`: maps the basis input `p`
/// on leg `in` to a basis output on leg `out`.
NodeResult renormalize_node(
    SiteKind kind, Dir in, Dir out, Dir cond, Axis mu, int b, const LegState &p, const LegState &q);

/// Measurement axis of the site closing a loop: the first axis different from mu in x, y, z order.
Axis loop_zeroth_axis(Axis mu);

/// Output on leg `out` of a site whose other two legs are joined by a ring acting as the Pauli
/// `ring` (composed from the ring sites' byproducts). Empty when the contraction vanishes.
std::optional<LegState> loop_zeroth_output(SiteKind kind, Dir out, Axis mu, int b0, Byproduct ring);

/// Logical map of a z wire entering and leaving a matched ring through sites of outcome b_in and b_out
/// with the ring arcs composing to `arcs`. Requires mu = z, opposite roles of the in and out legs and
/// in and out sites of different kinds.
Byproduct pass_through_loop_byproduct(
    SiteKind kind_in, LegRole in, SiteKind kind_out, LegRole out, Axis mu, int b_in, int b_out, Byproduct arcs);

/// Frame update of a CNOT (control wire 1 above target wire 2) realized by junction outcomes bT, bB
/// and a chain whose site byproducts compose to `chain`.
std::pair<Byproduct, Byproduct> cnot_frame_update(Byproduct w1, Byproduct w2, int b_top, int b_bottom, Byproduct chain);

/// corrected = c ^ frame.x
struct LogicalBit {
    int raw = 0;
    int corrected = 0;
};

struct LogicalOutcome {
    std::vector<LogicalBit> wires;
};

LogicalBit interpret_readout(int c, Byproduct frame);
LogicalOutcome interpret_readout(const std::vector<int> &raw, const ByproductFrame &frame);

enum class BasisKind : uint8_t { None, Standard, Complementary };

struct SiteInstruction {
    BasisKind basis = BasisKind::None;
    /// Polarization axis from stage 1.
    Axis mu = Axis::Z;
    /// Axis of the conditioning input (complementary sites).
    Axis nu = Axis::Z;
    /// Target rotation angle; 0 for identity and cluster sites.
    double theta = 0;
    /// Measured angle depends on earlier outcomes.
    bool adaptive = false;
    /// Gate index for rotation sites, else -1.
    int gate = -1;
    /// Site indices whose outcomes fix the measured angle.
    std::vector<size_t> depends_on;
};

struct MeasurementPlan {
    std::vector<SiteInstruction> sites;
    /// Stage-2 measurement order (site indices): standard, fiducial complementary, then adaptive in gate order.
    std::vector<size_t> order;
    std::vector<RegionNode> nodes;
};

/// Thrown on compile or replay problems; the router should have prevented them.
MeasurementPlan compile_plan(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit);

/// Frame of one wire after a gate.
struct FrameSnapshot {
    size_t gate = 0;
    ByproductFrame frame;
};

struct ReplayResult {
    /// Set when an adaptive site without an outcome was reached; replay stopped there.
    std::optional<size_t> pending_site;
    /// Measurement angle of every adaptive site reached (NaN elsewhere).
    std::vector<double> angles;
    std::vector<FrameSnapshot> history;
    ByproductFrame frame;
    /// Raw readout bits with frame corrections; valid when pending_site is empty.
    LogicalOutcome outcome;
};

/// Walks the circuit with the recorded outcomes (-1 = not measured).
ReplayResult replay(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const MeasurementPlan &plan, const std::vector<int> &outcomes);

/// Physical bra measured at `site` for `outcome` given the measurement angle.
Vec4 instruction_covector(const SiteInstruction &ins, double angle, int outcome);

struct ProtocolOptions {
    SamplingMode mode = SamplingMode::Exact;
    uint64_t seed = 0;
    int max_stage1_attempts = 32;
    RouterOptions router;
    Engine engine = Engine::Auto;
    ContractionLimits limits;
};

struct ProtocolResult {
    AxisAssignment assignment;
    int stage1_attempts = 0;
    Backbone backbone;
    MeasurementPlan plan;
    /// Stage-2 outcome per site (-1 when not measured in stage 2).
    std::vector<int> outcomes;
    /// Measurement angle per complementary site (0 for fiducial ones).
    std::vector<double> angles;
    /// Stage-2 steps in measurement order with their conditional probabilities.
    MeasurementRecord record;
    std::vector<FrameSnapshot> history;
    LogicalOutcome outcome;
};

/// Thrown when stage 1 never yields a routable assignment or stage 2 is inconsistent.
struct RoutingError : ProtocolError {
    RouteFailure failure;
    RoutingError(RouteFailure f, const std::string &what) : ProtocolError(what), failure(f) {
    }
};

/// Stage 1 (sampled per mode, resampled on routing failure), routing, compilation and exact stage 2.
ProtocolResult run_protocol(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const ProtocolOptions &options);

/// Stage 2 for a given assignment and backbone.
ProtocolResult run_stage2(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const AxisAssignment &assignment, const Backbone &backbone, uint64_t seed, Engine engine = Engine::Auto,
    const ContractionLimits &limits = {});

std::string transcript_to_json(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const ProtocolOptions &options, const ProtocolResult &result);

}  // namespace aklt

#endif
