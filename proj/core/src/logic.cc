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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"

namespace aklt {

Byproduct byproduct_indices(Axis mu, int b, int c) {
    int bc = (b ^ c) & 1;
    switch (mu) {
        case Axis::X:
            return {bc, 1};
        case Axis::Y:
            return {bc, bc ^ 1};
        case Axis::Z:
            return {1, bc};
    }
    return {};
}

Byproduct widget_byproduct(LegRole in, LegRole out, Axis mu, int b, int c_eff) {
    Byproduct p = byproduct_indices(mu, b, c_eff);
    if (in == out) {
        p ^= Byproduct{1, 1};
    }
    return p;
}

int rotation_sign(LegRole in) {
    return in == LegRole::Bra ? 1 : -1;
}

double adapt_angle(double theta, Byproduct frame, Axis gate_axis) {
    if (gate_axis == Axis::Y) {
        throw InvalidInput("adaptation is defined for x and z rotations only");
    }
    int a = gate_axis == Axis::Z ? frame.x : frame.z;
    return a ? -theta : theta;
}

double measurement_angle(double theta, Byproduct frame, Axis gate_axis, LegRole in) {
    return rotation_sign(in) * adapt_angle(theta, frame, gate_axis);
}

int standard_leg_label(LegRole leg, Axis nu, int c) {
    if (leg == LegRole::Ket || nu == Axis::Y) {
        return c;
    }
    return c ^ 1;
}

int effective_c(LegRole cond_leg, Axis nu, int label) {
    if (cond_leg == LegRole::Bra || nu == Axis::Y) {
        return label;
    }
    return label ^ 1;
}

int label_flip(Axis nu, Byproduct p) {
    switch (nu) {
        case Axis::X:
            return p.z;
        case Axis::Y:
            return p.x ^ p.z;
        case Axis::Z:
            return p.x;
    }
    return 0;
}

NodeResult renormalize_node(
    SiteKind kind, Dir in, Dir out, Dir cond, Axis mu, int b, const LegState &p, const LegState &q) {
    if (in == out || in == cond || out == cond) {
        throw InvalidInput("node legs must be distinct");
    }
    if (p.axis == mu || q.axis == mu) {
        throw InvalidInput("node inputs must be unbiased with respect to the node axis");
    }
    int c = effective_c(leg_role(kind, cond), q.axis, q.label);
    NodeResult r;
    r.pauli = widget_byproduct(leg_role(kind, in), leg_role(kind, out), mu, b, c);
    r.out = LegState{p.axis, p.label ^ label_flip(p.axis, r.pauli)};
    return r;
}

Axis loop_zeroth_axis(Axis mu) {
    return mu == Axis::X ? Axis::Y : Axis::X;
}

std::optional<LegState> loop_zeroth_output(SiteKind kind, Dir out, Axis mu, int b0, Byproduct ring) {
    std::vector<Dir> legs;
    for (Dir d : ALL_DIRS) {
        if (d != out) {
            legs.push_back(d);
        }
    }
    bool mixed = leg_role(kind, legs[0]) != leg_role(kind, legs[1]);
    int fixed = mu == Axis::Z ? ring.x : mu == Axis::X ? ring.z : ring.x ^ ring.z;
    int required = mu == Axis::Y ? 1 : (int)mixed;
    if (fixed != required) {
        return std::nullopt;
    }
    Axis nu0 = loop_zeroth_axis(mu);
    int other = mu == Axis::Z ? ring.z : ring.x;
    int kappa = (kind == SiteKind::Bot) ^ (leg_role(kind, out) == LegRole::Bra && nu0 == Axis::Y);
    return LegState{nu0, (b0 ^ other ^ kappa) & 1};
}

Byproduct pass_through_loop_byproduct(
    SiteKind kind_in, LegRole in, SiteKind kind_out, LegRole out, Axis mu, int b_in, int b_out, Byproduct arcs) {
    if (mu != Axis::Z || in == out || kind_in == kind_out) {
        throw InvalidInput(
            "pass-through loops are supported for z rings entered and left on opposite leg roles and sublattices");
    }
    return Byproduct{0, (b_in ^ b_out ^ arcs.z ^ 1) & 1};
}

std::pair<Byproduct, Byproduct> cnot_frame_update(Byproduct w1, Byproduct w2, int b_top, int b_bottom, Byproduct chain) {
    Byproduct n1{w1.x ^ 1, w1.z ^ w2.z ^ b_top ^ chain.z ^ 1};
    Byproduct n2{w1.x ^ w2.x ^ b_bottom ^ chain.x ^ 1, w2.z ^ 1};
    n1.z &= 1;
    n2.x &= 1;
    return {n1, n2};
}

LogicalBit interpret_readout(int c, Byproduct frame) {
    return LogicalBit{c, c ^ frame.x};
}

LogicalOutcome interpret_readout(const std::vector<int> &raw, const ByproductFrame &frame) {
    if (raw.size() != frame.wires.size()) {
        throw InvalidInput("readout count differs from the frame");
    }
    LogicalOutcome out;
    for (size_t w = 0; w < raw.size(); w++) {
        out.wires.push_back(interpret_readout(raw[w], frame.wires[w]));
    }
    return out;
}

Vec4 instruction_covector(const SiteInstruction &ins, double angle, int outcome) {
    switch (ins.basis) {
        case BasisKind::Standard:
            return standard_covector(ins.mu, outcome);
        case BasisKind::Complementary:
            return complementary_covector(ins.mu, ins.nu, angle, outcome).bra;
        case BasisKind::None:
            break;
    }
    throw InvalidInput("site is not measured in stage 2");
}

namespace {

using Deps = std::set<size_t>;

struct TrackedLeg {
    LegState state;
    Deps deps;
};

struct TrackedPauli {
    Byproduct p;
    Deps dx;
    Deps dz;
};

void merge(Deps &into, const Deps &from) {
    into.insert(from.begin(), from.end());
}

bool is_standard_role(SiteRole r) {
    return r == SiteRole::Init || r == SiteRole::Readout || r == SiteRole::Associate;
}

/// Evaluates byproducts along the backbone from recorded outcomes.
class Walker {
   public:
    Walker(
        const HexLattice &lat, const AxisAssignment &asg, const BoundaryTermination &term, const Backbone &bb,
        const CircuitSpec &circuit, const std::vector<RegionNode> &nodes, const std::vector<int> *outcomes)
        : lat_(lat), asg_(asg), term_(term), bb_(bb), circuit_(circuit), nodes_(nodes), outcomes_(outcomes) {
        for (size_t k = 0; k < nodes.size(); k++) {
            node_of_[nodes[k].site] = k;
        }
    }

    const RegionNode &node(SiteId s) const {
        auto it = node_of_.find(s);
        if (it == node_of_.end()) {
            throw ConsistencyError("site " + s.str() + " is not a complementary node");
        }
        return nodes_[it->second];
    }

    int outcome(SiteId s) const {
        if (outcomes_ == nullptr) {
            return 0;
        }
        int v = (*outcomes_)[lat_.index(s)];
        if (v < 0) {
            throw ConsistencyError("outcome of " + s.str() + " is needed before it is measured");
        }
        return v;
    }

    /// Basis input arriving on leg d of site s.
    TrackedLeg leg_input(SiteId s, Dir d) {
        auto n = lat_.neighbor(s, d);
        if (!n) {
            if (term_.mode != BoundaryTermination::Mode::Fixed) {
                throw ConsistencyError("dangling leg of " + s.str() + " has no fixed input");
            }
            auto label = basis_label(term_.vector_for(lat_.index(s), d));
            if (!label) {
                throw ConsistencyError("termination at " + s.str() + " is not a basis vector");
            }
            return TrackedLeg{{label->first, label->second}, {}};
        }
        SiteRole role = bb_.role(*n);
        if (is_standard_role(role)) {
            Axis nu = asg_.at(*n);
            int c = outcome(*n);
            return TrackedLeg{{nu, standard_leg_label(leg_role(lat_.kind(*n), facing(d)), nu, c)}, {lat_.index(*n)}};
        }
        if (role == SiteRole::ClusterExtension) {
            const RegionNode &m = node(*n);
            if (m.out == facing(d)) {
                return cluster_output(*n);
            }
        }
        throw ConsistencyError("leg " + std::string(1, dir_char(d)) + " of " + s.str() + " has no usable input");
    }

    /// Static axis of the input on leg d (no outcomes needed).
    Axis input_axis(SiteId s, Dir d) {
        const std::vector<int> *saved = outcomes_;
        outcomes_ = nullptr;
        Axis a = leg_input(s, d).state.axis;
        outcomes_ = saved;
        return a;
    }

    TrackedLeg cluster_output(SiteId s) {
        auto it = cache_.find(s);
        if (it != cache_.end()) {
            return it->second;
        }
        const RegionNode &m = node(s);
        TrackedLeg p = leg_input(s, m.in);
        TrackedLeg q = leg_input(s, *m.cond);
        NodeResult r = renormalize_node(lat_.kind(s), m.in, m.out, *m.cond, asg_.at(s), outcome(s), p.state, q.state);
        TrackedLeg out{r.out, p.deps};
        merge(out.deps, q.deps);
        out.deps.insert(lat_.index(s));
        cache_[s] = out;
        return out;
    }

    /// Byproduct of a wire or chain site with its conditioning input.
    TrackedPauli site_pauli(SiteId s) {
        const RegionNode &m = node(s);
        if (!m.cond) {
            throw ConsistencyError("site " + s.str() + " has no conditioning leg");
        }
        TrackedLeg q = leg_input(s, *m.cond);
        SiteKind kind = lat_.kind(s);
        int c = effective_c(leg_role(kind, *m.cond), q.state.axis, q.state.label);
        TrackedPauli t;
        t.p = widget_byproduct(leg_role(kind, m.in), leg_role(kind, m.out), asg_.at(s), outcome(s), c);
        t.dx = q.deps;
        t.dx.insert(lat_.index(s));
        t.dz = t.dx;
        return t;
    }

    const HexLattice &lat_;
    const AxisAssignment &asg_;
    const BoundaryTermination &term_;
    const Backbone &bb_;
    const CircuitSpec &circuit_;
    const std::vector<RegionNode> &nodes_;
    const std::vector<int> *outcomes_;
    std::map<SiteId, size_t> node_of_;
    std::map<SiteId, TrackedLeg> cache_;
};

struct WalkResult {
    ReplayResult replay;
    /// Dependencies of each adaptive site's angle.
    std::map<size_t, Deps> adaptive_deps;
};

WalkResult walk(
    const HexLattice &lat, const AxisAssignment &asg, const BoundaryTermination &term, const Backbone &bb,
    const CircuitSpec &circuit, const std::vector<RegionNode> &nodes, const std::vector<int> *outcomes) {
    Walker w(lat, asg, term, bb, circuit, nodes, outcomes);
    WalkResult out;
    ReplayResult &rr = out.replay;
    rr.angles.assign(lat.num_sites(), std::numeric_limits<double>::quiet_NaN());
    int nw = circuit.num_wires;
    std::vector<TrackedPauli> frame(nw);
    std::vector<size_t> pos(nw, 1);
    std::vector<int> raw(nw, 0);
    std::map<size_t, SiteId> rotation_site;
    for (const RotationPlacement &r : bb.rotations) {
        rotation_site[r.gate] = r.site;
    }
    std::map<size_t, const JunctionPlacement *> junction;
    for (const JunctionPlacement &j : bb.junctions) {
        junction[j.gate] = &j;
    }
    auto snapshot = [&](size_t gate) {
        FrameSnapshot s;
        s.gate = gate;
        for (const TrackedPauli &t : frame) {
            s.frame.wires.push_back(t.p);
        }
        rr.history.push_back(s);
    };
    auto apply = [&](int wire, const TrackedPauli &t) {
        frame[wire].p ^= t.p;
        merge(frame[wire].dx, t.dx);
        merge(frame[wire].dz, t.dz);
    };
    auto advance = [&](int wire, SiteId stop) {
        const auto &path = bb.wires.at(wire).sites;
        while (true) {
            if (pos[wire] >= path.size()) {
                throw ConsistencyError("wire " + std::to_string(wire) + " ends before " + stop.str());
            }
            SiteId s = path[pos[wire]];
            if (s == stop) {
                return;
            }
            apply(wire, w.site_pauli(s));
            pos[wire]++;
        }
    };
    for (size_t gi = 0; gi < circuit.gates.size(); gi++) {
        const Gate &g = circuit.gates[gi];
        const auto &path = bb.wires.at(g.wire).sites;
        switch (g.kind) {
            case Gate::Kind::Init: {
                SiteId s = path.front();
                Dir out_leg = direction_to(s, path.at(1));
                int l = standard_leg_label(leg_role(lat.kind(s), out_leg), Axis::Z, w.outcome(s));
                frame[g.wire] = TrackedPauli{{l, 0}, {lat.index(s)}, {}};
                pos[g.wire] = 1;
                break;
            }
            case Gate::Kind::Rz:
            case Gate::Kind::Rx: {
                if (g.is_fiducial()) {
                    break;
                }
                auto it = rotation_site.find(gi);
                if (it == rotation_site.end()) {
                    throw ConsistencyError("rotation " + g.str() + " has no site");
                }
                SiteId s = it->second;
                advance(g.wire, s);
                const RegionNode &m = w.node(s);
                Axis gate_axis = g.rotation_axis();
                size_t k = lat.index(s);
                rr.angles[k] = measurement_angle(g.theta, frame[g.wire].p, gate_axis, leg_role(lat.kind(s), m.in));
                out.adaptive_deps[k] = gate_axis == Axis::Z ? frame[g.wire].dx : frame[g.wire].dz;
                if (outcomes != nullptr && (*outcomes)[k] < 0) {
                    rr.pending_site = k;
                    rr.frame.wires.clear();
                    for (const TrackedPauli &t : frame) {
                        rr.frame.wires.push_back(t.p);
                    }
                    return out;
                }
                apply(g.wire, w.site_pauli(s));
                pos[g.wire]++;
                break;
            }
            case Gate::Kind::Cnot: {
                auto it = junction.find(gi);
                if (it == junction.end()) {
                    throw ConsistencyError("CNOT " + g.str() + " has no junction");
                }
                const JunctionPlacement &j = *it->second;
                advance(j.control, j.top);
                advance(j.target, j.bottom);
                TrackedPauli chain;
                for (SiteId s : j.chain) {
                    TrackedPauli t = w.site_pauli(s);
                    chain.p ^= t.p;
                    merge(chain.dx, t.dx);
                    merge(chain.dz, t.dz);
                }
                TrackedPauli &f1 = frame[j.control];
                TrackedPauli &f2 = frame[j.target];
                auto [n1, n2] = cnot_frame_update(f1.p, f2.p, w.outcome(j.top), w.outcome(j.bottom), chain.p);
                Deps z1 = f1.dz;
                merge(z1, f2.dz);
                merge(z1, chain.dz);
                z1.insert(lat.index(j.top));
                Deps x2 = f1.dx;
                merge(x2, f2.dx);
                merge(x2, chain.dx);
                x2.insert(lat.index(j.bottom));
                f1 = TrackedPauli{n1, f1.dx, z1};
                f2 = TrackedPauli{n2, x2, f2.dz};
                pos[j.control]++;
                pos[j.target]++;
                break;
            }
            case Gate::Kind::Readout: {
                SiteId s = path.back();
                advance(g.wire, s);
                Dir in_leg = direction_to(s, path[path.size() - 2]);
                if (leg_role(lat.kind(s), in_leg) == LegRole::Bra) {
                    frame[g.wire].p.x ^= 1;
                }
                raw[g.wire] = w.outcome(s);
                break;
            }
        }
        snapshot(gi);
    }
    for (const TrackedPauli &t : frame) {
        rr.frame.wires.push_back(t.p);
    }
    rr.outcome = interpret_readout(raw, rr.frame);
    return out;
}

}  // namespace

MeasurementPlan compile_plan(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit) {
    circuit.validate();
    std::vector<AuditIssue> issues = audit_backbone(lattice, assignment, term, backbone, circuit);
    if (!issues.empty()) {
        throw InvalidInput("backbone is invalid for this circuit: " + issues.front().message);
    }
    MeasurementPlan plan;
    plan.nodes = region_nodes(lattice, backbone);
    plan.sites.assign(lattice.num_sites(), SiteInstruction{});
    Walker w(lattice, assignment, term, backbone, circuit, plan.nodes, nullptr);
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        SiteId s = lattice.site(k);
        SiteInstruction &ins = plan.sites[k];
        ins.mu = assignment.axes[k];
        SiteRole role = backbone.role(s);
        if (is_standard_role(role)) {
            ins.basis = BasisKind::Standard;
            ins.nu = ins.mu;
        }
    }
    for (const RegionNode &n : plan.nodes) {
        SiteInstruction &ins = plan.sites[lattice.index(n.site)];
        ins.basis = BasisKind::Complementary;
        if (n.role == NodeRole::Junction) {
            ins.nu = lattice.kind(n.site) == SiteKind::Top ? Axis::X : Axis::Z;
        } else {
            ins.nu = w.input_axis(n.site, *n.cond);
        }
        if (ins.nu == ins.mu) {
            throw ConsistencyError("conditioning input of " + n.site.str() + " is not unbiased");
        }
    }
    for (const RotationPlacement &r : backbone.rotations) {
        SiteInstruction &ins = plan.sites[lattice.index(r.site)];
        ins.theta = circuit.gates[r.gate].theta;
        ins.gate = (int)r.gate;
        ins.adaptive = true;
    }
    WalkResult dry = walk(lattice, assignment, term, backbone, circuit, plan.nodes, nullptr);
    for (auto &[k, deps] : dry.adaptive_deps) {
        plan.sites[k].depends_on.assign(deps.begin(), deps.end());
    }
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        if (plan.sites[k].basis == BasisKind::Standard) {
            plan.order.push_back(k);
        }
    }
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        if (plan.sites[k].basis == BasisKind::Complementary && !plan.sites[k].adaptive) {
            plan.order.push_back(k);
        }
    }
    std::vector<std::pair<int, size_t>> adaptive;
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        if (plan.sites[k].adaptive) {
            adaptive.push_back({plan.sites[k].gate, k});
        }
    }
    std::sort(adaptive.begin(), adaptive.end());
    std::vector<bool> placed(lattice.num_sites(), false);
    for (size_t k : plan.order) {
        placed[k] = true;
    }
    for (auto [g, k] : adaptive) {
        for (size_t d : plan.sites[k].depends_on) {
            if (!placed[d]) {
                throw ConsistencyError("adaptive site " + lattice.site(k).str() + " depends on a later measurement");
            }
        }
        plan.order.push_back(k);
        placed[k] = true;
    }
    return plan;
}

ReplayResult replay(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const MeasurementPlan &plan,
    const std::vector<int> &outcomes) {
    if (outcomes.size() != lattice.num_sites()) {
        throw InvalidInput("outcome vector does not match the lattice");
    }
    return walk(lattice, assignment, term, backbone, circuit, plan.nodes, &outcomes).replay;
}

ProtocolResult run_stage2(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const AxisAssignment &assignment, const Backbone &backbone, uint64_t seed, Engine engine,
    const ContractionLimits &limits) {
    ProtocolResult res;
    res.assignment = assignment;
    res.backbone = backbone;
    res.plan = compile_plan(lattice, assignment, term, backbone, circuit);
    size_t n = lattice.num_sites();
    ChainRuleSampler sampler(lattice, term, engine, limits);
    std::vector<Mat4> stage1;
    for (Axis mu : assignment.axes) {
        stage1.push_back(povm_element(mu));
    }
    try {
        sampler.apply_all(stage1);
    } catch (const ConsistencyError &) {
        throw ProtocolError("the stage-1 assignment has zero probability in this state");
    }
    std::mt19937_64 rng(seed);
    res.outcomes.assign(n, -1);
    res.angles.assign(n, 0.0);
    for (size_t k : res.plan.order) {
        const SiteInstruction &ins = res.plan.sites[k];
        double angle = 0;
        if (ins.adaptive) {
            ReplayResult rr = replay(lattice, assignment, term, backbone, circuit, res.plan, res.outcomes);
            if (rr.pending_site != k) {
                throw ConsistencyError("adaptive measurements are out of order at " + lattice.site(k).str());
            }
            angle = rr.angles[k];
        }
        res.angles[k] = angle;
        PlanStep step{k, {}};
        for (int outcome = 0; outcome < 2; outcome++) {
            Mat4 kr = Mat4::Zero();
            kr.row(0) = instruction_covector(ins, angle, outcome).transpose();
            step.kraus.push_back(kr);
        }
        double p = 0;
        res.outcomes[k] = sampler.measure(step, rng, &p);
        res.record.outcomes.push_back(res.outcomes[k]);
        res.record.probabilities.push_back(p);
    }
    ReplayResult fin = replay(lattice, assignment, term, backbone, circuit, res.plan, res.outcomes);
    if (fin.pending_site) {
        throw ConsistencyError("replay stopped at an unmeasured site");
    }
    res.history = fin.history;
    res.outcome = fin.outcome;
    return res;
}

ProtocolResult run_protocol(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const ProtocolOptions &options) {
    circuit.validate();
    if (options.max_stage1_attempts < 1) {
        throw InvalidInput("max_stage1_attempts must be positive");
    }
    RouteFailure last = RouteFailure::None;
    std::string diagnostic;
    for (int attempt = 0; attempt < options.max_stage1_attempts; attempt++) {
        uint64_t s1 = derive_seed(options.seed, (uint64_t)attempt);
        AxisAssignment a = stage1_sample(lattice, term, options.mode, s1, options.engine, options.limits);
        if (options.mode == SamplingMode::IID) {
            // Uniform draws can be impossible outcomes of the state; compare with the 3^-n average.
            double p = assignment_probability(lattice, term, a, options.engine, options.limits);
            if (!(p * std::pow(3.0, (double)lattice.num_sites()) > 1e-9)) {
                last = RouteFailure::None;
                diagnostic = "IID assignment has zero probability in this state";
                continue;
            }
        }
        RouteResult r = route_assignment(lattice, a, circuit, term, options.router);
        if (!r.backbone) {
            if (r.failure == RouteFailure::InvalidCircuit) {
                throw InvalidInput(r.diagnostic);
            }
            last = r.failure;
            diagnostic = r.diagnostic;
            continue;
        }
        ProtocolResult res =
            run_stage2(lattice, term, circuit, a, *r.backbone, derive_seed(s1, 0x2), options.engine, options.limits);
        res.stage1_attempts = attempt + 1;
        return res;
    }
    throw RoutingError(
        last, "no routable stage-1 assignment in " + std::to_string(options.max_stage1_attempts) +
                  " attempts; last failure: " + diagnostic);
}

namespace {

nlohmann::json site_json(SiteId s) {
    return nlohmann::json::array({s.row, s.col});
}

std::string axis_name(Axis a) {
    return std::string(1, axis_char(a));
}

}  // namespace

std::string transcript_to_json(
    const HexLattice &lattice, const BoundaryTermination &term, const CircuitSpec &circuit,
    const ProtocolOptions &options, const ProtocolResult &result) {
    using nlohmann::json;
    json j;
    j["format_version"] = 1;
    j["lattice"] = {{"rows", lattice.rows}, {"cols", lattice.cols}};
    j["termination"] = term.describe();
    j["seed"] = options.seed;
    j["mode"] = sampling_mode_name(options.mode);
    j["circuit"] = json::parse(circuit_to_json(circuit));
    j["stage1_attempts"] = result.stage1_attempts;
    j["assignment"] = json::parse(assignment_to_json(result.assignment));
    j["backbone"] = json::parse(backbone_to_json(result.backbone));
    json plan = json::array();
    for (size_t k : result.plan.order) {
        const SiteInstruction &ins = result.plan.sites[k];
        json e;
        e["site"] = site_json(lattice.site(k));
        e["basis"] = ins.basis == BasisKind::Standard ? "standard" : "complementary";
        e["mu"] = axis_name(ins.mu);
        if (ins.basis == BasisKind::Complementary) {
            e["nu"] = axis_name(ins.nu);
            e["theta"] = ins.theta;
        }
        if (ins.adaptive) {
            e["gate"] = ins.gate;
            json deps = json::array();
            for (size_t d : ins.depends_on) {
                deps.push_back(site_json(lattice.site(d)));
            }
            e["depends_on"] = deps;
        }
        plan.push_back(e);
    }
    j["plan"] = plan;
    json meas = json::array();
    for (size_t i = 0; i < result.plan.order.size() && i < result.record.outcomes.size(); i++) {
        size_t k = result.plan.order[i];
        json e;
        e["site"] = site_json(lattice.site(k));
        e["outcome"] = result.record.outcomes[i];
        e["probability"] = result.record.probabilities[i];
        if (result.plan.sites[k].basis == BasisKind::Complementary) {
            e["angle"] = result.angles[k];
        }
        meas.push_back(e);
    }
    j["measurements"] = meas;
    json frames = json::array();
    for (const FrameSnapshot &f : result.history) {
        json wires = json::array();
        for (const Byproduct &b : f.frame.wires) {
            wires.push_back(json::array({b.x, b.z}));
        }
        frames.push_back({{"gate", f.gate}, {"op", circuit.gates[f.gate].str()}, {"frame", wires}});
    }
    j["frames"] = frames;
    json out = json::array();
    for (size_t w = 0; w < result.outcome.wires.size(); w++) {
        out.push_back(
            {{"wire", w}, {"raw", result.outcome.wires[w].raw}, {"corrected", result.outcome.wires[w].corrected}});
    }
    j["outcome"] = out;
    return j.dump(2);
}

}  // namespace aklt
