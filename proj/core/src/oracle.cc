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

#include "aklt/oracle.h"

#include <cmath>
#include <map>

namespace aklt {

namespace {

/// Spin-3/2 matrices in the basis m = 3/2, 1/2, -1/2, -3/2.
std::array<Mat4, 3> spin_matrices() {
    Mat4 raise = Mat4::Zero();
    for (int k = 1; k < 4; k++) {
        double m = 1.5 - k;
        raise(k - 1, k) = std::sqrt(1.5 * 2.5 - m * (m + 1));
    }
    Mat4 sz = Mat4::Zero();
    for (int k = 0; k < 4; k++) {
        sz(k, k) = 1.5 - k;
    }
    Mat4 sx = (raise + raise.adjoint()) / 2.0;
    Mat4 sy = (raise - raise.adjoint()) / cplx(0, 2);
    return {sx, sy, sz};
}

MatX kron(const MatX &a, const MatX &b) {
    MatX out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double f_poly(double x) {
    return x + 116.0 / 243.0 * x * x + 16.0 / 243.0 * x * x * x;
}

size_t site_stride(const StateVector &sv, size_t k) {
    size_t stride = sv.env_dim;
    for (size_t q = sv.num_sites; q-- > k + 1;) {
        stride *= 4;
    }
    return stride;
}

/// |P|psi>|^2 for a two-site projector P = V V^dagger on sites i < j.
double projected_norm_sq(const StateVector &sv, size_t i, size_t j, const MatX &v) {
    size_t si = site_stride(sv, i), sj = site_stride(sv, j);
    size_t total = sv.amplitudes.size();
    MatX vd = v.adjoint();
    Eigen::Index rank = vd.rows();
    double acc = 0;
    Eigen::Matrix<cplx, 16, 1> x;
    Eigen::VectorXcd y(rank);
    for (size_t hi = 0; hi < total; hi += 4 * si) {
        for (size_t mid = hi; mid < hi + si; mid += 4 * sj) {
            for (size_t base = mid; base < mid + sj; base++) {
                for (size_t a = 0; a < 4; a++) {
                    for (size_t b = 0; b < 4; b++) {
                        x(4 * a + b) = sv.amplitudes[base + a * si + b * sj];
                    }
                }
                y.noalias() = vd * x;
                acc += y.squaredNorm();
            }
        }
    }
    return acc;
}

/// Applies a one-site operator to site k of amplitudes laid out like `sv`.
std::vector<cplx> apply_site(const std::vector<cplx> &amps, const StateVector &sv, size_t k, const Mat4 &op) {
    size_t stride = site_stride(sv, k);
    std::vector<cplx> out(amps.size(), 0);
    for (size_t hi = 0; hi < amps.size(); hi += 4 * stride) {
        for (size_t base = hi; base < hi + stride; base++) {
            for (size_t a = 0; a < 4; a++) {
                cplx acc = 0;
                for (size_t b = 0; b < 4; b++) {
                    acc += op(a, b) * amps[base + b * stride];
                }
                out[base + a * stride] = acc;
            }
        }
    }
    return out;
}

double norm_sq(const std::vector<cplx> &v) {
    double s = 0;
    for (const cplx &x : v) {
        s += std::norm(x);
    }
    return s;
}

}  // namespace

LogicalState reference_state(const CircuitSpec &circuit) {
    circuit.validate();
    int w = circuit.num_wires;
    if (w > 3) {
        throw SizeError("reference simulation supports at most 3 wires");
    }
    LogicalState st;
    st.num_wires = w;
    st.amplitudes.assign(size_t{1} << w, 0);
    st.amplitudes[0] = 1;
    for (const Gate &g : circuit.gates) {
        size_t bit = size_t{1} << g.wire;
        switch (g.kind) {
            case Gate::Kind::Init:
            case Gate::Kind::Readout:
                break;
            case Gate::Kind::Rz:
                for (size_t k = 0; k < st.amplitudes.size(); k++) {
                    if (k & bit) {
                        st.amplitudes[k] *= std::polar(1.0, g.theta);
                    }
                }
                break;
            case Gate::Kind::Rx: {
                // H diag(1, e^{i theta}) H
                cplx e = std::polar(1.0, g.theta);
                cplx same = (1.0 + e) / 2.0, flip = (1.0 - e) / 2.0;
                for (size_t k = 0; k < st.amplitudes.size(); k++) {
                    if (k & bit) {
                        continue;
                    }
                    cplx a0 = st.amplitudes[k], a1 = st.amplitudes[k | bit];
                    st.amplitudes[k] = same * a0 + flip * a1;
                    st.amplitudes[k | bit] = flip * a0 + same * a1;
                }
                break;
            }
            case Gate::Kind::Cnot: {
                size_t cbit = bit, tbit = size_t{1} << g.target;
                for (size_t k = 0; k < st.amplitudes.size(); k++) {
                    if ((k & cbit) && !(k & tbit)) {
                        std::swap(st.amplitudes[k], st.amplitudes[k | tbit]);
                    }
                }
                break;
            }
        }
    }
    return st;
}

Distribution reference_circuit_sim(const CircuitSpec &circuit) {
    LogicalState st = reference_state(circuit);
    Distribution d;
    for (const cplx &a : st.amplitudes) {
        d.push_back(std::norm(a));
    }
    return d;
}

double tv_distance(const Distribution &p, const Distribution &q) {
    if (p.size() != q.size()) {
        throw InvalidInput("distributions have different alphabets");
    }
    double s = 0;
    for (size_t k = 0; k < p.size(); k++) {
        s += std::abs(p[k] - q[k]);
    }
    return s / 2;
}

MatX pair_dot() {
    auto s = spin_matrices();
    MatX out = MatX::Zero(16, 16);
    for (const Mat4 &m : s) {
        out += kron(m, m);
    }
    return out;
}

MatX spin3_projector() {
    auto s = spin_matrices();
    MatX total2 = MatX::Zero(16, 16);
    MatX id = MatX::Identity(4, 4);
    for (const Mat4 &m : s) {
        MatX t = kron(m, id) + kron(id, m);
        total2 += t * t;
    }
    Eigen::SelfAdjointEigenSolver<MatX> es(total2);
    MatX p = MatX::Zero(16, 16);
    for (Eigen::Index k = 0; k < 16; k++) {
        // J(J+1) = 12 for J = 3.
        if (std::abs(es.eigenvalues()(k) - 12.0) < 1e-8) {
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
        }
    }
    return p;
}

AffineCheck affine_projector_check() {
    // S1.S2 = (J(J+1) - 15/2) / 2 for J = 0..3.
    std::array<double, 4> dots;
    for (int j = 0; j < 4; j++) {
        dots[j] = (j * (j + 1) - 7.5) / 2;
    }
    AffineCheck ac;
    ac.d = f_poly(dots[0]);
    ac.c = f_poly(dots[3]) - ac.d;
    for (int j = 1; j < 3; j++) {
        if (std::abs(f_poly(dots[j]) - ac.d) > 1e-12) {
            throw ConsistencyError("the interaction polynomial is not an affine image of the spin-3 projector");
        }
    }
    MatX x = pair_dot();
    MatX fx = x + 116.0 / 243.0 * x * x + 16.0 / 243.0 * x * x * x;
    MatX diff = fx - ac.c * spin3_projector() - ac.d * MatX::Identity(16, 16);
    ac.residual = diff.cwiseAbs().maxCoeff();
    return ac;
}

double hamiltonian_pair_check(
    const HexLattice &lattice, const BoundaryTermination &term, const ContractionLimits &limits) {
    StateVector sv = build_state(lattice, term, limits);
    Eigen::SelfAdjointEigenSolver<MatX> es(spin3_projector());
    MatX v(16, 0);
    for (Eigen::Index k = 0; k < 16; k++) {
        if (es.eigenvalues()(k) > 0.5) {
            v.conservativeResize(16, v.cols() + 1);
            v.col(v.cols() - 1) = es.eigenvectors().col(k);
        }
    }
    double worst = 0;
    for (const Bond &b : lattice.bonds) {
        size_t i = lattice.index(b.a), j = lattice.index(b.b);
        if (i > j) {
            std::swap(i, j);
        }
        worst = std::max(worst, std::sqrt(projected_norm_sq(sv, i, j, v) / sv.norm_sq));
    }
    return worst;
}

StateVector valence_bond_state(const HexLattice &lattice, const BoundaryTermination &term) {
    if (term.mode != BoundaryTermination::Mode::Fixed) {
        throw InvalidInput("the valence-bond construction needs a fixed termination");
    }
    size_t n = lattice.num_sites();
    if (n > 12) {
        throw SizeError("valence-bond construction is limited to 12 sites");
    }
    // Symmetric projection of three qubits onto spin 3/2; |m> has 3/2 - m qubits in |1>.
    LabeledTensor iso;
    iso.dims = {4, 2, 2, 2};
    iso.data.assign(32, 0);
    for (int q = 0; q < 8; q++) {
        int ones = ((q >> 2) & 1) + ((q >> 1) & 1) + (q & 1);
        iso.data[ones * 8 + q] = ones == 0 || ones == 3 ? 1.0 : 1 / std::sqrt(3.0);
    }
    int num_bonds = (int)lattice.bonds.size();
    int phys0 = 2 * num_bonds;
    int next = phys0 + (int)n;
    std::vector<bool> placed(num_bonds, false);
    LabeledTensor acc = LabeledTensor::scalar(1);
    for (int c = 0; c < lattice.cols; c++) {
        for (int r = 0; r < lattice.rows; r++) {
            SiteId s{r, c};
            size_t k = lattice.index(s);
            LabeledTensor site = iso;
            site.labels = {phys0 + (int)k, 0, 0, 0};
            for (Dir d : ALL_DIRS) {
                int b = lattice.bond_at(s, d);
                int label;
                if (b >= 0) {
                    // Singlet on qubits 2b (first end) and 2b+1 (second end).
                    if (!placed[b]) {
                        LabeledTensor eps;
                        eps.labels = {2 * b, 2 * b + 1};
                        eps.dims = {2, 2};
                        eps.data = {0, 1, -1, 0};
                        acc = contract(acc, eps);
                        placed[b] = true;
                    }
                    label = lattice.bonds[b].a == s ? 2 * b : 2 * b + 1;
                } else {
                    label = next++;
                    Vec2 t = term.vector_for(k, d);
                    if (leg_role(lattice.kind(s), d) == LegRole::Bra) {
                        std::swap(t(0), t(1));
                    }
                    LabeledTensor dv;
                    dv.labels = {label};
                    dv.dims = {2};
                    dv.data = {t(0), t(1)};
                    acc = contract(acc, dv);
                }
                site.labels[1 + (int)d] = label;
            }
            acc = contract(acc, site);
        }
    }
    std::vector<int> order;
    for (size_t k = 0; k < n; k++) {
        order.push_back(phys0 + (int)k);
    }
    acc = permute(acc, order);
    StateVector sv;
    sv.num_sites = n;
    sv.amplitudes = acc.data;
    sv.norm_sq = norm_sq(sv.amplitudes);
    return sv;
}

double two_point_correlation(
    const HexLattice &lattice, const BoundaryTermination &term, SiteId i, SiteId j, Axis a,
    const ContractionLimits &limits) {
    Mat4 s = spin_matrices()[(int)a];
    size_t ki = lattice.index(i), kj = lattice.index(j);
    StateVector sv;
    try {
        sv = build_state(lattice, term, limits);
    } catch (const SizeError &) {
        // Over the amplitude cap (open boundary indices): contract the expectations as a strip.
        auto expect_ops = [&](std::vector<std::pair<size_t, Mat4>> placed) {
            std::vector<std::optional<Mat4>> ops(lattice.num_sites());
            for (auto &[k, op] : placed) {
                ops[k] = ops[k] ? Mat4(*ops[k] * op) : op;
            }
            return operator_expectation(lattice, term, ops, Engine::Auto, limits).real();
        };
        return expect_ops({{ki, s}, {kj, s}}) - expect_ops({{ki, s}}) * expect_ops({{kj, s}});
    }
    auto expect = [&](const std::vector<cplx> &v) {
        cplx e = 0;
        for (size_t q = 0; q < v.size(); q++) {
            e += std::conj(sv.amplitudes[q]) * v[q];
        }
        return e.real() / sv.norm_sq;
    };
    std::vector<cplx> si = apply_site(sv.amplitudes, sv, ki, s);
    std::vector<cplx> sj = apply_site(sv.amplitudes, sv, kj, s);
    return expect(apply_site(si, sv, kj, s)) - expect(si) * expect(sj);
}

JointDistribution brute_force_joint(
    const HexLattice &lattice, const BoundaryTermination &term, const BranchPlan &plan, size_t max_branches,
    const ContractionLimits &limits) {
    size_t n = lattice.num_sites();
    if (plan.variants.size() != n) {
        throw InvalidInput("branch plan needs one entry per site");
    }
    std::vector<MatX> maps(n);
    // offsets[s][v][k] = first row of (variant v, outcome k) in the stacked map of site s.
    std::vector<std::vector<std::vector<Eigen::Index>>> offsets(n);
    std::vector<size_t> outcomes_per_site(n);
    size_t branches = 1;
    for (size_t s = 0; s < n; s++) {
        const auto &vars = plan.variants[s];
        if (vars.empty() || vars[0].empty()) {
            throw InvalidInput("every site needs at least one variant and outcome");
        }
        outcomes_per_site[s] = vars[0].size();
        Eigen::Index rows = 0;
        for (const auto &v : vars) {
            if (v.size() != outcomes_per_site[s]) {
                throw InvalidInput("variants of a site must have the same outcome count");
            }
            offsets[s].emplace_back();
            for (const MatX &k : v) {
                if (k.cols() != 4) {
                    throw InvalidInput("Kraus maps must have 4 columns");
                }
                offsets[s].back().push_back(rows);
                rows += k.rows();
            }
        }
        maps[s] = MatX(rows, 4);
        for (size_t v = 0; v < vars.size(); v++) {
            for (size_t k = 0; k < vars[v].size(); k++) {
                maps[s].middleRows(offsets[s][v][k], vars[v][k].rows()) = vars[v][k];
            }
        }
        branches *= outcomes_per_site[s];
        if (branches > max_branches) {
            throw SizeError("branch count exceeds " + std::to_string(max_branches));
        }
    }
    LabeledTensor amp = dense_network(lattice, term, maps, limits);
    std::vector<size_t> stride(amp.dims.size(), 1);
    for (size_t k = amp.dims.size() - 1; k-- > 0;) {
        stride[k] = stride[k + 1] * amp.dims[k + 1];
    }
    size_t env = 1;
    for (size_t k = n; k < amp.dims.size(); k++) {
        env *= amp.dims[k];
    }
    std::vector<MatX> ids(n, MatX::Identity(4, 4));
    double norm = 0;
    {
        LabeledTensor g = dense_network(lattice, term, ids, limits);
        for (const cplx &x : g.data) {
            norm += std::norm(x);
        }
    }
    JointDistribution out;
    std::vector<int> outcome(n, 0);
    for (size_t b = 0; b < branches; b++) {
        size_t rest = b;
        for (size_t s = n; s-- > 0;) {
            outcome[s] = (int)(rest % outcomes_per_site[s]);
            rest /= outcomes_per_site[s];
        }
        std::vector<int> variant = plan.select ? plan.select(outcome) : std::vector<int>(n, 0);
        // Row ranges of every site for this branch.
        std::vector<std::pair<size_t, size_t>> range(n);
        size_t combos = 1;
        for (size_t s = 0; s < n; s++) {
            const MatX &k = plan.variants[s].at(variant[s])[outcome[s]];
            range[s] = {(size_t)offsets[s][variant[s]][outcome[s]], (size_t)k.rows()};
            combos *= range[s].second;
        }
        double p = 0;
        std::vector<size_t> digit(n, 0);
        for (size_t c = 0; c < combos; c++) {
            size_t r = c, base = 0;
            for (size_t s = n; s-- > 0;) {
                base += (range[s].first + r % range[s].second) * stride[s];
                r /= range[s].second;
            }
            for (size_t e = 0; e < env; e++) {
                p += std::norm(amp.data[base + e]);
            }
        }
        out.total += p;
        out.branches.push_back(Branch{outcome, p / norm});
    }
    out.total /= norm;
    if (out.total > 0) {
        for (Branch &b : out.branches) {
            b.probability /= out.total;
        }
    }
    return out;
}

BranchPlan protocol_branch_plan(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const MeasurementPlan &plan) {
    size_t n = lattice.num_sites();
    BranchPlan bp;
    bp.variants.resize(n);
    std::vector<double> first_angle(n, 0);
    for (size_t k = 0; k < n; k++) {
        const SiteInstruction &ins = plan.sites[k];
        Mat4 m = povm_element(assignment.axes[k]);
        if (ins.basis == BasisKind::None) {
            bp.variants[k] = {{MatX(m)}};
            continue;
        }
        std::vector<double> angles{0.0};
        if (ins.adaptive) {
            LegRole in = leg_role(lattice.kind(lattice.site(k)), [&] {
                for (const RegionNode &nd : plan.nodes) {
                    if (nd.site == lattice.site(k)) {
                        return nd.in;
                    }
                }
                throw ConsistencyError("adaptive site without a node");
            }());
            double a = rotation_sign(in) * ins.theta;
            angles = {a, -a};
            first_angle[k] = a;
        }
        for (double a : angles) {
            std::vector<MatX> outs;
            for (int o = 0; o < 2; o++) {
                MatX row = instruction_covector(ins, a, o).transpose() * m;
                outs.push_back(row);
            }
            bp.variants[k].push_back(outs);
        }
    }
    bp.select = [lattice, assignment, term, backbone, circuit, plan, first_angle,
                 n](const std::vector<int> &outcome) {
        std::vector<int> rec(n, -1);
        for (size_t k = 0; k < n; k++) {
            if (plan.sites[k].basis != BasisKind::None) {
                rec[k] = outcome[k];
            }
        }
        ReplayResult rr = replay(lattice, assignment, term, backbone, circuit, plan, rec);
        std::vector<int> v(n, 0);
        for (size_t k = 0; k < n; k++) {
            if (plan.sites[k].adaptive) {
                v[k] = std::abs(std::remainder(rr.angles[k] - first_angle[k], 2 * M_PI)) < 1e-12 ? 0 : 1;
            }
        }
        return v;
    };
    return bp;
}

DecouplingReport decoupling_check(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit, const ContractionLimits &limits) {
    size_t n = lattice.num_sites();
    MeasurementPlan plan = compile_plan(lattice, assignment, term, backbone, circuit);
    BranchPlan bp = protocol_branch_plan(lattice, assignment, term, backbone, circuit, plan);
    JointDistribution joint = brute_force_joint(lattice, term, bp, 1000000, limits);
    DecouplingReport rep;
    rep.reference = reference_circuit_sim(circuit);
    rep.total = joint.total;
    size_t tuples = rep.reference.size();
    // Key: outcomes of the non-readout sites.
    std::map<std::vector<int>, Distribution> groups;
    for (const Branch &br : joint.branches) {
        if (br.probability == 0) {
            continue;
        }
        std::vector<int> rec(n, -1), key(n, -1);
        for (size_t k = 0; k < n; k++) {
            if (plan.sites[k].basis == BasisKind::None) {
                continue;
            }
            rec[k] = br.outcomes[k];
            if (backbone.roles[k] != SiteRole::Readout) {
                key[k] = br.outcomes[k];
            }
        }
        ReplayResult rr = replay(lattice, assignment, term, backbone, circuit, plan, rec);
        size_t idx = 0;
        for (size_t w = 0; w < rr.outcome.wires.size(); w++) {
            idx |= (size_t)rr.outcome.wires[w].corrected << w;
        }
        Distribution &d = groups[key];
        d.resize(tuples, 0);
        d[idx] += br.probability;
    }
    for (auto &[key, d] : groups) {
        double w = 0;
        for (double x : d) {
            w += x;
        }
        if (w <= 1e-14) {
            continue;
        }
        for (double &x : d) {
            x /= w;
        }
        rep.branches++;
        rep.max_tv = std::max(rep.max_tv, tv_distance(d, rep.reference));
    }
    return rep;
}

}  // namespace aklt
