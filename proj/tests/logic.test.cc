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

#include <cmath>
#include <functional>
#include <random>

#include "aklt/local_maps.h"
#include "aklt/oracle.h"
#include "gtest/gtest.h"
#include "test_util.h"

using namespace aklt;
using aklt_test::from_rows;

namespace {

const double PI = std::acos(-1.0);

std::vector<Axis> others(Axis mu) {
    std::vector<Axis> out;
    for (Axis a : ALL_AXES) {
        if (a != mu) {
            out.push_back(a);
        }
    }
    return out;
}

Mat2 pauli_of(Byproduct p) {
    return pauli(p.x, p.z);
}

LegRole role(const WidgetNode &n, Dir d) {
    return leg_role(n.kind, d);
}

}  // namespace

TEST(logic, byproduct_table_examples) {
    ASSERT_EQ(byproduct_indices(Axis::Z, 1, 0), (Byproduct{1, 1}));
    ASSERT_EQ(byproduct_indices(Axis::X, 0, 0), (Byproduct{0, 1}));
    ASSERT_EQ(byproduct_indices(Axis::Y, 1, 1), (Byproduct{0, 1}));
}

TEST(logic, adapt_angle_examples) {
    ASSERT_EQ(adapt_angle(0.4, {0, 1}, Axis::X), -0.4);
    ASSERT_EQ(adapt_angle(0.4, {0, 0}, Axis::X), 0.4);
    ASSERT_EQ(adapt_angle(0.4, {1, 0}, Axis::Z), -0.4);
    ASSERT_EQ(adapt_angle(0.4, {0, 1}, Axis::Z), 0.4);
    ASSERT_THROW(adapt_angle(0.4, {0, 0}, Axis::Y), InvalidInput);
    // Z^0 X^1 Rz(theta) = Rz(-theta) X up to phase.
    Mat2 lhs = pauli(1, 0) * rotation(Axis::Z, 0.4);
    Mat2 rhs = rotation(Axis::Z, adapt_angle(0.4, {1, 0}, Axis::Z)) * pauli(1, 0);
    ASSERT_LT(scale_fit_residual(lhs, rhs), 1e-12);
}

TEST(logic, readout_examples) {
    ASSERT_EQ(interpret_readout(1, {1, 0}).corrected, 0);
    ASSERT_EQ(interpret_readout(0, {0, 1}).corrected, 0);
    ASSERT_EQ(interpret_readout(1, {1, 1}).corrected, 0);
    LogicalOutcome o = interpret_readout(std::vector<int>{1, 0}, ByproductFrame{{{0, 0}, {1, 0}}});
    ASSERT_EQ(o.wires[0].corrected, 1);
    ASSERT_EQ(o.wires[1].corrected, 1);
    ASSERT_THROW(interpret_readout(std::vector<int>{1}, ByproductFrame{}), InvalidInput);
}

TEST(logic, widget_every_geometry) {
    for (SiteKind kind : {SiteKind::Top, SiteKind::Bot}) {
        for (auto [in, out] : leg_pairs()) {
            Dir cond = remaining_dir(in, out);
            for (Axis mu : ALL_AXES) {
                for (Axis nu : others(mu)) {
                    for (int b = 0; b < 2; b++) {
                        for (int label = 0; label < 2; label++) {
                            for (double theta : {0.0, 0.7, 2.3}) {
                                if (mu == Axis::Y && theta != 0) {
                                    continue;
                                }
                                Mat2 m = leg_map(measured_site(kind, mu, nu, theta, b), out, in, virtual_basis(nu, label));
                                LegRole rin = leg_role(kind, in);
                                Byproduct p = widget_byproduct(
                                    rin, leg_role(kind, out), mu, b, effective_c(leg_role(kind, cond), nu, label));
                                Mat2 want = pauli_of(p) * rotation(mu, rotation_sign(rin) * theta);
                                ASSERT_LT(scale_fit_residual(m, want), 1e-10);
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(logic, standard_leg_labels_match_associates) {
    // A standard-measured neighbour with outcome c puts |standard_leg_label> on the facing leg.
    for (SiteKind kind : {SiteKind::Top, SiteKind::Bot}) {
        for (Dir d : ALL_DIRS) {
            for (Axis nu : ALL_AXES) {
                for (int c = 0; c < 2; c++) {
                    Vec2 v = associate_leg_vector(kind, nu, c, d);
                    LegState s{nu, standard_leg_label(leg_role(kind, d), nu, c)};
                    ASSERT_LT(leg_state_residual(v, s), 1e-10);
                }
            }
        }
    }
}

TEST(logic, node_renormalization_matches_contraction) {
    for (SiteKind kind : {SiteKind::Top, SiteKind::Bot}) {
        for (auto [in, out] : leg_pairs()) {
            Dir cond = remaining_dir(in, out);
            for (Axis mu : ALL_AXES) {
                for (Axis pa : others(mu)) {
                    for (Axis qa : others(mu)) {
                        for (int pl = 0; pl < 2; pl++) {
                            for (int ql = 0; ql < 2; ql++) {
                                for (int b = 0; b < 2; b++) {
                                    LegState p{pa, pl}, q{qa, ql};
                                    NodeResult r = renormalize_node(kind, in, out, cond, mu, b, p, q);
                                    Mat2 m = leg_map(measured_site(kind, mu, qa, 0, b), out, in, virtual_basis(qa, ql));
                                    ASSERT_LT(scale_fit_residual(m, pauli_of(r.pauli)), 1e-10);
                                    ASSERT_LT(leg_state_residual(m * virtual_basis(pa, pl), r.out), 1e-10);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    ASSERT_THROW(renormalize_node(SiteKind::Top, Dir::Left, Dir::Left, Dir::Right, Axis::Z, 0, {}, {}), InvalidInput);
    ASSERT_THROW(
        renormalize_node(SiteKind::Top, Dir::Left, Dir::Right, Dir::Vertical, Axis::Z, 0, {Axis::Z, 0}, {Axis::X, 0}),
        InvalidInput);
}

TEST(logic, chain_renormalization_matches_contraction) {
    std::mt19937_64 rng(11);
    for (int length = 1; length <= 4; length++) {
        std::vector<std::vector<WidgetNode>> geos = chain_geometries(length);
        std::shuffle(geos.begin(), geos.end(), rng);
        geos.resize(std::min<size_t>(geos.size(), length <= 2 ? geos.size() : 24));
        for (const auto &geo : geos) {
            Axis mu = ALL_AXES[rng() % 3];
            std::vector<Axis> cond_axes;
            for (int k = 0; k < length; k++) {
                cond_axes.push_back(others(mu)[rng() % 2]);
            }
            Axis pa = others(mu)[rng() % 2];
            // Every outcome branch: input label, then (b, associate label) per site.
            for (int bits = 0; bits < (1 << (2 * length + 1)); bits++) {
                LegState state{pa, bits & 1};
                Vec2 v = virtual_basis(pa, bits & 1);
                for (int k = 0; k < length; k++) {
                    int b = (bits >> (1 + 2 * k)) & 1;
                    int ql = (bits >> (2 + 2 * k)) & 1;
                    const WidgetNode &n = geo[k];
                    Dir cond = remaining_dir(n.in, n.out);
                    v = leg_map(measured_site(n.kind, mu, cond_axes[k], 0, b), n.out, n.in,
                                virtual_basis(cond_axes[k], ql)) *
                        v;
                    state = renormalize_node(n.kind, n.in, n.out, cond, mu, b, state, {cond_axes[k], ql}).out;
                }
                ASSERT_LT(leg_state_residual(v, state), 1e-10) << "length " << length;
            }
        }
    }
}

TEST(logic, bifurcation_renormalization_matches_contraction) {
    // Root with two child chains feeding its in and cond legs.
    std::mt19937_64 rng(5);
    auto geos1 = chain_geometries(1);
    auto geos2 = chain_geometries(2);
    for (int trial = 0; trial < 40; trial++) {
        Axis mu = ALL_AXES[rng() % 3];
        const auto &left = trial % 2 ? geos1[rng() % geos1.size()] : geos2[rng() % geos2.size()];
        const auto &right = geos2[rng() % geos2.size()];
        SiteKind root_kind = left.back().kind == SiteKind::Top ? SiteKind::Bot : SiteKind::Top;
        if (right.back().kind == root_kind) {
            continue;
        }
        for (auto [in, out] : leg_pairs()) {
            Dir cond = remaining_dir(in, out);
            if (leg_role(root_kind, in) == role(left.back(), left.back().out) ||
                leg_role(root_kind, cond) == role(right.back(), right.back().out)) {
                continue;
            }
            std::vector<Axis> axes;
            for (int k = 0; k < 6; k++) {
                axes.push_back(others(mu)[rng() % 2]);
            }
            int n_sites = (int)left.size() + (int)right.size() + 1;
            for (int bits = 0; bits < (1 << (2 * n_sites + 2)); bits++) {
                int cursor = 0;
                auto bit = [&] {
                    return (bits >> cursor++) & 1;
                };
                auto run = [&](const std::vector<WidgetNode> &chain, Axis start, size_t axis_offset) {
                    LegState s{start, bit()};
                    Vec2 v = virtual_basis(start, s.label);
                    for (size_t k = 0; k < chain.size(); k++) {
                        const WidgetNode &n = chain[k];
                        int b = bit(), ql = bit();
                        Axis qa = axes[axis_offset + k];
                        v = leg_map(measured_site(n.kind, mu, qa, 0, b), n.out, n.in, virtual_basis(qa, ql)) * v;
                        s = renormalize_node(n.kind, n.in, n.out, remaining_dir(n.in, n.out), mu, b, s, {qa, ql}).out;
                    }
                    return std::make_pair(s, v);
                };
                auto [ls, lv] = run(left, axes[4], 0);
                auto [rs, rv] = run(right, axes[5], 2);
                int b = bit();
                Mat2 m = leg_map(measured_site(root_kind, mu, rs.axis, 0, b), out, in, rv);
                NodeResult r = renormalize_node(root_kind, in, out, cond, mu, b, ls, rs);
                ASSERT_LT(leg_state_residual(m * lv, r.out), 1e-10);
            }
        }
    }
}


TEST(logic, loop_zeroth_matches_contraction) {
    HexRing h;
    std::mt19937_64 rng(2);
    int nonzero = 0, zero = 0;
    for (Axis mu : ALL_AXES) {
        ASSERT_NE(loop_zeroth_axis(mu), mu);
        for (int z = 0; z < 6; z++) {
            std::vector<ArcSite> sites(6);
            for (auto &s : sites) {
                s.nu = others(mu)[rng() % 2];
            }
            for (int bits = 0; bits < (1 << 11); bits++) {
                int cursor = 0;
                for (int j = 0; j < 6; j++) {
                    if (j != z) {
                        sites[j].b = (bits >> cursor++) & 1;
                        sites[j].label = (bits >> cursor++) & 1;
                    }
                }
                int b0 = (bits >> cursor) & 1;
                auto [w, ring] = ring_arc(h, z, z, +1, mu, sites);
                Vec2 v = loop_zeroth_vector(h, z, mu, b0, w);
                auto predicted = loop_zeroth_output(h.kind(z), h.external(z), mu, b0, ring);
                ASSERT_TRUE(predicted);
                ASSERT_LT(leg_state_residual(v, *predicted), 1e-10);
                nonzero++;
            }
        }
    }
    ASSERT_EQ(nonzero, 3 * 6 * 2048);
    // Arbitrary ring Paulis: the output vanishes unless the fixed exponent matches.
    for (Axis mu : ALL_AXES) {
        for (int z = 0; z < 6; z++) {
            for (int k = 0; k < 8; k++) {
                Byproduct ring{k & 1, (k >> 1) & 1};
                int b0 = k >> 2;
                Vec2 v = loop_zeroth_vector(h, z, mu, b0, pauli_of(ring));
                auto predicted = loop_zeroth_output(h.kind(z), h.external(z), mu, b0, ring);
                if (!predicted) {
                    ASSERT_LT(v.norm(), 1e-12);
                    zero++;
                } else {
                    ASSERT_LT(leg_state_residual(v, *predicted), 1e-10);
                }
            }
        }
    }
    ASSERT_EQ(zero, 3 * 6 * 4);
}

TEST(logic, pass_through_loop_matches_contraction) {
    HexRing h;
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int i_in = 0; i_in < 6; i_in++) {
        for (int i_out = 0; i_out < 6; i_out++) {
            LegRole rin = leg_role(h.kind(i_in), h.external(i_in));
            LegRole rout = leg_role(h.kind(i_out), h.external(i_out));
            if (h.kind(i_in) == h.kind(i_out) || rin == rout) {
                continue;
            }
            for (Axis nu0 : {Axis::X, Axis::Y}) {
                std::vector<ArcSite> sites(6);
                for (auto &s : sites) {
                    s.nu = others(Axis::Z)[rng() % 2];
                }
                for (int bits = 0; bits < (1 << 10); bits++) {
                    int cursor = 0;
                    for (int j = 0; j < 6; j++) {
                        if (j == i_in || j == i_out) {
                            continue;
                        }
                        sites[j].b = (bits >> cursor++) & 1;
                        sites[j].label = (bits >> cursor++) & 1;
                    }
                    int b_in = (bits >> cursor++) & 1;
                    int b_out = (bits >> cursor++) & 1;
                    auto [m, arcs] = pass_through_map(h, i_in, i_out, Axis::Z, nu0, b_in, nu0, b_out, sites);
                    Byproduct p = pass_through_loop_byproduct(h.kind(i_in), rin, h.kind(i_out), rout, Axis::Z, b_in, b_out, arcs);
                    ASSERT_EQ(p.x, 0);
                    ASSERT_LT(scale_fit_residual(m, pauli_of(p)), 1e-10) << i_in << "->" << i_out;
                    checked++;
                }
            }
        }
    }
    ASSERT_EQ(checked, 10 * 2 * 1024);
    auto top = SiteKind::Top, bot = SiteKind::Bot;
    ASSERT_THROW(pass_through_loop_byproduct(top, LegRole::Ket, bot, LegRole::Ket, Axis::Z, 0, 0, {}), InvalidInput);
    ASSERT_THROW(pass_through_loop_byproduct(top, LegRole::Ket, top, LegRole::Bra, Axis::Z, 0, 0, {}), InvalidInput);
    ASSERT_THROW(pass_through_loop_byproduct(top, LegRole::Ket, bot, LegRole::Bra, Axis::X, 0, 0, {}), InvalidInput);
}

TEST(logic, off_limits_loop_is_rank_one) {
    // A z ring entered through an x site: the induced map is not unitary.
    HexRing h;
    std::mt19937_64 rng(4);
    for (int i_in = 0; i_in < 6; i_in++) {
        for (int i_out = 0; i_out < 6; i_out++) {
            if (i_in == i_out) {
                continue;
            }
            std::vector<ArcSite> sites(6);
            for (auto &s : sites) {
                s.nu = others(Axis::Z)[rng() % 2];
            }
            Axis nu_in = others(Axis::X)[rng() % 2];
            Axis nu_out = others(Axis::Z)[rng() % 2];
            for (int bits = 0; bits < (1 << 10); bits++) {
                int cursor = 0;
                for (int j = 0; j < 6; j++) {
                    if (j == i_in || j == i_out) {
                        continue;
                    }
                    sites[j].b = (bits >> cursor++) & 1;
                    sites[j].label = (bits >> cursor++) & 1;
                }
                int b_in = (bits >> cursor++) & 1;
                int b_out = (bits >> cursor++) & 1;
                Mat2 m = pass_through_map(h, i_in, i_out, Axis::X, nu_in, b_in, nu_out, b_out, sites).first;
                ASSERT_GT(m.norm(), 1e-12);
                ASSERT_LT(rank_ratio(m), 1e-10);
            }
        }
    }
}


TEST(logic, cnot_junction_tensors) {
    // Top junction: X Z^b applied to (1 (x) <0^x| + Z (x) <1^x|) on the vertical leg.
    for (int b = 0; b < 2; b++) {
        SiteTensor t = measured_site(SiteKind::Top, Axis::Z, Axis::X, 0, b);
        Mat2 up = pauli(1, b);
        SiteTensor want;
        for (int l = 0; l < 2; l++) {
            for (int r = 0; r < 2; r++) {
                for (int v = 0; v < 2; v++) {
                    cplx s = 0;
                    for (int k = 0; k < 2; k++) {
                        Mat2 inner = Mat2::Identity() * std::conj(virtual_basis(Axis::X, 0)(v)) +
                                     pauli(0, 1) * std::conj(virtual_basis(Axis::X, 1)(v));
                        s += up(l, k) * inner(k, r);
                    }
                    want(l, r, v) = s;
                }
            }
        }
        Eigen::Map<const Eigen::Matrix<cplx, 8, 1>> tv(t.t.data()), wv(want.t.data());
        ASSERT_LT(scale_fit_residual(MatX(tv), MatX(wv)), 1e-10);
    }
    // Bottom junction: (X^{b+1} Z (x) Z) applied to (1 (x) |0^z> + X (x) |1^z>).
    for (int b = 0; b < 2; b++) {
        SiteTensor t = measured_site(SiteKind::Bot, Axis::X, Axis::Z, 0, b);
        Mat2 up = pauli(b ^ 1, 1);
        SiteTensor want;
        for (int l = 0; l < 2; l++) {
            for (int r = 0; r < 2; r++) {
                for (int v = 0; v < 2; v++) {
                    cplx s = 0;
                    for (int k = 0; k < 2; k++) {
                        Mat2 inner =
                            Mat2::Identity() * virtual_basis(Axis::Z, 0)(v) - pauli(1, 0) * virtual_basis(Axis::Z, 1)(v);
                        s += up(l, k) * inner(k, r);
                    }
                    want(l, r, v) = s;
                }
            }
        }
        Eigen::Map<const Eigen::Matrix<cplx, 8, 1>> tv(t.t.data()), wv(want.t.data());
        ASSERT_LT(scale_fit_residual(MatX(tv), MatX(wv)), 1e-10);
    }
}

TEST(logic, cnot_assembly_with_pauli_chain) {
    for (int bt = 0; bt < 2; bt++) {
        for (int bb = 0; bb < 2; bb++) {
            for (int ax = 0; ax < 2; ax++) {
                for (int az = 0; az < 2; az++) {
                    Mat4 m = cnot_junction_map(bt, bb, pauli(ax, az));
                    auto [u1, u2] = cnot_frame_update({}, {}, bt, bb, {ax, az});
                    ASSERT_LT(scale_fit_residual(m, kron(pauli_of(u1), pauli_of(u2)) * cnot_matrix()), 1e-10);
                }
            }
        }
    }
}

TEST(logic, cnot_assembly_with_measured_chains) {
    // Chains hang from the top junction's vertical bra leg down to the bottom junction's ket leg.
    std::mt19937_64 rng(9);
    for (int length = 1; length <= 3; length++) {
        std::vector<std::vector<WidgetNode>> geos;
        std::function<void(std::vector<WidgetNode> &)> grow = [&](std::vector<WidgetNode> &cur) {
            if ((int)cur.size() == length) {
                if (role(cur.back(), cur.back().out) == LegRole::Bra) {
                    geos.push_back(cur);
                }
                return;
            }
            for (SiteKind k : {SiteKind::Top, SiteKind::Bot}) {
                for (auto [in, o] : leg_pairs()) {
                    WidgetNode n{k, in, o};
                    LegRole above = cur.empty() ? LegRole::Bra : role(cur.back(), cur.back().out);
                    if (role(n, in) == above) {
                        continue;
                    }
                    cur.push_back(n);
                    grow(cur);
                    cur.pop_back();
                }
            }
        };
        std::vector<WidgetNode> cur;
        grow(cur);
        ASSERT_FALSE(geos.empty());
        for (const auto &geo : geos) {
            std::vector<Axis> mus, nus;
            for (int k = 0; k < length; k++) {
                mus.push_back(ALL_AXES[rng() % 3]);
                nus.push_back(others(mus.back())[rng() % 2]);
            }
            for (int bits = 0; bits < (1 << (2 * length + 2)); bits++) {
                // Node k: `in` faces up (towards the top junction), `out` faces down; the map runs upwards.
                Mat2 w = Mat2::Identity();
                Byproduct chain;
                for (int k = 0; k < length; k++) {
                    const WidgetNode &n = geo[k];
                    int b = (bits >> (2 * k)) & 1, ql = (bits >> (2 * k + 1)) & 1;
                    w = w * leg_map(measured_site(n.kind, mus[k], nus[k], 0, b), n.in, n.out, virtual_basis(nus[k], ql));
                    chain ^= widget_byproduct(role(n, n.out), role(n, n.in), mus[k], b,
                                              effective_c(role(n, remaining_dir(n.in, n.out)), nus[k], ql));
                }
                int bt = (bits >> (2 * length)) & 1, bb = (bits >> (2 * length + 1)) & 1;
                Mat4 m = cnot_junction_map(bt, bb, w);
                auto [u1, u2] = cnot_frame_update({}, {}, bt, bb, chain);
                ASSERT_LT(scale_fit_residual(m, kron(pauli_of(u1), pauli_of(u2)) * cnot_matrix()), 1e-10)
                    << "length " << length;
            }
        }
    }
}

TEST(logic, cnot_frame_propagation) {
    // Incoming byproducts: a^x travels from control to target, a^z from target to control.
    auto [a1, a2] = cnot_frame_update({1, 0}, {0, 0}, 0, 0, {});
    auto [b1, b2] = cnot_frame_update({0, 0}, {0, 0}, 0, 0, {});
    ASSERT_EQ(a1.x ^ b1.x, 1);
    ASSERT_EQ(a2.x ^ b2.x, 1);
    auto [c1, c2] = cnot_frame_update({0, 0}, {0, 1}, 0, 0, {});
    ASSERT_EQ(c1.z ^ b1.z, 1);
    ASSERT_EQ(c2.z ^ b2.z, 1);
    // Check against the matrix identity CNOT (P1 (x) P2) = (P1' (x) P2') CNOT.
    for (int k = 0; k < 16; k++) {
        Byproduct w1{k & 1, (k >> 1) & 1}, w2{(k >> 2) & 1, (k >> 3) & 1};
        auto [n1, n2] = cnot_frame_update(w1, w2, 0, 0, {});
        auto [z1, z2] = cnot_frame_update({}, {}, 0, 0, {});
        Mat4 lhs = kron(pauli_of(z1), pauli_of(z2)) * cnot_matrix() * kron(pauli_of(w1), pauli_of(w2));
        Mat4 rhs = kron(pauli_of(n1), pauli_of(n2)) * cnot_matrix();
        ASSERT_LT(scale_fit_residual(lhs, rhs), 1e-12);
    }
}

TEST(logic, compile_plan_structure) {
    HexLattice lat = build_lattice(2, 5);
    AxisAssignment a = from_rows({"zxyxz", "xzzzx"});
    auto term = aklt_test::y_fixed();
    CircuitSpec c{1, {Gate::init(0), Gate::rx(0, 0.3), Gate::rx(0, 0.2), Gate::readout(0)}};
    RouteResult r = route_assignment(lat, a, c, term, aklt_test::tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    MeasurementPlan plan = compile_plan(lat, a, term, *r.backbone, c);
    ASSERT_EQ(plan.sites.size(), lat.num_sites());
    auto at = [&](SiteId s) -> const SiteInstruction & {
        return plan.sites[lat.index(s)];
    };
    ASSERT_EQ(at({0, 4}).basis, BasisKind::Standard);
    ASSERT_EQ(at({0, 0}).basis, BasisKind::Standard);
    ASSERT_EQ(at({1, 2}).basis, BasisKind::Standard);
    ASSERT_EQ(at({0, 3}).basis, BasisKind::Complementary);
    ASSERT_TRUE(at({0, 3}).adaptive);
    ASSERT_EQ(at({0, 3}).gate, 1);
    ASSERT_TRUE(at({0, 1}).adaptive);
    ASSERT_EQ(at({0, 1}).gate, 2);
    ASSERT_FALSE(at({0, 2}).adaptive);
    ASSERT_TRUE(at({0, 2}).depends_on.empty());
    ASSERT_EQ(at({1, 0}).basis, BasisKind::None);
    // Fiducial sites have no dependencies; adaptive sites only depend on sites measured before them.
    std::vector<size_t> pos(lat.num_sites(), SIZE_MAX);
    for (size_t k = 0; k < plan.order.size(); k++) {
        pos[plan.order[k]] = k;
    }
    for (size_t k = 0; k < plan.sites.size(); k++) {
        const SiteInstruction &ins = plan.sites[k];
        if (!ins.adaptive) {
            ASSERT_TRUE(ins.depends_on.empty());
        }
        for (size_t d : ins.depends_on) {
            ASSERT_LT(pos[d], pos[k]);
        }
    }
    // The second rotation depends on the first rotation site's outcome.
    const auto &deps = at({0, 1}).depends_on;
    ASSERT_NE(std::find(deps.begin(), deps.end(), lat.index({0, 3})), deps.end());
}

TEST(logic, identity_plan_has_no_adaptation) {
    HexLattice lat = build_lattice(2, 4);
    AxisAssignment a = from_rows({"zxzz", "yzyx"});
    auto term = aklt_test::y_fixed();
    CircuitSpec c = identity_circuit(1);
    RouteResult r = route_assignment(lat, a, c, term, aklt_test::tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    MeasurementPlan plan = compile_plan(lat, a, term, *r.backbone, c);
    for (const SiteInstruction &ins : plan.sites) {
        ASSERT_FALSE(ins.adaptive);
        ASSERT_EQ(ins.theta, 0.0);
    }
}

TEST(logic, protocol_runs_are_reproducible) {
    HexLattice lat = build_lattice(2, 6);
    auto term = BoundaryTermination::fixed(Vec2(1, 1) / std::sqrt(2.0));
    CircuitSpec c{1, {Gate::init(0), Gate::rz(0, PI / 4), Gate::rx(0, PI / 3), Gate::readout(0)}};
    ProtocolOptions o;
    o.mode = SamplingMode::IID;
    o.router.spacing = 3;
    o.max_stage1_attempts = 200;
    int ones = 0;
    const int runs = 200;
    for (int s = 0; s < runs; s++) {
        o.seed = (uint64_t)s;
        ProtocolResult r = run_protocol(lat, term, c, o);
        ones += r.outcome.wires[0].corrected;
        if (s < 3) {
            ProtocolResult again = run_protocol(lat, term, c, o);
            ASSERT_EQ(transcript_to_json(lat, term, c, o, r), transcript_to_json(lat, term, c, o, again));
            ReplayResult rr = replay(lat, r.assignment, term, r.backbone, c, r.plan, r.outcomes);
            ASSERT_FALSE(rr.pending_site);
            ASSERT_EQ(rr.outcome.wires[0].corrected, r.outcome.wires[0].corrected);
        }
    }
    // P(1) = sin^2(pi/6) = 1/4; 5 sigma for 200 runs is about 0.15.
    ASSERT_NEAR(ones / (double)runs, 0.25, 0.16);
}

TEST(logic, deterministic_circuits) {
    HexLattice lat = build_lattice(2, 6);
    auto term = aklt_test::y_fixed();
    ProtocolOptions o;
    o.mode = SamplingMode::IID;
    o.router.spacing = 3;
    o.max_stage1_attempts = 200;
    CircuitSpec flip{1, {Gate::init(0), Gate::rz(0, PI), Gate::rx(0, PI), Gate::readout(0)}};
    for (uint64_t s = 0; s < 5; s++) {
        o.seed = s;
        ASSERT_EQ(run_protocol(lat, term, identity_circuit(1), o).outcome.wires[0].corrected, 0);
        ASSERT_EQ(run_protocol(lat, term, flip, o).outcome.wires[0].corrected, 1);
    }
}

TEST(logic, routing_failure_is_reported) {
    HexLattice lat = build_lattice(2, 2);
    ProtocolOptions o;
    o.max_stage1_attempts = 2;
    CircuitSpec c{1, {Gate::init(0), Gate::rx(0, 0.4), Gate::rz(0, 0.3), Gate::rx(0, 0.2), Gate::readout(0)}};
    ASSERT_THROW(run_protocol(lat, BoundaryTermination::traced(), c, o), RoutingError);
    o.max_stage1_attempts = 0;
    ASSERT_THROW(run_protocol(lat, BoundaryTermination::traced(), c, o), InvalidInput);
}
