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

#include "aklt/verify.h"
#include "gtest/gtest.h"
#include "test_util.h"

using namespace aklt;
using aklt_test::from_rows;
using aklt_test::tight;

namespace {

RouterOptions spacing(int rows) {
    RouterOptions o;
    o.spacing = rows;
    return o;
}

double fidelity(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    cplx ov = 0;
    double na = 0, nb = 0;
    for (size_t k = 0; k < a.size(); k++) {
        ov += std::conj(a[k]) * b[k];
        na += std::norm(a[k]);
        nb += std::norm(b[k]);
    }
    return std::norm(ov) / (na * nb);
}

}  // namespace

TEST(oracle, reference_circuit_sim) {
    CircuitSpec flip{1, {Gate::init(0), Gate::rx(0, M_PI), Gate::readout(0)}};
    Distribution d = reference_circuit_sim(flip);
    ASSERT_NEAR(d[0], 0, 1e-15);
    ASSERT_NEAR(d[1], 1, 1e-15);

    CircuitSpec rot{1, {Gate::init(0), Gate::rz(0, M_PI / 4), Gate::rx(0, M_PI / 3), Gate::readout(0)}};
    d = reference_circuit_sim(rot);
    ASSERT_NEAR(d[1], std::pow(std::sin(M_PI / 6), 2), 1e-14);

    CircuitSpec bell{2, {Gate::init(0), Gate::init(1), Gate::rx(0, M_PI / 2), Gate::cnot(0, 1),
                         Gate::readout(0), Gate::readout(1)}};
    d = reference_circuit_sim(bell);
    ASSERT_NEAR(d[0], 0.5, 1e-14);
    ASSERT_NEAR(d[3], 0.5, 1e-14);
    ASSERT_NEAR(d[1] + d[2], 0, 1e-14);

    ASSERT_NEAR(tv_distance({0.5, 0.5}, {1, 0}), 0.5, 1e-15);
    ASSERT_THROW(tv_distance({1}, {1, 0}), InvalidInput);
}

TEST(oracle, affine_projector) {
    AffineCheck ac = affine_projector_check();
    ASSERT_NEAR(ac.c, 160.0 / 27.0, 1e-12);
    ASSERT_NEAR(ac.d, -55.0 / 108.0, 1e-12);
    ASSERT_LT(ac.residual, 1e-10);
    MatX p = spin3_projector();
    ASSERT_NEAR(p.trace().real(), 7, 1e-10);
    ASSERT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(oracle, state_has_no_spin3_component) {
    ASSERT_LT(hamiltonian_pair_check(build_lattice(2, 2), BoundaryTermination::fixed()), 1e-10);
    for (auto term : {BoundaryTermination::fixed(Vec2(1, 1) / std::sqrt(2.0)), BoundaryTermination::traced()}) {
        ASSERT_LT(hamiltonian_pair_check(build_lattice(2, 3), term), 1e-10);
    }
}

TEST(oracle, valence_bond_construction_matches) {
    for (auto [r, c] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 4}}) {
        HexLattice lat = build_lattice(r, c);
        auto term = BoundaryTermination::fixed();
        StateVector a = build_state(lat, term);
        StateVector b = valence_bond_state(lat, term);
        ASSERT_NEAR(fidelity(a.amplitudes, b.amplitudes), 1, 1e-10) << r << "x" << c;
    }
}

TEST(oracle, correlation_is_symmetric_and_finite) {
    HexLattice lat = build_lattice(2, 4);
    auto term = BoundaryTermination::traced();
    double a = two_point_correlation(lat, term, {0, 0}, {0, 3}, Axis::Z);
    double b = two_point_correlation(lat, term, {0, 3}, {0, 0}, Axis::Z);
    ASSERT_NEAR(a, b, 1e-12);
    // Same site: <S_z^2> - <S_z>^2 = 5/4 for the maximally mixed reduced state.
    ASSERT_NEAR(two_point_correlation(lat, term, {0, 0}, {0, 0}, Axis::Z), 1.25, 1e-9);
}

TEST(oracle, povm_enumeration_is_complete) {
    HexLattice lat = build_lattice(2, 2);
    auto term = BoundaryTermination::fixed();
    BranchPlan bp;
    for (size_t k = 0; k < lat.num_sites(); k++) {
        bp.variants.push_back({{MatX(povm_element(Axis::X)), MatX(povm_element(Axis::Y)), MatX(povm_element(Axis::Z))}});
    }
    JointDistribution j = brute_force_joint(lat, term, bp);
    ASSERT_EQ(j.branches.size(), 81u);
    ASSERT_NEAR(j.total, 1, 1e-12);
    for (const Branch &b : j.branches) {
        AxisAssignment a{2, 2, {}};
        for (int o : b.outcomes) {
            a.axes.push_back((Axis)o);
        }
        ASSERT_NEAR(b.probability, assignment_probability(lat, term, a), 1e-12);
    }
}

TEST(oracle, decoupling_identity) {
    HexLattice lat = build_lattice(2, 4);
    auto term = BoundaryTermination::fixed();
    CircuitSpec c = identity_circuit(1);
    auto found = first_routable_sample(lat, term, c, 400, spacing(3));
    ASSERT_TRUE(found);
    DecouplingReport rep = decoupling_check(lat, found->first, term, found->second, c);
    ASSERT_GT(rep.branches, 0u);
    ASSERT_NEAR(rep.total, assignment_probability(lat, term, found->first), 1e-12);
    ASSERT_LT(rep.max_tv, 1e-8);
}

TEST(oracle, decoupling_rotations) {
    HexLattice lat = build_lattice(2, 6);
    CircuitSpec c{1, {Gate::init(0), Gate::rz(0, M_PI / 4), Gate::rx(0, M_PI / 3), Gate::readout(0)}};
    for (auto term : {BoundaryTermination::fixed(), BoundaryTermination::fixed(Vec2(1, 1) / std::sqrt(2.0))}) {
        auto found = first_routable_sample(lat, term, c, 2000, spacing(3));
        ASSERT_TRUE(found);
        DecouplingReport rep = decoupling_check(lat, found->first, term, found->second, c);
        ASSERT_GT(rep.branches, 1u);
        ASSERT_LT(rep.max_tv, 1e-8);
    }
}

TEST(oracle, decoupling_cnot) {
    HexLattice lat = build_lattice(3, 4);
    auto term = BoundaryTermination::fixed(Vec2(1, 1) / std::sqrt(2.0));
    CircuitSpec c{2, {Gate::init(0), Gate::init(1), Gate::cnot(0, 1), Gate::readout(0), Gate::readout(1)}};
    AxisAssignment a = from_rows({"zyzz", "yzxy", "zxzz"});
    RouteResult r = route_assignment(lat, a, c, term, tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    ASSERT_EQ(aklt_test::role_rows(*r.backbone), (std::vector<std::string>{"OWJI", "ALLA", "OJWI"}));
    DecouplingReport rep = decoupling_check(lat, a, term, *r.backbone, c);
    ASSERT_GT(rep.branches, 1u);
    ASSERT_LT(rep.max_tv, 1e-8);
}

TEST(oracle, biased_readout_is_rejected) {
    // The readout's z cluster reaches a boundary leg fixed to |0^z>, which would pin its outcome.
    HexLattice lat = build_lattice(2, 6);
    auto term = BoundaryTermination::fixed();
    CircuitSpec c{1, {Gate::init(0), Gate::rz(0, M_PI / 4), Gate::rx(0, M_PI / 3), Gate::readout(0)}};
    AxisAssignment a = from_rows({"zxzzyx", "xyxxxz"});
    RouterOptions o;
    o.spacing = 3;
    RouteResult r = route_assignment(lat, a, c, term, o);
    if (r.backbone) {
        ASSERT_NE(r.backbone->wires[0].sites.back(), (SiteId{0, 0}));
    }
}

TEST(oracle, single_site_has_uniform_axis_marginal) {
    HexLattice lat = build_lattice(1, 1);
    BranchPlan bp;
    bp.variants.push_back({{MatX(povm_element(Axis::X)), MatX(povm_element(Axis::Y)), MatX(povm_element(Axis::Z))}});
    JointDistribution j = brute_force_joint(lat, BoundaryTermination::traced(), bp);
    ASSERT_EQ(j.branches.size(), 3u);
    for (const Branch &b : j.branches) {
        ASSERT_NEAR(b.probability, 1.0 / 3, 1e-12);
    }
}

TEST(oracle, neighbour_correlation_is_antiferromagnetic) {
    HexLattice lat = build_lattice(2, 4);
    auto term = BoundaryTermination::traced();
    for (Axis a : ALL_AXES) {
        ASSERT_LT(two_point_correlation(lat, term, {0, 1}, {0, 2}, a), -0.1);
        ASSERT_LT(two_point_correlation(lat, term, {0, 2}, {1, 2}, a), -0.1);
    }
}

TEST(oracle, enumerated_marginal_matches_reduced_density) {
    HexLattice lat = build_lattice(2, 3);
    auto term = aklt_test::y_fixed();
    for (SiteId s : {SiteId{0, 0}, SiteId{1, 1}}) {
        BranchPlan bp;
        for (size_t k = 0; k < lat.num_sites(); k++) {
            if (k == lat.index(s)) {
                std::vector<MatX> rows;
                for (int m = 0; m < 4; m++) {
                    rows.push_back(MatX(Mat4::Identity().row(m)));
                }
                bp.variants.push_back({rows});
            } else {
                bp.variants.push_back({{MatX(Mat4::Identity())}});
            }
        }
        JointDistribution j = brute_force_joint(lat, term, bp);
        Mat4 rho = reduced_density(lat, term, s);
        ASSERT_EQ(j.branches.size(), 4u);
        for (const Branch &b : j.branches) {
            int m = b.outcomes[lat.index(s)];
            ASSERT_NEAR(b.probability, rho(m, m).real() / rho.trace().real(), 1e-12);
        }
    }
}

TEST(oracle, correlation_falls_back_to_strip_contraction) {
    HexLattice lat = build_lattice(2, 4);
    auto term = BoundaryTermination::traced();
    ContractionLimits small;
    small.max_amplitudes = 1024;
    for (Axis a : ALL_AXES) {
        double dense = two_point_correlation(lat, term, {0, 1}, {1, 2}, a);
        ASSERT_NEAR(two_point_correlation(lat, term, {0, 1}, {1, 2}, a, small), dense, 1e-12);
        ASSERT_NEAR(two_point_correlation(lat, term, {0, 1}, {0, 1}, a, small), 1.25, 1e-12);
    }
}

TEST(oracle, correlation_decays_along_strip) {
    HexLattice lat = build_lattice(2, 6);
    auto term = BoundaryTermination::traced();
    double c1 = std::abs(two_point_correlation(lat, term, {0, 1}, {0, 2}, Axis::Z));
    double c3 = std::abs(two_point_correlation(lat, term, {0, 1}, {0, 4}, Axis::Z));
    ASSERT_LT(c3, c1);
}
