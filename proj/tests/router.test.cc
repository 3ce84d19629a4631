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

#include <map>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace aklt;

using aklt_test::from_rows;
using aklt_test::role_rows;
using aklt_test::tight;
using aklt_test::y_fixed;

TEST(router, clusters) {
    HexLattice lat = build_lattice(1, 4);
    AxisAssignment a = from_rows({"zzxx"});
    auto clusters = find_clusters(lat, matched_bonds(lat, a), a);
    ASSERT_EQ(clusters.size(), 2u);
    ASSERT_EQ(clusters[0].axis, Axis::Z);
    ASSERT_EQ(clusters[0].sites, (std::vector<SiteId>{{0, 0}, {0, 1}}));
    ASSERT_EQ(clusters[1].axis, Axis::X);
    ASSERT_EQ(clusters[1].bonds, (std::vector<size_t>{2}));
    ASSERT_EQ(cluster_of_sites(lat, clusters), (std::vector<int>{0, 0, 1, 1}));
}

TEST(router, off_limits_hexagon) {
    HexLattice lat = build_lattice(2, 3);
    AxisAssignment a = from_rows({"zzz", "xxx"});
    MatchedBondSet m = matched_bonds(lat, a);
    auto clusters = find_clusters(lat, m, a);
    ASSERT_EQ(clusters.size(), 2u);
    OffLimitsReport r = flag_off_limits(lat, clusters, m);
    ASSERT_EQ(r.pairs.size(), 1u);
    ASSERT_EQ(r.pairs[0].joining_bonds.size(), 2u);
    ASSERT_EQ(r.pairs[0].disabled, 0);
    ASSERT_EQ(r.disabled, (std::vector<bool>{true, false}));

    // (1,2) joins the z cluster, which still meets the xx pair through two bonds.
    AxisAssignment b = from_rows({"zzz", "xxz"});
    MatchedBondSet mb = matched_bonds(lat, b);
    auto cb = find_clusters(lat, mb, b);
    OffLimitsReport rb = flag_off_limits(lat, cb, mb);
    ASSERT_EQ(rb.pairs.size(), 1u);
    ASSERT_EQ(cb[rb.pairs[0].disabled].axis, Axis::X);
}

TEST(router, off_limits_prefers_smaller_cluster) {
    HexLattice lat = build_lattice(2, 3);
    AxisAssignment a = from_rows({"zzz", "xxy"});
    MatchedBondSet m = matched_bonds(lat, a);
    auto clusters = find_clusters(lat, m, a);
    // Only the z row and the xx pair are clusters; they share one unmatched bond.
    ASSERT_EQ(clusters.size(), 2u);
    ASSERT_TRUE(flag_off_limits(lat, clusters, m).pairs.empty());
}

TEST(router, straight_wire) {
    HexLattice lat = build_lattice(2, 4);
    AxisAssignment a = from_rows({"xzxz", "zyzy"});
    auto term = y_fixed();
    RouteResult r = route_assignment(lat, a, identity_circuit(1), term, tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    ASSERT_EQ(role_rows(*r.backbone), (std::vector<std::string>{".OWI", "..A."}));
    ASSERT_EQ(r.backbone->wires[0].sites, (std::vector<SiteId>{{0, 3}, {0, 2}, {0, 1}}));
    ASSERT_EQ(r.backbone->partner[lat.index({1, 2})], (int)lat.index({0, 2}));
    auto nodes = region_nodes(lat, *r.backbone);
    ASSERT_EQ(nodes.size(), 1u);
    ASSERT_EQ(nodes[0].in, Dir::Right);
    ASSERT_EQ(nodes[0].out, Dir::Left);
    ASSERT_EQ(nodes[0].cond, Dir::Vertical);
}

TEST(router, cluster_extension) {
    HexLattice lat = build_lattice(2, 4);
    AxisAssignment a = from_rows({"xzxz", "zzxz"});
    auto term = y_fixed();
    RouteResult r = route_assignment(lat, a, identity_circuit(1), term, tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    ASSERT_EQ(role_rows(*r.backbone), (std::vector<std::string>{".OWI", ".ACA"}));
    ASSERT_EQ(r.backbone->attachments.size(), 1u);
    ASSERT_EQ(r.backbone->attachments[0].anchor, (SiteId{0, 2}));
    auto nodes = region_nodes(lat, *r.backbone);
    ASSERT_EQ(nodes.size(), 2u);
    ASSERT_EQ(nodes[1].role, NodeRole::Cluster);
    ASSERT_EQ(nodes[1].out, Dir::Vertical);
    ASSERT_EQ(nodes[1].parent, -1);
}

TEST(router, blocked_by_same_axis_loop) {
    // The only candidate wire sites are conditioned by x clusters containing a hexagon.
    HexLattice lat = build_lattice(3, 4);
    AxisAssignment a = from_rows({"xzxz", "zxxx", "zxxx"});
    RouteResult r = route_assignment(lat, a, identity_circuit(1), y_fixed(), tight());
    ASSERT_FALSE(r.backbone);
    ASSERT_EQ(r.failure, RouteFailure::NoPath);
}

TEST(router, rotation_site_has_gate_axis) {
    HexLattice lat = build_lattice(2, 5);
    AxisAssignment a = from_rows({"zxyxz", "xzzzx"});
    CircuitSpec c{1, {Gate::init(0), Gate::rx(0, 0.3), Gate::rx(0, 0.2), Gate::readout(0)}};
    RouteResult r = route_assignment(lat, a, c, y_fixed(), tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    ASSERT_EQ(r.backbone->rotations.size(), 2u);
    ASSERT_EQ(r.backbone->rotations[0].site, (SiteId{0, 3}));
    ASSERT_EQ(r.backbone->rotations[1].site, (SiteId{0, 1}));
    ASSERT_EQ(role_rows(*r.backbone), (std::vector<std::string>{"OWWWI", "..A.."}));
    // Rz needs a z site.
    CircuitSpec bad{1, {Gate::init(0), Gate::rz(0, 0.3), Gate::rz(0, 0.3), Gate::readout(0)}};
    RouteResult rb = route_assignment(lat, a, bad, y_fixed(), tight());
    ASSERT_FALSE(rb.backbone);
}

TEST(router, fiducial_rotation_needs_no_site) {
    HexLattice lat = build_lattice(2, 4);
    AxisAssignment a = from_rows({"xzxz", "zyzy"});
    CircuitSpec c{1, {Gate::init(0), Gate::rx(0, 0.0), Gate::readout(0)}};
    RouteResult r = route_assignment(lat, a, c, y_fixed(), tight());
    ASSERT_TRUE(r.backbone) << r.diagnostic;
    ASSERT_TRUE(r.backbone->rotations.empty());
}

TEST(router, cnot_junction) {
    HexLattice lat = build_lattice(3, 4);
    AxisAssignment a = from_rows({"zzzz", "xxxy", "zxyz"});
    CircuitSpec c{2, {Gate::init(0), Gate::init(1), Gate::cnot(0, 1), Gate::readout(0), Gate::readout(1)}};
    auto term = BoundaryTermination::fixed(Vec2(1, 1) / std::sqrt(2.0));
    RouteResult r = route_assignment(lat, a, c, term, tight());
    // The chain needs different-axis associates, which this assignment lacks.
    ASSERT_FALSE(r.backbone);

    AxisAssignment good = from_rows({"zyzz", "yzxy", "zxzz"});
    RouteResult g = route_assignment(lat, good, c, term, tight());
    ASSERT_TRUE(g.backbone) << g.diagnostic;
    const Backbone &bb = *g.backbone;
    ASSERT_EQ(role_rows(bb), (std::vector<std::string>{"OWJI", "ALLA", "OJWI"}));
    ASSERT_EQ(bb.junctions.size(), 1u);
    ASSERT_EQ(bb.junctions[0].top, (SiteId{0, 2}));
    ASSERT_EQ(bb.junctions[0].bottom, (SiteId{2, 1}));
    ASSERT_EQ(bb.junctions[0].chain, (std::vector<SiteId>{{1, 2}, {1, 1}}));
    auto nodes = region_nodes(lat, bb);
    std::map<NodeRole, int> count;
    for (const RegionNode &n : nodes) {
        count[n.role]++;
    }
    ASSERT_EQ(count[NodeRole::Junction], 2);
    ASSERT_EQ(count[NodeRole::Chain], 2);
    ASSERT_EQ(count[NodeRole::Wire], 2);
}

TEST(router, invalid_circuits) {
    HexLattice lat = build_lattice(5, 6);
    AxisAssignment a = uniform_assignment(lat, Axis::Z);
    auto term = BoundaryTermination::fixed();
    CircuitSpec far{3, {Gate::init(0), Gate::init(1), Gate::init(2), Gate::cnot(0, 2), Gate::readout(0),
                        Gate::readout(1), Gate::readout(2)}};
    ASSERT_EQ(route_assignment(lat, a, far, term, tight()).failure, RouteFailure::InvalidCircuit);
    HexLattice short_lat = build_lattice(3, 6);
    AxisAssignment sa = uniform_assignment(short_lat, Axis::Z);
    ASSERT_EQ(route_assignment(short_lat, sa, identity_circuit(2), term).failure, RouteFailure::InvalidCircuit);
    CircuitSpec no_init{1, {Gate::readout(0)}};
    ASSERT_EQ(route_assignment(lat, a, no_init, term).failure, RouteFailure::InvalidCircuit);
}

TEST(router, audit_rejects_tampering) {
    HexLattice lat = build_lattice(2, 5);
    AxisAssignment a = from_rows({"zxyxz", "xzzzx"});
    CircuitSpec c{1, {Gate::init(0), Gate::rx(0, 0.3), Gate::rx(0, 0.2), Gate::readout(0)}};
    auto term = y_fixed();
    Backbone bb = *route_assignment(lat, a, c, term, tight()).backbone;
    ASSERT_TRUE(audit_backbone(lat, a, term, bb, c).empty());

    AxisAssignment changed = a;
    changed.at({1, 2}) = Axis::Y;
    ASSERT_FALSE(audit_backbone(lat, changed, term, bb, c).empty());

    Backbone swapped = bb;
    std::swap(swapped.rotations[0].site, swapped.rotations[1].site);
    ASSERT_FALSE(audit_backbone(lat, a, term, swapped, c).empty());

    Backbone extra = bb;
    extra.roles[lat.index({1, 2})] = SiteRole::ClusterExtension;
    ASSERT_FALSE(audit_backbone(lat, a, term, extra, c).empty());

    // (0,1) is conditioned through its dangling leg, which a traced boundary does not fix.
    ASSERT_FALSE(audit_backbone(lat, a, BoundaryTermination::traced(), bb, c).empty());
}

TEST(router, random_assignments_route_and_audit) {
    HexLattice lat = build_lattice(8, 16);
    auto term = y_fixed();
    CircuitSpec c{2, {Gate::init(0), Gate::init(1), Gate::rz(0, 0.5), Gate::cnot(0, 1), Gate::rx(1, 0.25),
                      Gate::readout(0), Gate::readout(1)}};
    int routed = 0;
    for (uint64_t seed = 0; seed < 150; seed++) {
        AxisAssignment a = stage1_sample(lat, term, SamplingMode::IID, seed);
        RouteResult r = route_assignment(lat, a, c, term);
        if (!r.backbone) {
            ASSERT_FALSE(r.diagnostic.empty());
            continue;
        }
        routed++;
        ASSERT_TRUE(audit_backbone(lat, a, term, *r.backbone, c).empty());
        size_t comp = 0;
        for (size_t k = 0; k < lat.num_sites(); k++) {
            comp += r.backbone->complementary(lat.site(k));
        }
        ASSERT_EQ(region_nodes(lat, *r.backbone).size(), comp);
        RouteResult again = route_assignment(lat, a, c, term);
        ASSERT_EQ(backbone_to_json(*again.backbone), backbone_to_json(*r.backbone));
    }
    ASSERT_GT(routed, 4);
}

TEST(router, percolation) {
    HexLattice lat = build_lattice(3, 5);
    ASSERT_TRUE(spans_left_right(lat, std::vector<bool>(lat.bonds.size(), true)));
    ASSERT_FALSE(spans_left_right(lat, std::vector<bool>(lat.bonds.size(), false)));
    ASSERT_EQ(spanning_probability(6, 12, 0.0, 50, 1).fraction, 0.0);
    ASSERT_EQ(spanning_probability(6, 12, 1.0, 50, 1).fraction, 1.0);
    SpanningEstimate a = spanning_probability(6, 12, 0.65, 400, 3, 1);
    SpanningEstimate b = spanning_probability(6, 12, 0.65, 400, 3, 3);
    ASSERT_EQ(a.fraction, b.fraction);
    ASSERT_GT(a.std_error, 0);
    ASSERT_THROW(spanning_probability(6, 12, 1.5, 10, 1), InvalidInput);
}
