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

#ifndef AKLT_ROUTER_H
#define AKLT_ROUTER_H

#include <optional>
#include <string>
#include <vector>

#include "aklt/circuit.h"
#include "aklt/contraction.h"
#include "aklt/lattice.h"
#include "aklt/sampler.h"

namespace aklt {

/// Connected component of matched bonds (all sites share one axis).
struct Cluster {
    int id = 0;
    Axis axis = Axis::Z;
    std::vector<size_t> bonds;
    std::vector<SiteId> sites;
};

std::vector<Cluster> find_clusters(
    const HexLattice &lattice, const MatchedBondSet &matched, const AxisAssignment &assignment);

/// Cluster id of every site, or -1 for sites without matched bonds.
std::vector<int> cluster_of_sites(const HexLattice &lattice, const std::vector<Cluster> &clusters);

/// Two clusters joined by at least two unmatched bonds.
struct OffLimitsPair {
    int first = 0;
    int second = 0;
    std::vector<size_t> joining_bonds;
    /// The member of the pair that is disabled.
    int disabled = 0;
};

struct OffLimitsReport {
    std::vector<OffLimitsPair> pairs;
    /// Indexed by cluster id.
    std::vector<bool> disabled;
};

/// Pairs are visited in (first, second) order; a pair with no disabled member disables the
/// cluster with fewer sites, ties going to the lower id.
OffLimitsReport flag_off_limits(
    const HexLattice &lattice, const std::vector<Cluster> &clusters, const MatchedBondSet &matched);

enum class SiteRole : uint8_t { Unused, Init, Readout, Wire, Junction, Chain, Associate, ClusterExtension };

/// One-character grid symbol: . I O W J L A C
char role_char(SiteRole role);

/// Sites of one logical wire from its init site (first) to its readout site (last).
struct WirePath {
    int wire = 0;
    std::vector<SiteId> sites;
};

/// CNOT realization: `top` is a Top site of the control wire (axis z), `bottom` a Bot site of
/// the target wire (axis x), joined through `chain` (ordered from top to bottom).
struct JunctionPlacement {
    size_t gate = 0;
    int control = 0;
    int target = 0;
    SiteId top;
    SiteId bottom;
    std::vector<SiteId> chain;
};

struct RotationPlacement {
    size_t gate = 0;
    SiteId site;
};

/// Same-axis matched cluster renormalized into the conditioning leg `leg` of `anchor`.
struct ClusterAttachment {
    SiteId anchor;
    Dir leg = Dir::Left;
    std::vector<SiteId> members;
};

struct Backbone {
    int rows = 0;
    int cols = 0;
    std::vector<SiteRole> roles;
    /// Wire id for Init/Readout/Wire/Junction sites, else -1.
    std::vector<int> wire_of;
    /// Associate: a complementary site it conditions. ClusterExtension: its anchor. Else -1.
    std::vector<int> partner;
    std::vector<WirePath> wires;
    std::vector<JunctionPlacement> junctions;
    std::vector<RotationPlacement> rotations;
    std::vector<ClusterAttachment> attachments;

    SiteRole role(SiteId s) const {
        return roles[(size_t)s.row * (size_t)cols + (size_t)s.col];
    }
    /// Measured in a complementary basis in stage 2.
    bool complementary(SiteId s) const;
};

bool is_complementary_role(SiteRole role);

enum class NodeRole : uint8_t { Wire, Junction, Chain, Cluster };

/// A complementary-measured site with the legs through which the logical map flows.
struct RegionNode {
    SiteId site;
    NodeRole role = NodeRole::Wire;
    int wire = -1;
    Dir in = Dir::Right;
    Dir out = Dir::Left;
    /// Conditioning (associate) leg; absent for junctions.
    std::optional<Dir> cond;
    /// Cluster nodes: index of the node their output feeds, or -1 when it feeds the anchor.
    int parent = -1;
    /// Cluster nodes: index of the attachment.
    int attachment = -1;
};

/// Wire nodes in path order, then chain nodes top to bottom, then cluster nodes leaves first.
std::vector<RegionNode> region_nodes(const HexLattice &lattice, const Backbone &backbone);

/// Direction of the leg of `a` that points to the adjacent site `b`.
Dir direction_to(SiteId a, SiteId b);

/// The leg that is neither `a` nor `b`.
Dir remaining_dir(Dir a, Dir b);

struct RouterOptions {
    /// Rows per wire band plus one gap row; wire w lives in rows [w*s, w*s+s-2].
    int spacing = 4;
    int max_attempts = 64;
    int max_cluster_sites = 64;
};

enum class RouteFailure : uint8_t { None, InvalidCircuit, NoPath, NoJunction, Audit };

const char *route_failure_name(RouteFailure failure);

struct RouteResult {
    std::optional<Backbone> backbone;
    RouteFailure failure = RouteFailure::None;
    std::string diagnostic;
    int attempts = 0;
};

RouteResult route_backbone(
    const HexLattice &lattice, const AxisAssignment &assignment, const std::vector<Cluster> &clusters,
    const std::vector<bool> &disabled, const CircuitSpec &circuit, const BoundaryTermination &term,
    const RouterOptions &options = {});

/// Convenience: clusters, off-limits flags and routing in one call.
RouteResult route_assignment(
    const HexLattice &lattice, const AxisAssignment &assignment, const CircuitSpec &circuit,
    const BoundaryTermination &term, const RouterOptions &options = {});

struct AuditIssue {
    SiteId site;
    std::string message;
};

/// Independent validity check of a backbone. Empty result means valid.
std::vector<AuditIssue> audit_backbone(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit);

/// {"format_version": 1, "rows", "cols", "roles": ["IWWO..", ...], "wires": [...], ...}
std::string backbone_to_json(const Backbone &backbone);

struct SpanningEstimate {
    double fraction = 0;
    double std_error = 0;
    size_t trials = 0;
};

/// Left-right crossing by occupied bonds.
bool spans_left_right(const HexLattice &lattice, const std::vector<bool> &occupied);

/// Monte Carlo bond percolation on the brick wall; trial t uses derive_seed(seed, t).
SpanningEstimate spanning_probability(int rows, int cols, double p, size_t trials, uint64_t seed, int jobs = 1);

}  // namespace aklt

#endif
