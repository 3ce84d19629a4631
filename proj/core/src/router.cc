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

#include <algorithm>
#include <deque>
#include <map>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"

namespace aklt {

namespace {

struct DisjointSets {
    std::vector<size_t> parent;
    explicit DisjointSets(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), size_t{0});
    }
    size_t find(size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

}  // namespace

std::vector<Cluster> find_clusters(
    const HexLattice &lattice, const MatchedBondSet &matched, const AxisAssignment &assignment) {
    if (matched.matched.size() != lattice.bonds.size() || assignment.axes.size() != lattice.num_sites()) {
        throw InvalidInput("matched bonds or assignment do not match the lattice");
    }
    DisjointSets sets(lattice.num_sites());
    for (size_t i = 0; i < lattice.bonds.size(); i++) {
        if (matched.matched[i]) {
            sets.unite(lattice.index(lattice.bonds[i].a), lattice.index(lattice.bonds[i].b));
        }
    }
    std::map<size_t, int> id_of_root;
    std::vector<Cluster> clusters;
    for (size_t i = 0; i < lattice.bonds.size(); i++) {
        if (!matched.matched[i]) {
            continue;
        }
        size_t root = sets.find(lattice.index(lattice.bonds[i].a));
        auto it = id_of_root.find(root);
        if (it == id_of_root.end()) {
            it = id_of_root.emplace(root, -1).first;
        }
        (void)it;
    }
    // Ids follow the smallest member site in row-major order.
    for (auto &[root, id] : id_of_root) {
        id = (int)clusters.size();
        Cluster c;
        c.id = id;
        c.axis = assignment.axes[root];
        clusters.push_back(c);
    }
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        auto it = id_of_root.find(sets.find(k));
        if (it != id_of_root.end()) {
            clusters[it->second].sites.push_back(lattice.site(k));
        }
    }
    for (size_t i = 0; i < lattice.bonds.size(); i++) {
        if (matched.matched[i]) {
            clusters[id_of_root[sets.find(lattice.index(lattice.bonds[i].a))]].bonds.push_back(i);
        }
    }
    return clusters;
}

std::vector<int> cluster_of_sites(const HexLattice &lattice, const std::vector<Cluster> &clusters) {
    std::vector<int> out(lattice.num_sites(), -1);
    for (const Cluster &c : clusters) {
        for (SiteId s : c.sites) {
            out[lattice.index(s)] = c.id;
        }
    }
    return out;
}

OffLimitsReport flag_off_limits(
    const HexLattice &lattice, const std::vector<Cluster> &clusters, const MatchedBondSet &matched) {
    std::vector<int> owner = cluster_of_sites(lattice, clusters);
    std::map<std::pair<int, int>, std::vector<size_t>> joins;
    for (size_t i = 0; i < lattice.bonds.size(); i++) {
        if (matched.matched[i]) {
            continue;
        }
        int a = owner[lattice.index(lattice.bonds[i].a)];
        int b = owner[lattice.index(lattice.bonds[i].b)];
        if (a < 0 || b < 0 || a == b) {
            continue;
        }
        joins[{std::min(a, b), std::max(a, b)}].push_back(i);
    }
    OffLimitsReport report;
    report.disabled.assign(clusters.size(), false);
    for (const auto &[key, bonds] : joins) {
        if (bonds.size() < 2) {
            continue;
        }
        OffLimitsPair pair{key.first, key.second, bonds, -1};
        if (report.disabled[key.first]) {
            pair.disabled = key.first;
        } else if (report.disabled[key.second]) {
            pair.disabled = key.second;
        } else {
            size_t n1 = clusters[key.first].sites.size();
            size_t n2 = clusters[key.second].sites.size();
            pair.disabled = n2 < n1 ? key.second : key.first;
            report.disabled[pair.disabled] = true;
        }
        report.pairs.push_back(pair);
    }
    return report;
}

char role_char(SiteRole role) {
    switch (role) {
        case SiteRole::Unused:
            return '.';
        case SiteRole::Init:
            return 'I';
        case SiteRole::Readout:
            return 'O';
        case SiteRole::Wire:
            return 'W';
        case SiteRole::Junction:
            return 'J';
        case SiteRole::Chain:
            return 'L';
        case SiteRole::Associate:
            return 'A';
        case SiteRole::ClusterExtension:
            return 'C';
    }
    return '?';
}

bool is_complementary_role(SiteRole role) {
    return role == SiteRole::Wire || role == SiteRole::Junction || role == SiteRole::Chain ||
           role == SiteRole::ClusterExtension;
}

bool Backbone::complementary(SiteId s) const {
    return is_complementary_role(role(s));
}

Dir direction_to(SiteId a, SiteId b) {
    if (a.row == b.row && b.col == a.col - 1) {
        return Dir::Left;
    }
    if (a.row == b.row && b.col == a.col + 1) {
        return Dir::Right;
    }
    if (a.col == b.col && std::abs(a.row - b.row) == 1) {
        return Dir::Vertical;
    }
    throw InvalidInput("sites " + a.str() + " and " + b.str() + " are not adjacent");
}

Dir remaining_dir(Dir a, Dir b) {
    for (Dir d : ALL_DIRS) {
        if (d != a && d != b) {
            return d;
        }
    }
    throw InvalidInput("remaining_dir needs two distinct legs");
}

const char *route_failure_name(RouteFailure failure) {
    switch (failure) {
        case RouteFailure::None:
            return "none";
        case RouteFailure::InvalidCircuit:
            return "invalid_circuit";
        case RouteFailure::NoPath:
            return "no_path";
        case RouteFailure::NoJunction:
            return "no_junction";
        case RouteFailure::Audit:
            return "audit";
    }
    return "?";
}

std::vector<RegionNode> region_nodes(const HexLattice &lattice, const Backbone &backbone) {
    std::vector<RegionNode> nodes;
    std::map<SiteId, int> junction_wire;
    for (const JunctionPlacement &j : backbone.junctions) {
        junction_wire[j.top] = j.control;
        junction_wire[j.bottom] = j.target;
    }
    for (const WirePath &w : backbone.wires) {
        for (size_t k = 1; k + 1 < w.sites.size(); k++) {
            RegionNode n;
            n.site = w.sites[k];
            n.wire = w.wire;
            n.in = direction_to(w.sites[k], w.sites[k - 1]);
            n.out = direction_to(w.sites[k], w.sites[k + 1]);
            if (junction_wire.count(n.site)) {
                n.role = NodeRole::Junction;
            } else {
                n.role = NodeRole::Wire;
                n.cond = remaining_dir(n.in, n.out);
            }
            nodes.push_back(n);
        }
    }
    for (const JunctionPlacement &j : backbone.junctions) {
        for (size_t k = 0; k < j.chain.size(); k++) {
            RegionNode n;
            n.site = j.chain[k];
            n.role = NodeRole::Chain;
            n.in = direction_to(n.site, k == 0 ? j.top : j.chain[k - 1]);
            n.out = direction_to(n.site, k + 1 == j.chain.size() ? j.bottom : j.chain[k + 1]);
            n.cond = remaining_dir(n.in, n.out);
            nodes.push_back(n);
        }
    }
    for (size_t a = 0; a < backbone.attachments.size(); a++) {
        const ClusterAttachment &att = backbone.attachments[a];
        std::set<SiteId> members(att.members.begin(), att.members.end());
        SiteId root = *lattice.neighbor(att.anchor, att.leg);
        // Breadth-first tree from the member touching the anchor.
        std::map<SiteId, SiteId> parent_of;
        std::map<SiteId, Dir> out_of;
        std::vector<SiteId> order{root};
        out_of[root] = facing(att.leg);
        for (size_t q = 0; q < order.size(); q++) {
            SiteId m = order[q];
            for (Dir d : ALL_DIRS) {
                auto n = lattice.neighbor(m, d);
                if (!n || !members.count(*n) || out_of.count(*n)) {
                    continue;
                }
                parent_of[*n] = m;
                out_of[*n] = facing(d);
                order.push_back(*n);
            }
        }
        if (order.size() != members.size()) {
            throw ConsistencyError("cluster attachment at " + att.anchor.str() + " is not connected");
        }
        std::map<SiteId, int> node_of;
        size_t base = nodes.size();
        for (size_t q = order.size(); q-- > 0;) {
            SiteId m = order[q];
            RegionNode n;
            n.site = m;
            n.role = NodeRole::Cluster;
            n.out = out_of[m];
            n.attachment = (int)a;
            std::vector<Dir> children, others;
            for (Dir d : ALL_DIRS) {
                if (d == n.out) {
                    continue;
                }
                auto nb = lattice.neighbor(m, d);
                if (nb && members.count(*nb) && parent_of.count(*nb) && parent_of[*nb] == m) {
                    children.push_back(d);
                } else {
                    others.push_back(d);
                }
            }
            // A non-node input conditions the measurement whenever one exists.
            if (!others.empty()) {
                n.cond = others.back();
                n.in = others.size() == 2 ? others.front() : children.front();
            } else {
                n.in = children.front();
                n.cond = children.back();
            }
            node_of[m] = (int)nodes.size();
            nodes.push_back(n);
        }
        for (size_t k = base; k < nodes.size(); k++) {
            auto it = parent_of.find(nodes[k].site);
            nodes[k].parent = it == parent_of.end() ? -1 : node_of[it->second];
        }
    }
    return nodes;
}

namespace {

/// Problem with the z cluster around a readout site: a biased fixed termination or another
/// standard-measured member would fix or reveal the readout bit.
std::optional<std::pair<SiteId, std::string>> readout_exposure(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const std::vector<SiteRole> &roles, SiteId readout, SiteId prev) {
    std::vector<SiteId> stack{readout};
    std::set<SiteId> seen{readout};
    while (!stack.empty()) {
        SiteId s = stack.back();
        stack.pop_back();
        for (Dir d : ALL_DIRS) {
            auto n = lattice.neighbor(s, d);
            if (!n) {
                if (term.mode == BoundaryTermination::Mode::Fixed) {
                    auto label = basis_label(term.vector_for(lattice.index(s), d));
                    if (!label || label->first == Axis::Z) {
                        return std::make_pair(s, "fixed termination at " + s.str() + " biases readout " + readout.str());
                    }
                }
                continue;
            }
            SiteRole role = roles[lattice.index(*n)];
            if (s == readout && *n != prev && is_complementary_role(role)) {
                return std::make_pair(s, "readout " + readout.str() + " conditions " + n->str());
            }
            if (assignment.at(*n) != Axis::Z || is_complementary_role(role) || seen.count(*n)) {
                continue;
            }
            if (role != SiteRole::Unused) {
                return std::make_pair(s, "standard z site " + n->str() + " copies readout " + readout.str());
            }
            seen.insert(*n);
            stack.push_back(*n);
        }
    }
    return std::nullopt;
}


enum class Occ : uint8_t { Free, Comp, Std };

struct Head {
    enum class Kind : uint8_t { Init, Gate, Junction };
    SiteId site;
    Dir in = Dir::Right;
    Kind kind = Kind::Init;
};

struct Conditioning {
    bool ok = false;
    std::vector<SiteId> members;
    std::vector<SiteId> associates;
};

struct BfsState {
    SiteId site;
    Dir in;
    int parent;
};

struct Failure {
    RouteFailure kind;
    std::string message;
    std::optional<SiteId> culprit;
};

class RouterImpl {
   public:
    RouterImpl(
        const HexLattice &lat, const AxisAssignment &asg, const BoundaryTermination &term,
        const std::vector<bool> &forbidden, const std::vector<bool> &banned, const RouterOptions &opts)
        : lat_(lat), asg_(asg), term_(term), forbidden_(forbidden), banned_(banned), opts_(opts) {
        occ_.assign(lat.num_sites(), Occ::Free);
        bb_.rows = lat.rows;
        bb_.cols = lat.cols;
        bb_.roles.assign(lat.num_sites(), SiteRole::Unused);
        bb_.wire_of.assign(lat.num_sites(), -1);
        bb_.partner.assign(lat.num_sites(), -1);
    }

    std::optional<Failure> run(const CircuitSpec &circuit) {
        heads_.assign(circuit.num_wires, Head{});
        bb_.wires.assign(circuit.num_wires, WirePath{});
        for (int w = 0; w < circuit.num_wires; w++) {
            bb_.wires[w].wire = w;
            if (band_lo(w) >= lat_.rows) {
                return Failure{
                    RouteFailure::InvalidCircuit, "lattice has too few rows for wire " + std::to_string(w), {}};
            }
        }
        for (size_t gi = 0; gi < circuit.gates.size(); gi++) {
            const Gate &g = circuit.gates[gi];
            std::optional<Failure> f;
            switch (g.kind) {
                case Gate::Kind::Init:
                    f = place_init(g.wire);
                    break;
                case Gate::Kind::Rz:
                case Gate::Kind::Rx:
                    if (!g.is_fiducial()) {
                        f = place_rotation(gi, g);
                    }
                    break;
                case Gate::Kind::Cnot:
                    f = place_cnot(gi, g);
                    break;
                case Gate::Kind::Readout:
                    f = place_readout(g.wire);
                    break;
            }
            if (f) {
                return f;
            }
        }
        return std::nullopt;
    }

    Backbone backbone() const {
        return bb_;
    }

   private:
    size_t idx(SiteId s) const {
        return lat_.index(s);
    }
    Axis axis(SiteId s) const {
        return asg_.at(s);
    }
    int band_lo(int w) const {
        return w * opts_.spacing;
    }
    int band_hi(int w) const {
        return std::min(w * opts_.spacing + opts_.spacing - 2, lat_.rows - 1);
    }
    bool in_band(int w, SiteId s) const {
        return s.row >= band_lo(w) && s.row <= band_hi(w);
    }
    bool usable(SiteId s) const {
        return occ_[idx(s)] == Occ::Free && !banned_[idx(s)] && !forbidden_[idx(s)];
    }

    bool dangling_ok(SiteId s, Dir d, Axis mu) const {
        if (term_.mode != BoundaryTermination::Mode::Fixed) {
            return false;
        }
        auto label = basis_label(term_.vector_for(idx(s), d));
        return label && label->first != mu;
    }

    /// Whether complementary site `u` can be conditioned through leg `t`.
    Conditioning conditioning(SiteId u, Dir t, const std::set<SiteId> &tentative) const {
        Conditioning c;
        Axis mu = axis(u);
        auto w = lat_.neighbor(u, t);
        if (!w) {
            c.ok = dangling_ok(u, t, mu);
            return c;
        }
        if (occ_[idx(*w)] == Occ::Comp || tentative.count(*w)) {
            return c;
        }
        if (axis(*w) != mu) {
            c.associates.push_back(*w);
            c.ok = true;
            return c;
        }
        if (!usable(*w)) {
            return c;
        }
        std::set<SiteId> members{*w};
        std::vector<SiteId> queue{*w};
        size_t edge_ends = 0;
        for (size_t q = 0; q < queue.size(); q++) {
            SiteId m = queue[q];
            for (Dir d : ALL_DIRS) {
                auto n = lat_.neighbor(m, d);
                if (!n) {
                    if (!dangling_ok(m, d, mu)) {
                        return c;
                    }
                    continue;
                }
                if (*n == u) {
                    if (m == *w && d == facing(t)) {
                        continue;
                    }
                    return c;
                }
                if (axis(*n) == mu) {
                    edge_ends++;
                    if (members.count(*n)) {
                        continue;
                    }
                    if (!usable(*n) || tentative.count(*n)) {
                        return c;
                    }
                    if ((int)members.size() >= opts_.max_cluster_sites) {
                        return c;
                    }
                    members.insert(*n);
                    queue.push_back(*n);
                } else {
                    if (occ_[idx(*n)] == Occ::Comp || tentative.count(*n)) {
                        return c;
                    }
                    c.associates.push_back(*n);
                }
            }
        }
        // Tree: each internal edge seen from both ends.
        if (edge_ends / 2 + 1 != members.size()) {
            return c;
        }
        c.members = queue;
        c.ok = true;
        return c;
    }

    std::optional<Failure> commit_conditioning(SiteId u, Dir t) {
        Conditioning c = conditioning(u, t, {});
        if (!c.ok) {
            return Failure{RouteFailure::Audit, "site " + u.str() + " lost its conditioning input", u};
        }
        for (SiteId m : c.members) {
            occ_[idx(m)] = Occ::Comp;
            bb_.roles[idx(m)] = SiteRole::ClusterExtension;
            bb_.partner[idx(m)] = (int)idx(u);
        }
        if (!c.members.empty()) {
            bb_.attachments.push_back(ClusterAttachment{u, t, c.members});
        }
        for (SiteId a : c.associates) {
            if (occ_[idx(a)] == Occ::Free) {
                occ_[idx(a)] = Occ::Std;
                bb_.roles[idx(a)] = SiteRole::Associate;
                bb_.partner[idx(a)] = (int)idx(u);
            }
        }
        return std::nullopt;
    }

    std::optional<Failure> take(SiteId s, SiteRole role, int wire) {
        if (occ_[idx(s)] != Occ::Free) {
            return Failure{RouteFailure::Audit, "site " + s.str() + " is already in use", s};
        }
        occ_[idx(s)] = is_complementary_role(role) ? Occ::Comp : Occ::Std;
        bb_.roles[idx(s)] = role;
        bb_.wire_of[idx(s)] = wire;
        return std::nullopt;
    }

    std::vector<Dir> out_options(const Head &h) const {
        if (h.kind == Head::Kind::Junction) {
            return {Dir::Left};
        }
        if (h.kind == Head::Kind::Init || h.in != Dir::Vertical) {
            return {Dir::Left, Dir::Vertical};
        }
        return {Dir::Left};
    }

    std::set<SiteId> ancestors(const std::vector<BfsState> &states, int k) const {
        std::set<SiteId> out;
        for (; k >= 0; k = states[k].parent) {
            out.insert(states[k].site);
        }
        return out;
    }

    /// Breadth-first search over wire extensions of `w`; states[0] is the head.
    /// Stops at the first state accepted by `target` (returns its index) or explores everything.
    template <typename Target>
    int search(int w, const Head &head, std::vector<BfsState> &states, Target target) const {
        states.clear();
        states.push_back(BfsState{head.site, head.in, -1});
        std::set<std::pair<SiteId, Dir>> seen{{head.site, head.in}};
        for (size_t q = 0; q < states.size(); q++) {
            BfsState cur = states[q];
            bool is_head = q == 0;
            std::vector<Dir> outs;
            if (is_head) {
                outs = out_options(head);
            } else {
                outs = {Dir::Left};
                if (cur.in != Dir::Vertical) {
                    outs.push_back(Dir::Vertical);
                }
            }
            std::set<SiteId> anc = ancestors(states, (int)q);
            for (Dir out : outs) {
                auto n = lat_.neighbor(cur.site, out);
                if (!n || !in_band(w, *n) || anc.count(*n)) {
                    continue;
                }
                bool needs_cond = !is_head || head.kind == Head::Kind::Gate;
                if (needs_cond) {
                    std::set<SiteId> tent = anc;
                    tent.insert(*n);
                    if (!conditioning(cur.site, remaining_dir(cur.in, out), tent).ok) {
                        continue;
                    }
                }
                Dir in_n = facing(out);
                if (target(*n, in_n, anc)) {
                    states.push_back(BfsState{*n, in_n, (int)q});
                    return (int)states.size() - 1;
                }
                if (!usable(*n) || seen.count({*n, in_n})) {
                    continue;
                }
                seen.insert({*n, in_n});
                states.push_back(BfsState{*n, in_n, (int)q});
            }
        }
        return -1;
    }

    std::vector<BfsState> path_to(const std::vector<BfsState> &states, int k) const {
        std::vector<BfsState> out;
        for (; k > 0; k = states[k].parent) {
            out.push_back(states[k]);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    /// Commits the sites strictly between the head and the final state, plus the head's conditioning.
    std::optional<Failure> commit_path(int w, const std::vector<BfsState> &path) {
        Head &h = heads_[w];
        SiteId prev = h.site;
        Dir prev_in = h.in;
        bool prev_needs = h.kind == Head::Kind::Gate;
        for (size_t k = 0; k < path.size(); k++) {
            Dir out = direction_to(prev, path[k].site);
            if (prev_needs) {
                if (auto f = commit_conditioning(prev, remaining_dir(prev_in, out))) {
                    return f;
                }
            }
            bb_.wires[w].sites.push_back(path[k].site);
            if (k + 1 < path.size()) {
                if (auto f = take(path[k].site, SiteRole::Wire, w)) {
                    return f;
                }
            }
            prev = path[k].site;
            prev_in = path[k].in;
            prev_needs = true;
        }
        return std::nullopt;
    }

    bool can_continue(int w, SiteId s, Dir in, const std::set<SiteId> &tentative) const {
        for (Dir out : {Dir::Left, Dir::Vertical}) {
            if (out == Dir::Vertical && in == Dir::Vertical) {
                continue;
            }
            auto n = lat_.neighbor(s, out);
            if (!n || !in_band(w, *n) || tentative.count(*n)) {
                continue;
            }
            std::set<SiteId> tent = tentative;
            tent.insert(*n);
            if (conditioning(s, remaining_dir(in, out), tent).ok) {
                return true;
            }
        }
        return false;
    }

    std::optional<Failure> place_init(int w) {
        for (int c = lat_.cols - 1; c >= 0; c--) {
            for (int r = band_lo(w); r <= band_hi(w); r++) {
                SiteId s{r, c};
                if (axis(s) != Axis::Z || occ_[idx(s)] == Occ::Comp || banned_[idx(s)]) {
                    continue;
                }
                if (occ_[idx(s)] == Occ::Free) {
                    take(s, SiteRole::Init, w);
                } else {
                    bb_.roles[idx(s)] = SiteRole::Init;
                    bb_.wire_of[idx(s)] = w;
                }
                bb_.wires[w].sites = {s};
                heads_[w] = Head{s, Dir::Right, Head::Kind::Init};
                return std::nullopt;
            }
        }
        return Failure{RouteFailure::NoPath, "no z site available to initialize wire " + std::to_string(w), {}};
    }

    std::optional<Failure> no_path(int w, const std::string &what) const {
        const Head &h = heads_[w];
        return Failure{
            RouteFailure::NoPath, "wire " + std::to_string(w) + " cannot reach " + what + " from " + h.site.str(),
            h.site};
    }

    std::optional<Failure> place_rotation(size_t gi, const Gate &g) {
        int w = g.wire;
        Axis want = g.rotation_axis();
        std::vector<BfsState> states;
        int k = search(w, heads_[w], states, [&](SiteId n, Dir in, const std::set<SiteId> &anc) {
            if (axis(n) != want || !usable(n)) {
                return false;
            }
            std::set<SiteId> tent = anc;
            tent.insert(n);
            return can_continue(w, n, in, tent);
        });
        if (k < 0) {
            return no_path(w, std::string("a site of axis ") + axis_char(want) + " for " + g.str());
        }
        std::vector<BfsState> path = path_to(states, k);
        if (auto f = commit_path(w, path)) {
            return f;
        }
        SiteId s = path.back().site;
        if (auto f = take(s, SiteRole::Wire, w)) {
            return f;
        }
        bb_.rotations.push_back(RotationPlacement{gi, s});
        heads_[w] = Head{s, path.back().in, Head::Kind::Gate};
        return std::nullopt;
    }

    std::optional<Failure> place_readout(int w) {
        std::vector<BfsState> states;
        int k = search(w, heads_[w], states, [&](SiteId n, Dir in, const std::set<SiteId> &) {
            if (axis(n) != Axis::Z || occ_[idx(n)] == Occ::Comp || banned_[idx(n)]) {
                return false;
            }
            return !readout_exposure(lat_, asg_, term_, bb_.roles, n, *lat_.neighbor(n, in));
        });
        if (k < 0) {
            return no_path(w, "a z site for readout");
        }
        std::vector<BfsState> path = path_to(states, k);
        if (auto f = commit_path(w, path)) {
            return f;
        }
        SiteId s = path.back().site;
        if (occ_[idx(s)] == Occ::Comp) {
            return Failure{RouteFailure::Audit, "readout site " + s.str() + " became complementary", s};
        }
        occ_[idx(s)] = Occ::Std;
        bb_.roles[idx(s)] = SiteRole::Readout;
        bb_.wire_of[idx(s)] = w;
        return std::nullopt;
    }

    std::optional<Failure> place_cnot(size_t gi, const Gate &g) {
        int c = g.wire, t = g.target;
        if (t != c + 1) {
            return Failure{
                RouteFailure::InvalidCircuit,
                "CNOT " + g.str() + " needs the control directly above the target (control wire w, target w+1)", {}};
        }
        int gap = band_hi(c) + 1;
        if (band_hi(c) != c * opts_.spacing + opts_.spacing - 2 || gap + 1 != band_lo(t) || band_lo(t) >= lat_.rows) {
            return Failure{RouteFailure::InvalidCircuit, "no gap row between wires for " + g.str(), {}};
        }
        std::vector<BfsState> sc, st;
        search(c, heads_[c], sc, [](SiteId, Dir, const std::set<SiteId> &) { return false; });
        search(t, heads_[t], st, [](SiteId, Dir, const std::set<SiteId> &) { return false; });
        std::map<SiteId, int> reach_t;
        for (size_t k = 1; k < st.size(); k++) {
            if (st[k].in == Dir::Right && !reach_t.count(st[k].site)) {
                reach_t[st[k].site] = (int)k;
            }
        }
        for (size_t kc = 1; kc < sc.size(); kc++) {
            SiteId top = sc[kc].site;
            if (sc[kc].in != Dir::Right || top.row != band_hi(c) || lat_.kind(top) != SiteKind::Top ||
                axis(top) != Axis::Z || !usable(top)) {
                continue;
            }
            auto top_next = lat_.neighbor(top, Dir::Left);
            if (!top_next || !usable(*top_next)) {
                continue;
            }
            std::set<SiteId> path_c = ancestors(sc, (int)kc);
            for (int j = 0; 2 * j + 1 < lat_.cols; j++) {
                for (int dir : {-1, 1}) {
                    int col = top.col + dir * (2 * j + 1);
                    if (col < 0 || col >= lat_.cols) {
                        continue;
                    }
                    SiteId bottom{gap + 1, col};
                    auto it = reach_t.find(bottom);
                    if (axis(bottom) != Axis::X || it == reach_t.end() || !usable(bottom)) {
                        continue;
                    }
                    auto bottom_next = lat_.neighbor(bottom, Dir::Left);
                    if (!bottom_next || !usable(*bottom_next)) {
                        continue;
                    }
                    std::vector<SiteId> chain;
                    bool ok = true;
                    for (int k = 0; k <= 2 * j + 1; k++) {
                        SiteId s{gap, top.col + dir * k};
                        ok = ok && usable(s);
                        chain.push_back(s);
                    }
                    if (!ok) {
                        continue;
                    }
                    std::set<SiteId> tent = path_c;
                    std::set<SiteId> path_t = ancestors(st, it->second);
                    tent.insert(path_t.begin(), path_t.end());
                    tent.insert(chain.begin(), chain.end());
                    tent.insert(*top_next);
                    tent.insert(*bottom_next);
                    for (size_t k = 0; k < chain.size() && ok; k++) {
                        Dir in = direction_to(chain[k], k == 0 ? top : chain[k - 1]);
                        Dir out = direction_to(chain[k], k + 1 == chain.size() ? bottom : chain[k + 1]);
                        ok = conditioning(chain[k], remaining_dir(in, out), tent).ok;
                    }
                    if (!ok) {
                        continue;
                    }
                    return commit_cnot(gi, g, path_to(sc, (int)kc), path_to(st, it->second), chain);
                }
            }
        }
        return Failure{
            RouteFailure::NoJunction, "no junction column for " + g.str() + " right of the current wire heads",
            heads_[c].site};
    }

    std::optional<Failure> commit_cnot(
        size_t gi, const Gate &g, const std::vector<BfsState> &pc, const std::vector<BfsState> &pt,
        const std::vector<SiteId> &chain) {
        int c = g.wire, t = g.target;
        SiteId top = pc.back().site, bottom = pt.back().site;
        if (auto f = commit_path(c, pc)) {
            return f;
        }
        if (auto f = take(top, SiteRole::Junction, c)) {
            return f;
        }
        if (auto f = commit_path(t, pt)) {
            return f;
        }
        if (auto f = take(bottom, SiteRole::Junction, t)) {
            return f;
        }
        for (SiteId s : chain) {
            if (auto f = take(s, SiteRole::Chain, -1)) {
                return f;
            }
        }
        for (size_t k = 0; k < chain.size(); k++) {
            Dir in = direction_to(chain[k], k == 0 ? top : chain[k - 1]);
            Dir out = direction_to(chain[k], k + 1 == chain.size() ? bottom : chain[k + 1]);
            if (auto f = commit_conditioning(chain[k], remaining_dir(in, out))) {
                return f;
            }
        }
        bb_.junctions.push_back(JunctionPlacement{gi, c, t, top, bottom, chain});
        heads_[c] = Head{top, Dir::Right, Head::Kind::Junction};
        heads_[t] = Head{bottom, Dir::Right, Head::Kind::Junction};
        return std::nullopt;
    }

    const HexLattice &lat_;
    const AxisAssignment &asg_;
    const BoundaryTermination &term_;
    const std::vector<bool> &forbidden_;
    const std::vector<bool> &banned_;
    RouterOptions opts_;
    std::vector<Occ> occ_;
    std::vector<Head> heads_;
    Backbone bb_;
};

}  // namespace

RouteResult route_backbone(
    const HexLattice &lattice, const AxisAssignment &assignment, const std::vector<Cluster> &clusters,
    const std::vector<bool> &disabled, const CircuitSpec &circuit, const BoundaryTermination &term,
    const RouterOptions &options) {
    RouteResult result;
    try {
        circuit.validate();
    } catch (const InvalidInput &e) {
        result.failure = RouteFailure::InvalidCircuit;
        result.diagnostic = e.what();
        return result;
    }
    if (options.spacing < 2) {
        result.failure = RouteFailure::InvalidCircuit;
        result.diagnostic = "wire spacing must be at least 2";
        return result;
    }
    if (assignment.axes.size() != lattice.num_sites()) {
        throw InvalidInput("assignment does not match the lattice");
    }
    if (options.max_attempts < 1) {
        throw InvalidInput("max_attempts must be positive");
    }
    std::vector<bool> forbidden(lattice.num_sites(), false);
    for (const Cluster &c : clusters) {
        if ((size_t)c.id < disabled.size() && disabled[c.id]) {
            for (SiteId s : c.sites) {
                forbidden[lattice.index(s)] = true;
            }
        }
    }
    std::vector<bool> banned(lattice.num_sites(), false);
    std::optional<Failure> first;
    for (int attempt = 1; attempt <= options.max_attempts; attempt++) {
        result.attempts = attempt;
        RouterImpl impl(lattice, assignment, term, forbidden, banned, options);
        std::optional<Failure> f = impl.run(circuit);
        if (!f) {
            Backbone bb = impl.backbone();
            std::vector<AuditIssue> issues = audit_backbone(lattice, assignment, term, bb, circuit);
            if (issues.empty()) {
                result.backbone = std::move(bb);
                result.failure = RouteFailure::None;
                result.diagnostic.clear();
                return result;
            }
            f = Failure{RouteFailure::Audit, issues.front().message, issues.front().site};
        }
        if (!first) {
            first = f;
        }
        if (!f->culprit || banned[lattice.index(*f->culprit)] || attempt == options.max_attempts) {
            break;
        }
        banned[lattice.index(*f->culprit)] = true;
    }
    // Later attempts run on a reduced lattice, so the first failure is the informative one.
    result.failure = first->kind;
    result.diagnostic = first->message + " (" + std::to_string(result.attempts) + " attempts)";
    return result;
}

RouteResult route_assignment(
    const HexLattice &lattice, const AxisAssignment &assignment, const CircuitSpec &circuit,
    const BoundaryTermination &term, const RouterOptions &options) {
    MatchedBondSet matched = matched_bonds(lattice, assignment);
    std::vector<Cluster> clusters = find_clusters(lattice, matched, assignment);
    OffLimitsReport off = flag_off_limits(lattice, clusters, matched);
    return route_backbone(lattice, assignment, clusters, off.disabled, circuit, term, options);
}

std::vector<AuditIssue> audit_backbone(
    const HexLattice &lattice, const AxisAssignment &assignment, const BoundaryTermination &term,
    const Backbone &backbone, const CircuitSpec &circuit) {
    std::vector<AuditIssue> issues;
    auto issue = [&](SiteId s, const std::string &msg) { issues.push_back(AuditIssue{s, msg}); };
    if (backbone.rows != lattice.rows || backbone.cols != lattice.cols ||
        backbone.roles.size() != lattice.num_sites()) {
        issue({0, 0}, "backbone does not match the lattice");
        return issues;
    }
    auto comp = [&](SiteId s) { return backbone.complementary(s); };
    std::set<std::pair<SiteId, SiteId>> intended;
    auto intend = [&](SiteId a, SiteId b) {
        intended.insert({std::min(a, b), std::max(a, b)});
    };
    std::map<SiteId, int> uses;

    if ((int)backbone.wires.size() != circuit.num_wires) {
        issue({0, 0}, "wire count differs from the circuit");
        return issues;
    }
    for (const WirePath &w : backbone.wires) {
        if (w.sites.size() < 2) {
            issue({0, 0}, "wire " + std::to_string(w.wire) + " is incomplete");
            return issues;
        }
        SiteId init = w.sites.front(), readout = w.sites.back();
        if (assignment.at(init) != Axis::Z || backbone.role(init) != SiteRole::Init) {
            issue(init, "init site of wire " + std::to_string(w.wire) + " must be a z site with role Init");
        }
        if (assignment.at(readout) != Axis::Z || backbone.role(readout) != SiteRole::Readout) {
            issue(readout, "readout site of wire " + std::to_string(w.wire) + " must be a z site with role Readout");
        }
        if (auto e = readout_exposure(lattice, assignment, term, backbone.roles, readout, w.sites[w.sites.size() - 2])) {
            issue(readout, e->second);
        }
        for (size_t k = 0; k < w.sites.size(); k++) {
            SiteId s = w.sites[k];
            uses[s]++;
            if (k > 0) {
                try {
                    Dir d = direction_to(w.sites[k - 1], s);
                    if (lattice.neighbor(w.sites[k - 1], d) != s) {
                        throw InvalidInput("");
                    }
                } catch (const InvalidInput &) {
                    issue(s, "wire " + std::to_string(w.wire) + " path is broken at " + s.str());
                    continue;
                }
                intend(w.sites[k - 1], s);
            }
            if (k > 0 && k + 1 < w.sites.size() && !comp(s)) {
                issue(s, "interior wire site " + s.str() + " is not complementary");
            }
        }
    }
    for (const JunctionPlacement &j : backbone.junctions) {
        const Gate &g = circuit.gates.at(j.gate);
        if (g.kind != Gate::Kind::Cnot || g.wire != j.control || g.target != j.target) {
            issue(j.top, "junction does not match its gate");
        }
        if (lattice.kind(j.top) != SiteKind::Top || assignment.at(j.top) != Axis::Z) {
            issue(j.top, "control junction " + j.top.str() + " must be a Top z site");
        }
        if (lattice.kind(j.bottom) != SiteKind::Bot || assignment.at(j.bottom) != Axis::X) {
            issue(j.bottom, "target junction " + j.bottom.str() + " must be a Bot x site");
        }
        for (auto [site, wire] : {std::pair{j.top, j.control}, std::pair{j.bottom, j.target}}) {
            const auto &ws = backbone.wires[wire].sites;
            auto it = std::find(ws.begin(), ws.end(), site);
            if (it == ws.end() || it == ws.begin() || it + 1 == ws.end() ||
                direction_to(site, *(it - 1)) != Dir::Right || direction_to(site, *(it + 1)) != Dir::Left) {
                issue(site, "junction " + site.str() + " must be crossed by its wire from right to left");
            }
            if (backbone.role(site) != SiteRole::Junction) {
                issue(site, "junction " + site.str() + " lacks the Junction role");
            }
        }
        if (j.chain.empty()) {
            issue(j.top, "junction without chain");
            continue;
        }
        std::vector<SiteId> seq{j.top};
        seq.insert(seq.end(), j.chain.begin(), j.chain.end());
        seq.push_back(j.bottom);
        for (size_t k = 1; k < seq.size(); k++) {
            auto n = std::optional<SiteId>{};
            try {
                n = lattice.neighbor(seq[k - 1], direction_to(seq[k - 1], seq[k]));
            } catch (const InvalidInput &) {
            }
            if (n != seq[k]) {
                issue(seq[k], "chain is broken at " + seq[k].str());
                continue;
            }
            intend(seq[k - 1], seq[k]);
        }
        if (direction_to(j.top, j.chain.front()) != Dir::Vertical ||
            direction_to(j.bottom, j.chain.back()) != Dir::Vertical) {
            issue(j.top, "chain must leave the junctions vertically");
        }
        for (SiteId s : j.chain) {
            uses[s]++;
            if (backbone.role(s) != SiteRole::Chain) {
                issue(s, "chain site " + s.str() + " lacks the Chain role");
            }
        }
    }
    for (const RotationPlacement &r : backbone.rotations) {
        const Gate &g = circuit.gates.at(r.gate);
        if (!g.is_rotation() || assignment.at(r.site) != g.rotation_axis()) {
            issue(r.site, "rotation " + g.str() + " placed on a site of axis " + axis_char(assignment.at(r.site)));
        }
        const auto &ws = backbone.wires.at(g.wire).sites;
        auto it = std::find(ws.begin(), ws.end(), r.site);
        if (it == ws.end() || backbone.role(r.site) != SiteRole::Wire) {
            issue(r.site, "rotation " + g.str() + " is not on an interior site of its wire");
        }
    }
    // Gate order along every wire follows the circuit.
    for (const WirePath &w : backbone.wires) {
        std::map<SiteId, size_t> pos;
        for (size_t k = 0; k < w.sites.size(); k++) {
            pos[w.sites[k]] = k;
        }
        std::vector<std::pair<size_t, size_t>> events;  // (gate, position)
        for (const RotationPlacement &r : backbone.rotations) {
            if (circuit.gates[r.gate].wire == w.wire && pos.count(r.site)) {
                events.push_back({r.gate, pos[r.site]});
            }
        }
        for (const JunctionPlacement &j : backbone.junctions) {
            if (j.control == w.wire && pos.count(j.top)) {
                events.push_back({j.gate, pos[j.top]});
            }
            if (j.target == w.wire && pos.count(j.bottom)) {
                events.push_back({j.gate, pos[j.bottom]});
            }
        }
        std::sort(events.begin(), events.end());
        for (size_t k = 1; k < events.size(); k++) {
            if (events[k].second <= events[k - 1].second) {
                issue(w.sites[events[k].second], "gates on wire " + std::to_string(w.wire) + " are out of order");
            }
        }
    }
    for (const ClusterAttachment &a : backbone.attachments) {
        auto root = lattice.neighbor(a.anchor, a.leg);
        if (!root || a.members.empty() || std::find(a.members.begin(), a.members.end(), *root) == a.members.end()) {
            issue(a.anchor, "cluster attachment at " + a.anchor.str() + " does not start at the conditioning leg");
            continue;
        }
        intend(a.anchor, *root);
        std::set<SiteId> members(a.members.begin(), a.members.end());
        size_t internal = 0;
        for (SiteId m : a.members) {
            uses[m]++;
            if (assignment.at(m) != assignment.at(a.anchor)) {
                issue(m, "cluster member " + m.str() + " differs in axis from its anchor");
            }
            if (backbone.role(m) != SiteRole::ClusterExtension) {
                issue(m, "cluster member " + m.str() + " lacks the ClusterExtension role");
            }
            for (Dir d : ALL_DIRS) {
                auto n = lattice.neighbor(m, d);
                if (n && members.count(*n)) {
                    internal++;
                    intend(m, *n);
                }
            }
        }
        if (internal / 2 + 1 != members.size()) {
            issue(a.anchor, "cluster attached at " + a.anchor.str() + " contains a closed loop");
        }
    }
    for (const auto &[s, n] : uses) {
        if (n > 1) {
            issue(s, "site " + s.str() + " is used twice");
        }
    }
    // Every complementary site appears in some structure and vice versa.
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        SiteId s = lattice.site(k);
        if (comp(s) && !uses.count(s)) {
            issue(s, "complementary site " + s.str() + " belongs to no wire, chain or cluster");
        }
    }
    // Induced graph on the complementary region equals the intended edges.
    for (const Bond &b : lattice.bonds) {
        if (comp(b.a) && comp(b.b) && !intended.count({std::min(b.a, b.b), std::max(b.a, b.b)})) {
            issue(b.a, "unintended complementary bond " + b.a.str() + "-" + b.b.str());
        }
    }
    // Conditioning legs: an unbiased standard neighbour or an unbiased fixed termination.
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        SiteId s = lattice.site(k);
        if (!comp(s) || backbone.role(s) == SiteRole::Junction) {
            continue;
        }
        Axis mu = assignment.at(s);
        for (Dir d : ALL_DIRS) {
            auto n = lattice.neighbor(s, d);
            if (n && intended.count({std::min(s, *n), std::max(s, *n)})) {
                continue;
            }
            if (!n) {
                bool ok = false;
                if (term.mode == BoundaryTermination::Mode::Fixed) {
                    auto label = basis_label(term.vector_for(k, d));
                    ok = label && label->first != mu;
                }
                if (!ok) {
                    issue(s, "dangling leg of " + s.str() + " is not an unbiased input");
                }
                continue;
            }
            if (comp(*n)) {
                continue;  // already reported as an unintended bond
            }
            if (assignment.at(*n) == mu) {
                issue(s, "standard neighbour " + n->str() + " of " + s.str() + " shares its axis");
            }
        }
    }
    return issues;
}

std::string backbone_to_json(const Backbone &backbone) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["rows"] = backbone.rows;
    j["cols"] = backbone.cols;
    nlohmann::json grid = nlohmann::json::array();
    for (int r = 0; r < backbone.rows; r++) {
        std::string row;
        for (int c = 0; c < backbone.cols; c++) {
            row.push_back(role_char(backbone.role({r, c})));
        }
        grid.push_back(row);
    }
    j["roles"] = grid;
    auto site = [](SiteId s) { return nlohmann::json::array({s.row, s.col}); };
    nlohmann::json wires = nlohmann::json::array();
    for (const WirePath &w : backbone.wires) {
        nlohmann::json path = nlohmann::json::array();
        for (SiteId s : w.sites) {
            path.push_back(site(s));
        }
        wires.push_back({{"wire", w.wire}, {"sites", path}});
    }
    j["wires"] = wires;
    nlohmann::json junctions = nlohmann::json::array();
    for (const JunctionPlacement &jp : backbone.junctions) {
        nlohmann::json chain = nlohmann::json::array();
        for (SiteId s : jp.chain) {
            chain.push_back(site(s));
        }
        junctions.push_back(
            {{"gate", jp.gate},
             {"control", jp.control},
             {"target", jp.target},
             {"top", site(jp.top)},
             {"bottom", site(jp.bottom)},
             {"chain", chain}});
    }
    j["junctions"] = junctions;
    nlohmann::json rotations = nlohmann::json::array();
    for (const RotationPlacement &r : backbone.rotations) {
        rotations.push_back({{"gate", r.gate}, {"site", site(r.site)}});
    }
    j["rotations"] = rotations;
    nlohmann::json attachments = nlohmann::json::array();
    for (const ClusterAttachment &a : backbone.attachments) {
        nlohmann::json members = nlohmann::json::array();
        for (SiteId s : a.members) {
            members.push_back(site(s));
        }
        attachments.push_back(
            {{"anchor", site(a.anchor)}, {"leg", std::string(1, dir_char(a.leg))}, {"members", members}});
    }
    j["attachments"] = attachments;
    return j.dump();
}

bool spans_left_right(const HexLattice &lattice, const std::vector<bool> &occupied) {
    size_t n = lattice.num_sites();
    DisjointSets sets(n + 2);
    size_t left = n, right = n + 1;
    for (int r = 0; r < lattice.rows; r++) {
        sets.unite(lattice.index({r, 0}), left);
        sets.unite(lattice.index({r, lattice.cols - 1}), right);
    }
    for (size_t i = 0; i < lattice.bonds.size(); i++) {
        if (occupied[i]) {
            sets.unite(lattice.index(lattice.bonds[i].a), lattice.index(lattice.bonds[i].b));
        }
    }
    return sets.find(left) == sets.find(right);
}

SpanningEstimate spanning_probability(int rows, int cols, double p, size_t trials, uint64_t seed, int jobs) {
    if (!(p >= 0 && p <= 1)) {
        throw InvalidInput("occupation probability must lie in [0, 1]");
    }
    if (trials == 0) {
        throw InvalidInput("need at least one trial");
    }
    HexLattice lattice = build_lattice(rows, cols);
    std::vector<uint8_t> hit(trials, 0);
    auto work = [&](size_t begin, size_t end) {
        std::vector<bool> occupied(lattice.bonds.size());
        for (size_t t = begin; t < end; t++) {
            std::mt19937_64 rng(derive_seed(seed, t));
            std::bernoulli_distribution coin(p);
            for (size_t i = 0; i < occupied.size(); i++) {
                occupied[i] = coin(rng);
            }
            hit[t] = spans_left_right(lattice, occupied);
        }
    };
    jobs = std::max(1, std::min<int>(jobs, (int)trials));
    if (jobs == 1) {
        work(0, trials);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; k++) {
            pool.emplace_back(work, trials * k / jobs, trials * (k + 1) / jobs);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    size_t count = 0;
    for (uint8_t h : hit) {
        count += h;
    }
    SpanningEstimate est;
    est.trials = trials;
    est.fraction = (double)count / (double)trials;
    est.std_error = std::sqrt(est.fraction * (1 - est.fraction) / (double)trials);
    return est;
}

}  // namespace aklt
