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

#ifndef AKLT_LOCAL_MAPS_H
#define AKLT_LOCAL_MAPS_H

#include <utility>
#include <vector>

#include "aklt/lattice.h"
#include "aklt/logic.h"
#include "aklt/tensors.h"

namespace aklt {

// Direct contractions of one or a few site tensors. These are the references the
// renormalization rules in logic.h are checked against.

/// Site tensor after measuring the complementary covector with outcome b.
SiteTensor measured_site(SiteKind kind, Axis mu, Axis nu, double theta, int b);

/// Component of `t` with the three legs addressed by direction.
cplx leg_entry(const SiteTensor &t, Dir d0, int i0, Dir d1, int i1, Dir d2, int i2);

/// Index-wise map from leg `in` to leg `out`, the remaining leg contracted against q.
Mat2 leg_map(const SiteTensor &t, Dir out, Dir in, const Vec2 &q);

/// Rank-1 factor on `leg` of a site of `kind` measured in the standard basis of nu with outcome c.
Vec2 associate_leg_vector(SiteKind kind, Axis nu, int c, Dir leg);

/// Second singular value over the first (0 for the zero matrix).
double rank_ratio(const Mat2 &m);

/// Residual of v against the basis vector |s> up to scale; 1 when v vanishes.
double leg_state_residual(const Vec2 &v, const LegState &s);

Mat4 kron(const Mat2 &a, const Mat2 &b);
const Mat4 &cnot_matrix();

/// A complementary site with its logical input and output legs.
struct WidgetNode {
    SiteKind kind;
    Dir in;
    Dir out;
};

/// The six ordered (in, out) leg pairs.
const std::array<std::pair<Dir, Dir>, 6> &leg_pairs();

/// Node sequences of alternating kinds in which each out leg faces an in leg of the opposite role.
std::vector<std::vector<WidgetNode>> chain_geometries(int length);

/// The hexagon of a 2x3 lattice in ring order.
struct HexRing {
    std::array<SiteId, 6> sites{{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 1}, {1, 0}}};

    SiteKind kind(int i) const;
    Dir next_leg(int i) const;
    Dir prev_leg(int i) const;
    Dir external(int i) const;
};

/// Outcome and associate label of a ring site measured in a complementary basis.
struct ArcSite {
    Axis nu = Axis::X;
    int b = 0;
    int label = 0;
};

/// Map along the ring sites strictly between `from` and `to`, stepping by dir (+1 or -1), and the
/// composition of their widget byproducts.
std::pair<Mat2, Byproduct> ring_arc(const HexRing &h, int from, int to, int dir, Axis mu, const std::vector<ArcSite> &sites);

/// Output vector of ring site z measured with (mu, loop_zeroth_axis(mu), b0) when its two ring legs
/// are joined by `ring` (index-wise, from its next leg back into its prev leg).
Vec2 loop_zeroth_vector(const HexRing &h, int z, Axis mu, int b0, const Mat2 &ring);

/// Wire map through the hexagon entered at i_in (axis mu_in) and left at i_out (axis z), both arcs
/// measured along z. Returns the map and the composed arc byproduct.
std::pair<Mat2, Byproduct> pass_through_map(
    const HexRing &h, int i_in, int i_out, Axis mu_in, Axis nu_in, int b_in, Axis nu_out, int b_out,
    const std::vector<ArcSite> &sites);

/// Two-wire map of the CNOT junctions (top z site, bottom x site) with the vertical chain acting as
/// `chain` from the bottom junction's ket leg up to the top junction's bra leg.
Mat4 cnot_junction_map(int b_top, int b_bottom, const Mat2 &chain);

}  // namespace aklt

#endif
