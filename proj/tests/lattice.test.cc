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

#include "aklt/lattice.h"

#include <set>

#include "gtest/gtest.h"

using namespace aklt;

TEST(lattice, smallest_chain) {
    HexLattice lat = build_lattice(1, 2);
    ASSERT_EQ(lat.num_sites(), 2u);
    ASSERT_EQ(lat.bonds.size(), 1u);
    ASSERT_EQ(lat.bonds[0].orientation, Orientation::Horizontal);
    ASSERT_EQ(lat.degree({0, 0}), 1);
    ASSERT_EQ(lat.degree({0, 1}), 1);
    ASSERT_EQ(lat.dangling.size(), 4u);
}

TEST(lattice, two_by_two) {
    HexLattice lat = build_lattice(2, 2);
    std::set<std::pair<SiteId, SiteId>> horizontal, vertical;
    for (const Bond &b : lat.bonds) {
        (b.orientation == Orientation::Horizontal ? horizontal : vertical).insert({b.a, b.b});
    }
    std::set<std::pair<SiteId, SiteId>> want_h{{{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}};
    std::set<std::pair<SiteId, SiteId>> want_v{{{0, 0}, {1, 0}}};
    ASSERT_EQ(horizontal, want_h);
    ASSERT_EQ(vertical, want_v);
    ASSERT_EQ(lat.degree({0, 0}), 2);
    ASSERT_EQ(lat.degree({0, 1}), 1);
    ASSERT_EQ(lat.degree({1, 0}), 2);
    ASSERT_EQ(lat.degree({1, 1}), 1);
}

TEST(lattice, rule_matches_exhaustive_adjacency) {
    for (int rows = 1; rows <= 5; rows++) {
        for (int cols = 1; cols <= 6; cols++) {
            HexLattice lat = build_lattice(rows, cols);
            std::set<std::pair<SiteId, SiteId>> got;
            for (const Bond &b : lat.bonds) {
                got.insert({b.a, b.b});
            }
            std::set<std::pair<SiteId, SiteId>> want;
            for (int r1 = 0; r1 < rows; r1++) {
                for (int c1 = 0; c1 < cols; c1++) {
                    for (int r2 = 0; r2 < rows; r2++) {
                        for (int c2 = 0; c2 < cols; c2++) {
                            bool h = r1 == r2 && c2 == c1 + 1;
                            bool v = c1 == c2 && r2 == r1 + 1 && (r1 + c1) % 2 == 0;
                            if (h || v) {
                                want.insert({{r1, c1}, {r2, c2}});
                            }
                        }
                    }
                }
            }
            ASSERT_EQ(got, want) << rows << "x" << cols;
            size_t legs = 0;
            for (size_t k = 0; k < lat.num_sites(); k++) {
                SiteId s = lat.site(k);
                ASSERT_LE(lat.degree(s), 3);
                legs += lat.degree(s);
                bool bulk = s.col > 0 && s.col + 1 < cols &&
                            (site_kind(s) == SiteKind::Top ? s.row + 1 < rows : s.row > 0);
                if (bulk) {
                    ASSERT_EQ(lat.degree(s), 3);
                }
            }
            ASSERT_EQ(legs + lat.dangling.size(), 3 * lat.num_sites());
        }
    }
}

TEST(lattice, three_by_four_vertical_count) {
    HexLattice lat = build_lattice(3, 4);
    int vertical = 0;
    for (const Bond &b : lat.bonds) {
        if (b.orientation == Orientation::Vertical) {
            vertical++;
            ASSERT_EQ((b.a.row + b.a.col) % 2, 0);
            ASSERT_LE(b.a.row, 1);
        }
    }
    ASSERT_EQ(vertical, 4);
}

TEST(lattice, ket_bra_pairing) {
    HexLattice lat = build_lattice(4, 5);
    for (const Bond &b : lat.bonds) {
        Dir da = b.orientation == Orientation::Horizontal ? Dir::Right : Dir::Vertical;
        Dir db = b.orientation == Orientation::Horizontal ? Dir::Left : Dir::Vertical;
        ASSERT_NE(leg_role(lat.kind(b.a), da), leg_role(lat.kind(b.b), db));
    }
}

TEST(lattice, incident) {
    HexLattice lat = build_lattice(2, 2);
    Incidence i00 = incident(lat, {0, 0});
    ASSERT_EQ(i00.kind, SiteKind::Top);
    ASSERT_EQ(i00.bonds.size(), 2u);
    ASSERT_EQ(i00.bonds[0].second, Dir::Right);
    ASSERT_EQ(i00.bonds[0].first.b, (SiteId{0, 1}));
    ASSERT_EQ(i00.bonds[1].second, Dir::Vertical);
    ASSERT_EQ(i00.bonds[1].first.b, (SiteId{1, 0}));

    Incidence i11 = incident(lat, {1, 1});
    ASSERT_EQ(i11.kind, SiteKind::Top);
    ASSERT_EQ(i11.bonds.size(), 1u);
    ASSERT_EQ(i11.bonds[0].second, Dir::Left);
    ASSERT_EQ(i11.bonds[0].first.a, (SiteId{1, 0}));
    ASSERT_EQ(i11.dangling, (std::vector<Dir>{Dir::Right, Dir::Vertical}));

    HexLattice lat34 = build_lattice(3, 4);
    Incidence i12 = incident(lat34, {1, 2});
    ASSERT_EQ(i12.kind, SiteKind::Bot);
    ASSERT_EQ(i12.bonds.size(), 3u);
    ASSERT_EQ(i12.bonds[2].second, Dir::Vertical);
    ASSERT_EQ(i12.bonds[2].first.a, (SiteId{0, 2}));
    ASSERT_EQ(lat34.neighbor({1, 2}, Dir::Left), (SiteId{1, 1}));
    ASSERT_EQ(lat34.neighbor({1, 2}, Dir::Right), (SiteId{1, 3}));
}

TEST(lattice, rejects_bad_input) {
    ASSERT_THROW(build_lattice(0, 3), InvalidInput);
    ASSERT_THROW(build_lattice(3, -1), InvalidInput);
    ASSERT_THROW(build_lattice(1 << 14, 1 << 14), InvalidInput);
    HexLattice lat = build_lattice(2, 2);
    ASSERT_THROW(incident(lat, {2, 0}), InvalidInput);
}

TEST(lattice, json_roundtrip) {
    HexLattice lat = build_lattice(3, 5);
    HexLattice back = lattice_from_json(lattice_to_json(lat));
    ASSERT_EQ(back.rows, 3);
    ASSERT_EQ(back.cols, 5);
    ASSERT_EQ(back.bonds, lat.bonds);
    ASSERT_THROW(lattice_from_json("{\"rows\": 2}"), InvalidInput);
    ASSERT_THROW(lattice_from_json("not json"), InvalidInput);
    ASSERT_EQ(parse_dims("2x4"), (std::pair<int, int>{2, 4}));
    ASSERT_THROW(parse_dims("2by4"), InvalidInput);
}
