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

#ifndef AKLT_LATTICE_H
#define AKLT_LATTICE_H

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aklt/common.h"

namespace aklt {

struct SiteId {
    int row = 0;
    int col = 0;
    auto operator<=>(const SiteId &) const = default;
    std::string str() const;
};

/// Top sites carry a downward vertical bra, Bot sites an upward vertical ket.
enum class SiteKind : uint8_t { Top, Bot };

/// Local leg directions of a site tensor.
enum class Dir : uint8_t { Left = 0, Right = 1, Vertical = 2 };

constexpr std::array<Dir, 3> ALL_DIRS{Dir::Left, Dir::Right, Dir::Vertical};

enum class LegRole : uint8_t { Ket, Bra };

enum class Orientation : uint8_t { Horizontal, Vertical };

/// For horizontal bonds `a` is the left site; for vertical bonds `a` is the upper (Top) site.
struct Bond {
    SiteId a;
    SiteId b;
    Orientation orientation;
    bool operator==(const Bond &) const = default;
};

SiteKind site_kind(SiteId s);
LegRole leg_role(SiteKind kind, Dir d);
/// The leg of the neighbor that shares a bond with leg `d`.
Dir facing(Dir d);
char dir_char(Dir d);
Dir dir_from_char(char c);

/// Brick-wall realization of an open hexagonal lattice.
struct HexLattice {
    int rows = 0;
    int cols = 0;
    std::vector<Bond> bonds;
    std::vector<std::pair<SiteId, Dir>> dangling;

    size_t num_sites() const {
        return (size_t)rows * (size_t)cols;
    }
    bool contains(SiteId s) const;
    /// Row-major index.
    size_t index(SiteId s) const;
    SiteId site(size_t index) const;
    SiteKind kind(SiteId s) const;
    std::optional<SiteId> neighbor(SiteId s, Dir d) const;
    /// Bond index attached at leg `d`, or -1 when dangling.
    int bond_at(SiteId s, Dir d) const;
    int degree(SiteId s) const;

   private:
    friend HexLattice build_lattice(int rows, int cols);
    std::vector<std::array<int, 3>> leg_bond_;
};

HexLattice build_lattice(int rows, int cols);

struct Incidence {
    SiteKind kind;
    /// Attached bonds with the local direction of this site's leg.
    std::vector<std::pair<Bond, Dir>> bonds;
    std::vector<Dir> dangling;
};

Incidence incident(const HexLattice &lattice, SiteId site);

std::string lattice_to_json(const HexLattice &lattice);
HexLattice lattice_from_json(const std::string &text);

/// Parses "RxC" (e.g. "2x4").
std::pair<int, int> parse_dims(const std::string &text);

}  // namespace aklt

#endif
