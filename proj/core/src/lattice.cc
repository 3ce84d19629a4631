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

#include <limits>

#include "json.hpp"

namespace aklt {

std::string SiteId::str() const {
    return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

SiteKind site_kind(SiteId s) {
    return ((s.row + s.col) % 2 == 0) ? SiteKind::Top : SiteKind::Bot;
}

LegRole leg_role(SiteKind kind, Dir d) {
    switch (d) {
        case Dir::Left:
            return LegRole::Ket;
        case Dir::Right:
            return LegRole::Bra;
        case Dir::Vertical:
            return kind == SiteKind::Top ? LegRole::Bra : LegRole::Ket;
    }
    return LegRole::Ket;
}

Dir facing(Dir d) {
    switch (d) {
        case Dir::Left:
            return Dir::Right;
        case Dir::Right:
            return Dir::Left;
        case Dir::Vertical:
            return Dir::Vertical;
    }
    return d;
}

char dir_char(Dir d) {
    return "lrv"[(int)d];
}

Dir dir_from_char(char c) {
    switch (c) {
        case 'l':
            return Dir::Left;
        case 'r':
            return Dir::Right;
        case 'v':
            return Dir::Vertical;
    }
    throw InvalidInput(std::string("unknown direction '") + c + "'");
}

bool HexLattice::contains(SiteId s) const {
    return s.row >= 0 && s.col >= 0 && s.row < rows && s.col < cols;
}

size_t HexLattice::index(SiteId s) const {
    if (!contains(s)) {
        throw InvalidInput("site " + s.str() + " is outside the lattice");
    }
    return (size_t)s.row * (size_t)cols + (size_t)s.col;
}

SiteId HexLattice::site(size_t k) const {
    if (k >= num_sites()) {
        throw InvalidInput("site index out of range");
    }
    return SiteId{(int)(k / (size_t)cols), (int)(k % (size_t)cols)};
}

SiteKind HexLattice::kind(SiteId s) const {
    if (!contains(s)) {
        throw InvalidInput("site " + s.str() + " is outside the lattice");
    }
    return site_kind(s);
}

int HexLattice::bond_at(SiteId s, Dir d) const {
    return leg_bond_[index(s)][(int)d];
}

std::optional<SiteId> HexLattice::neighbor(SiteId s, Dir d) const {
    int b = bond_at(s, d);
    if (b < 0) {
        return std::nullopt;
    }
    const Bond &bond = bonds[b];
    return bond.a == s ? bond.b : bond.a;
}

int HexLattice::degree(SiteId s) const {
    int n = 0;
    for (Dir d : ALL_DIRS) {
        n += bond_at(s, d) >= 0;
    }
    return n;
}

HexLattice build_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw InvalidInput("lattice dimensions must be positive");
    }
    if ((long long)rows * (long long)cols > (1LL << 26)) {
        throw InvalidInput("lattice dimensions overflow");
    }
    HexLattice lat;
    lat.rows = rows;
    lat.cols = cols;
    lat.leg_bond_.assign((size_t)rows * cols, {-1, -1, -1});
    auto attach = [&](SiteId a, Dir da, SiteId b, Dir db, Orientation o) {
        int id = (int)lat.bonds.size();
        lat.bonds.push_back(Bond{a, b, o});
        lat.leg_bond_[lat.index(a)][(int)da] = id;
        lat.leg_bond_[lat.index(b)][(int)db] = id;
    };
    for (int r = 0; r < rows; r++) {
        for (int c = 0; c + 1 < cols; c++) {
            attach({r, c}, Dir::Right, {r, c + 1}, Dir::Left, Orientation::Horizontal);
        }
    }
    for (int r = 0; r + 1 < rows; r++) {
        for (int c = 0; c < cols; c++) {
            if ((r + c) % 2 == 0) {
                attach({r, c}, Dir::Vertical, {r + 1, c}, Dir::Vertical, Orientation::Vertical);
            }
        }
    }
    for (size_t k = 0; k < lat.num_sites(); k++) {
        for (Dir d : ALL_DIRS) {
            if (lat.leg_bond_[k][(int)d] < 0) {
                lat.dangling.emplace_back(lat.site(k), d);
            }
        }
    }
    return lat;
}

Incidence incident(const HexLattice &lattice, SiteId site) {
    Incidence result{lattice.kind(site), {}, {}};
    for (Dir d : ALL_DIRS) {
        int b = lattice.bond_at(site, d);
        if (b >= 0) {
            result.bonds.emplace_back(lattice.bonds[b], d);
        } else {
            result.dangling.push_back(d);
        }
    }
    return result;
}

std::string lattice_to_json(const HexLattice &lattice) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["rows"] = lattice.rows;
    j["cols"] = lattice.cols;
    return j.dump();
}

HexLattice lattice_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("lattice json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j["rows"].is_number_integer() ||
        !j["cols"].is_number_integer()) {
        throw InvalidInput("lattice json needs integer 'rows' and 'cols'");
    }
    if (j.contains("bonds")) {
        throw InvalidInput("lattice json: explicit bond overrides are not supported");
    }
    return build_lattice(j["rows"].get<int>(), j["cols"].get<int>());
}

std::pair<int, int> parse_dims(const std::string &text) {
    auto x = text.find_first_of("xX");
    if (x == std::string::npos) {
        throw InvalidInput("expected dimensions like 2x4, got '" + text + "'");
    }
    try {
        size_t p1 = 0, p2 = 0;
        std::string a = text.substr(0, x), b = text.substr(x + 1);
        int r = std::stoi(a, &p1);
        int c = std::stoi(b, &p2);
        if (p1 != a.size() || p2 != b.size()) {
            throw InvalidInput("");
        }
        return {r, c};
    } catch (const std::exception &) {
        throw InvalidInput("expected dimensions like 2x4, got '" + text + "'");
    }
}

}  // namespace aklt
