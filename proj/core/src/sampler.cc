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

#include "aklt/sampler.h"

#include "json.hpp"

namespace aklt {

AxisAssignment uniform_assignment(const HexLattice &lattice, Axis mu) {
    return AxisAssignment{lattice.rows, lattice.cols, std::vector<Axis>(lattice.num_sites(), mu)};
}

SamplingMode sampling_mode_from_string(const std::string &text) {
    if (text == "exact" || text == "Exact") {
        return SamplingMode::Exact;
    }
    if (text == "iid" || text == "IID") {
        return SamplingMode::IID;
    }
    throw InvalidInput("unknown sampling mode '" + text + "' (expected exact or iid)");
}

const char *sampling_mode_name(SamplingMode mode) {
    return mode == SamplingMode::Exact ? "exact" : "iid";
}

PlanStep polarizing_step(size_t site) {
    PlanStep step{site, {}};
    for (Axis mu : ALL_AXES) {
        step.kraus.push_back(povm_element(mu));
    }
    return step;
}

AxisAssignment stage1_sample(
    const HexLattice &lattice, const BoundaryTermination &term, SamplingMode mode, uint64_t seed, Engine engine,
    const ContractionLimits &limits) {
    AxisAssignment result{lattice.rows, lattice.cols, std::vector<Axis>(lattice.num_sites(), Axis::Z)};
    if (mode == SamplingMode::IID) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, 2);
        for (Axis &a : result.axes) {
            a = ALL_AXES[pick(rng)];
        }
        return result;
    }
    std::vector<PlanStep> plan;
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        plan.push_back(polarizing_step(k));
    }
    MeasurementRecord rec = chain_rule_sample(lattice, term, plan, seed, engine, limits);
    for (size_t k = 0; k < lattice.num_sites(); k++) {
        result.axes[k] = ALL_AXES[rec.outcomes[k]];
    }
    return result;
}

double assignment_probability(
    const HexLattice &lattice, const BoundaryTermination &term, const AxisAssignment &assignment, Engine engine,
    const ContractionLimits &limits) {
    if (assignment.axes.size() != lattice.num_sites()) {
        throw InvalidInput("assignment does not match the lattice");
    }
    MeasurementPattern pat;
    for (Axis a : assignment.axes) {
        pat.push_back(SiteMeasurement::polarized(a));
    }
    return pattern_probability(lattice, term, pat, engine, limits);
}

size_t MatchedBondSet::count() const {
    size_t n = 0;
    for (bool m : matched) {
        n += m;
    }
    return n;
}

MatchedBondSet matched_bonds(const HexLattice &lattice, const AxisAssignment &assignment) {
    if (assignment.axes.size() != lattice.num_sites() || assignment.rows != lattice.rows) {
        throw InvalidInput("assignment does not match the lattice");
    }
    MatchedBondSet out;
    out.matched.reserve(lattice.bonds.size());
    for (const Bond &b : lattice.bonds) {
        out.matched.push_back(assignment.at(b.a) == assignment.at(b.b));
    }
    return out;
}

double matched_bond_probability(
    const HexLattice &lattice, const BoundaryTermination &term, size_t bond, Engine engine,
    const ContractionLimits &limits) {
    if (bond >= lattice.bonds.size()) {
        throw InvalidInput("bond index out of range");
    }
    const Bond &b = lattice.bonds[bond];
    double total = 0;
    for (Axis mu : ALL_AXES) {
        MeasurementPattern pat(lattice.num_sites());
        pat[lattice.index(b.a)] = SiteMeasurement::polarized(mu);
        pat[lattice.index(b.b)] = SiteMeasurement::polarized(mu);
        total += pattern_probability(lattice, term, pat, engine, limits);
    }
    return total;
}

std::string assignment_to_json(const AxisAssignment &assignment) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["rows"] = assignment.rows;
    j["cols"] = assignment.cols;
    nlohmann::json grid = nlohmann::json::array();
    for (int r = 0; r < assignment.rows; r++) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < assignment.cols; c++) {
            row.push_back(std::string(1, axis_char(assignment.at({r, c}))));
        }
        grid.push_back(row);
    }
    j["axes"] = grid;
    return j.dump();
}

AxisAssignment assignment_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("assignment json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("axes") || !j["axes"].is_array()) {
        throw InvalidInput("assignment json needs an 'axes' grid");
    }
    AxisAssignment out;
    out.rows = (int)j["axes"].size();
    for (const auto &row : j["axes"]) {
        if (!row.is_array() || (out.cols != 0 && (int)row.size() != out.cols) || row.empty()) {
            throw InvalidInput("assignment json: ragged or empty row");
        }
        out.cols = (int)row.size();
        for (const auto &cell : row) {
            if (!cell.is_string() || cell.get<std::string>().size() != 1) {
                throw InvalidInput("assignment json: cells must be \"x\", \"y\" or \"z\"");
            }
            out.axes.push_back(axis_from_char(cell.get<std::string>()[0]));
        }
    }
    if (out.rows == 0) {
        throw InvalidInput("assignment json: empty grid");
    }
    if ((j.contains("rows") && j["rows"] != out.rows) || (j.contains("cols") && j["cols"] != out.cols)) {
        throw InvalidInput("assignment json: rows/cols disagree with the grid");
    }
    return out;
}

}  // namespace aklt
