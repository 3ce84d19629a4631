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

#include "aklt/circuit.h"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace aklt {

Gate Gate::init(int wire) {
    return Gate{Kind::Init, wire, -1, 0};
}

Gate Gate::rz(int wire, double theta) {
    return Gate{Kind::Rz, wire, -1, theta};
}

Gate Gate::rx(int wire, double theta) {
    return Gate{Kind::Rx, wire, -1, theta};
}

Gate Gate::cnot(int control, int target) {
    return Gate{Kind::Cnot, control, target, 0};
}

Gate Gate::readout(int wire) {
    return Gate{Kind::Readout, wire, -1, 0};
}

bool Gate::is_fiducial() const {
    if (!is_rotation()) {
        return false;
    }
    double r = std::remainder(theta, 2 * std::acos(-1.0));
    return std::abs(r) < 1e-12;
}

Axis Gate::rotation_axis() const {
    if (kind == Kind::Rz) {
        return Axis::Z;
    }
    if (kind == Kind::Rx) {
        return Axis::X;
    }
    throw InvalidInput("gate is not a rotation");
}

const char *gate_kind_name(Gate::Kind kind) {
    switch (kind) {
        case Gate::Kind::Init:
            return "init";
        case Gate::Kind::Rz:
            return "rz";
        case Gate::Kind::Rx:
            return "rx";
        case Gate::Kind::Cnot:
            return "cnot";
        case Gate::Kind::Readout:
            return "readout";
    }
    return "?";
}

std::string Gate::str() const {
    std::ostringstream out;
    out << gate_kind_name(kind) << "(" << wire;
    if (kind == Kind::Cnot) {
        out << "," << target;
    }
    if (is_rotation()) {
        out << "," << theta;
    }
    out << ")";
    return out.str();
}

void CircuitSpec::validate() const {
    if (num_wires < 1) {
        throw InvalidInput("circuit needs at least one wire");
    }
    std::vector<int> state(num_wires, 0);  // 0 fresh, 1 live, 2 read out
    for (const Gate &g : gates) {
        if (g.wire < 0 || g.wire >= num_wires) {
            throw InvalidInput("gate " + g.str() + " uses an unknown wire");
        }
        if (g.is_rotation() && !std::isfinite(g.theta)) {
            throw InvalidInput("gate " + g.str() + " has a non-finite angle");
        }
        std::vector<int> touched{g.wire};
        if (g.kind == Gate::Kind::Cnot) {
            if (g.target < 0 || g.target >= num_wires || g.target == g.wire) {
                throw InvalidInput("gate " + g.str() + " has an invalid target");
            }
            touched.push_back(g.target);
        }
        for (int w : touched) {
            if (g.kind == Gate::Kind::Init) {
                if (state[w] != 0) {
                    throw InvalidInput("wire " + std::to_string(w) + " initialized twice");
                }
                state[w] = 1;
            } else if (state[w] != 1) {
                throw InvalidInput("gate " + g.str() + " acts on a wire that is not live");
            }
        }
        if (g.kind == Gate::Kind::Readout) {
            state[g.wire] = 2;
        }
    }
    for (int w = 0; w < num_wires; w++) {
        if (state[w] != 2) {
            throw InvalidInput("wire " + std::to_string(w) + " must start with init and end with readout");
        }
    }
}

std::vector<size_t> CircuitSpec::wire_gates(int w) const {
    std::vector<size_t> out;
    for (size_t k = 0; k < gates.size(); k++) {
        if (gates[k].wire == w || gates[k].target == w) {
            out.push_back(k);
        }
    }
    return out;
}

std::string circuit_to_json(const CircuitSpec &circuit) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["wires"] = circuit.num_wires;
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate &g : circuit.gates) {
        nlohmann::json e;
        e["op"] = gate_kind_name(g.kind);
        if (g.kind == Gate::Kind::Cnot) {
            e["control"] = g.wire;
            e["target"] = g.target;
        } else {
            e["wire"] = g.wire;
        }
        if (g.is_rotation()) {
            e["theta"] = g.theta;
        }
        gates.push_back(e);
    }
    j["gates"] = gates;
    return j.dump();
}

CircuitSpec circuit_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("circuit json: ") + e.what());
    }
    CircuitSpec c;
    try {
        c.num_wires = j.at("wires").get<int>();
        for (const auto &e : j.at("gates")) {
            std::string op = e.at("op").get<std::string>();
            if (op == "init") {
                c.gates.push_back(Gate::init(e.at("wire").get<int>()));
            } else if (op == "rz") {
                c.gates.push_back(Gate::rz(e.at("wire").get<int>(), e.at("theta").get<double>()));
            } else if (op == "rx") {
                c.gates.push_back(Gate::rx(e.at("wire").get<int>(), e.at("theta").get<double>()));
            } else if (op == "cnot") {
                c.gates.push_back(Gate::cnot(e.at("control").get<int>(), e.at("target").get<int>()));
            } else if (op == "readout") {
                c.gates.push_back(Gate::readout(e.at("wire").get<int>()));
            } else {
                throw InvalidInput("circuit json: unknown op '" + op + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("circuit json: ") + e.what());
    }
    c.validate();
    return c;
}

CircuitSpec identity_circuit(int num_wires) {
    CircuitSpec c;
    c.num_wires = num_wires;
    for (int w = 0; w < num_wires; w++) {
        c.gates.push_back(Gate::init(w));
    }
    for (int w = 0; w < num_wires; w++) {
        c.gates.push_back(Gate::readout(w));
    }
    return c;
}

}  // namespace aklt
