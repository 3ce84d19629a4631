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

#ifndef AKLT_CIRCUIT_H
#define AKLT_CIRCUIT_H

#include <string>
#include <vector>

#include "aklt/common.h"

namespace aklt {

struct Gate {
    enum class Kind : uint8_t { Init, Rz, Rx, Cnot, Readout };
    Kind kind = Kind::Init;
    /// Acting wire; the control for Cnot.
    int wire = 0;
    /// Target wire of a Cnot, otherwise -1.
    int target = -1;
    double theta = 0;

    static Gate init(int wire);
    static Gate rz(int wire, double theta);
    static Gate rx(int wire, double theta);
    static Gate cnot(int control, int target);
    static Gate readout(int wire);

    /// Rotation whose angle is 0 mod 2 pi (needs no site and no adaptation).
    bool is_fiducial() const;
    bool is_rotation() const {
        return kind == Kind::Rz || kind == Kind::Rx;
    }
    Axis rotation_axis() const;
    std::string str() const;
};

const char *gate_kind_name(Gate::Kind kind);

/// A logical circuit on `num_wires` wires. Each wire starts with Init and ends with Readout.
struct CircuitSpec {
    int num_wires = 1;
    std::vector<Gate> gates;

    /// Throws InvalidInput when the invariants are violated.
    void validate() const;
    /// Indices into `gates` touching wire `w`, in order.
    std::vector<size_t> wire_gates(int w) const;
};

/// {"format_version": 1, "wires": W, "gates": [{"op": "rz", "wire": 0, "theta": 0.5}, ...]}
std::string circuit_to_json(const CircuitSpec &circuit);
CircuitSpec circuit_from_json(const std::string &text);

/// Init-Readout on every wire.
CircuitSpec identity_circuit(int num_wires = 1);

}  // namespace aklt

#endif
