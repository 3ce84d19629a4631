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

#ifndef AKLT_COMMON_H
#define AKLT_COMMON_H

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace aklt {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

/// Polarization axis of a spin-3/2 site, also used for virtual-qubit bases.
enum class Axis : uint8_t { X = 0, Y = 1, Z = 2 };

constexpr std::array<Axis, 3> ALL_AXES{Axis::X, Axis::Y, Axis::Z};

char axis_char(Axis a);
Axis axis_from_char(char c);

/// Rejected input (bad dimensions, unknown sites, malformed configs).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured size cap.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The protocol cannot proceed (non-unitary region, failed compilation, ...).
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical results violated an internal consistency bound.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pauli operator X^ax Z^az (as a 2x2 matrix).
Mat2 pauli(int ax, int az);

/// Single-qubit rotation diag-in-mu-basis: |0^mu><0^mu| + e^{i theta} |1^mu><1^mu|.
Mat2 rotation(Axis mu, double theta);

/// |bit^mu> for a virtual qubit.
Vec2 virtual_basis(Axis mu, int bit);

/// Relative Frobenius residual of `actual` against `expected` after the best complex scale.
double scale_fit_residual(const MatX &actual, const MatX &expected);

/// Deterministic 64-bit mixer used to derive per-trial seeds.
uint64_t splitmix64(uint64_t x);
uint64_t derive_seed(uint64_t base, uint64_t index);

}  // namespace aklt

#endif
