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

#include "aklt/common.h"

#include <cmath>

namespace aklt {

char axis_char(Axis a) {
    switch (a) {
        case Axis::X:
            return 'x';
        case Axis::Y:
            return 'y';
        case Axis::Z:
            return 'z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'x':
        case 'X':
            return Axis::X;
        case 'y':
        case 'Y':
            return Axis::Y;
        case 'z':
        case 'Z':
            return Axis::Z;
    }
    throw InvalidInput(std::string("unknown axis '") + c + "'");
}

Mat2 pauli(int ax, int az) {
    Mat2 x;
    x << 0, 1, 1, 0;
    Mat2 z;
    z << 1, 0, 0, -1;
    Mat2 r = Mat2::Identity();
    if (ax & 1) {
        r = r * x;
    }
    if (az & 1) {
        r = r * z;
    }
    return r;
}

Vec2 virtual_basis(Axis mu, int bit) {
    const double h = 1.0 / std::sqrt(2.0);
    const double s = (bit & 1) ? -1.0 : 1.0;
    switch (mu) {
        case Axis::Z:
            return (bit & 1) ? Vec2(0, 1) : Vec2(1, 0);
        case Axis::X:
            return Vec2(h, s * h);
        case Axis::Y:
            return Vec2(h, cplx(0, s * h));
    }
    throw InvalidInput("bad axis");
}

Mat2 rotation(Axis mu, double theta) {
    Vec2 b0 = virtual_basis(mu, 0);
    Vec2 b1 = virtual_basis(mu, 1);
    return b0 * b0.adjoint() + std::polar(1.0, theta) * (b1 * b1.adjoint());
}

double scale_fit_residual(const MatX &actual, const MatX &expected) {
    if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
        throw InvalidInput("scale_fit_residual: shape mismatch");
    }
    cplx num = 0;
    double den = 0;
    for (Eigen::Index i = 0; i < actual.size(); i++) {
        num += std::conj(expected.data()[i]) * actual.data()[i];
        den += std::norm(expected.data()[i]);
    }
    double an = actual.norm();
    if (an == 0) {
        return den == 0 ? 0.0 : 1.0;
    }
    if (den == 0) {
        return 1.0;
    }
    cplx s = num / den;
    return (actual - s * expected).norm() / an;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace aklt
