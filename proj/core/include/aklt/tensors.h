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

#ifndef AKLT_TENSORS_H
#define AKLT_TENSORS_H

#include <array>
#include <optional>

#include "aklt/common.h"
#include "aklt/lattice.h"

namespace aklt {

/// Physical labels are passed as twice the spin projection: +3, +1, -1, -3.
constexpr std::array<int, 4> TWICE_ALPHAS{3, 1, -1, -3};

int alpha_slot(int twice_alpha);

/// A[alpha] on the three virtual legs, stored index-wise as t[l][r][v].
struct SiteTensor {
    std::array<cplx, 8> t{};

    cplx operator()(int l, int r, int v) const {
        return t[(l << 2) | (r << 1) | v];
    }
    cplx &operator()(int l, int r, int v) {
        return t[(l << 2) | (r << 1) | v];
    }
    /// Component by leg direction with `legs` indexed as [Left, Right, Vertical].
    cplx at(const std::array<int, 3> &legs) const {
        return (*this)(legs[0], legs[1], legs[2]);
    }
    SiteTensor &operator+=(const SiteTensor &other);
    SiteTensor operator*(cplx s) const;
    double norm() const;
};

/// Virtual vector tagged with the role it plays on a leg. For a Bra the stored
/// amplitudes are those of the ket it is the dual of.
struct VirtualVec {
    Vec2 amps;
    LegRole role;
    /// Components as seen by index-wise contraction.
    Vec2 index_vector() const;
};

SiteTensor local_tensor(SiteKind kind, Axis mu, int twice_alpha);

/// |alpha^mu> in the spin-3/2 space, expressed in the z basis ordered m = 3/2, 1/2, -1/2, -3/2.
Vec4 physical_state(Axis mu, int twice_alpha);

/// Full site tensor with the physical index: T[l][r][v][p] = sum_alpha A^z[alpha] |alpha^z>_p.
struct PhysTensor {
    std::array<cplx, 32> t{};
    cplx operator()(int l, int r, int v, int p) const {
        return t[(((l << 2) | (r << 1) | v) << 2) | p];
    }
    cplx &operator()(int l, int r, int v, int p) {
        return t[(((l << 2) | (r << 1) | v) << 2) | p];
    }
};

const PhysTensor &phys_tensor(SiteKind kind);

/// sum_p bra_p T[l][r][v][p].
SiteTensor apply_covector(SiteKind kind, const Vec4 &bra);

Mat4 povm_element(Axis mu);

/// Physical-space bra with outcome metadata.
struct MeasCovector {
    Vec4 bra;
    /// Coefficients on (<3/2^mu|, <-3/2^mu|).
    std::array<cplx, 2> coeffs;
    Axis mu;
    Axis nu;
    double theta;
    int b;
};

MeasCovector complementary_covector(Axis mu, Axis nu, double theta, int b);

/// <(-1)^c 3/2^mu| as a physical bra.
Vec4 standard_covector(Axis mu, int c);

/// Contracts the vertical leg with the associate's vector: A[alpha] on (l, r) for each alpha slot.
std::array<Mat2, 4> partial_contract(SiteKind kind, Axis mu, const VirtualVec &associate);

/// (axis, bit) when `v` is proportional to |bit^axis>, checked in x, y, z order.
std::optional<std::pair<Axis, int>> basis_label(const Vec2 &v, double tol = 1e-9);

/// Spin-3/2 operators in the z basis.
Mat4 spin_operator(Axis a);

}  // namespace aklt

#endif
