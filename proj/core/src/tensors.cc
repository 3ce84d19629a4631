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

#include "aklt/tensors.h"

#include <cmath>

namespace aklt {

namespace {

Mat2 pauli_axis(Axis mu) {
    Mat2 m;
    switch (mu) {
        case Axis::X:
            m << 0, 1, 1, 0;
            break;
        case Axis::Y:
            m << 0, cplx(0, -1), cplx(0, 1), 0;
            break;
        case Axis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

SiteTensor outer3(const Mat2 &m, const Vec2 &v) {
    SiteTensor r;
    for (int l = 0; l < 2; l++) {
        for (int c = 0; c < 2; c++) {
            for (int k = 0; k < 2; k++) {
                r(l, c, k) = m(l, c) * v(k);
            }
        }
    }
    return r;
}

/// Normalized symmetric three-qubit state with `ones` qubits in |1^mu>.
Eigen::Matrix<cplx, 8, 1> symmetric_state(Axis mu, int ones) {
    Vec2 b[2] = {virtual_basis(mu, 0), virtual_basis(mu, 1)};
    Eigen::Matrix<cplx, 8, 1> v = Eigen::Matrix<cplx, 8, 1>::Zero();
    for (int bits = 0; bits < 8; bits++) {
        int q0 = (bits >> 2) & 1, q1 = (bits >> 1) & 1, q2 = bits & 1;
        if (q0 + q1 + q2 != ones) {
            continue;
        }
        for (int i = 0; i < 8; i++) {
            v(i) += b[q0]((i >> 2) & 1) * b[q1]((i >> 1) & 1) * b[q2](i & 1);
        }
    }
    return v / v.norm();
}

}  // namespace

int alpha_slot(int twice_alpha) {
    switch (twice_alpha) {
        case 3:
            return 0;
        case 1:
            return 1;
        case -1:
            return 2;
        case -3:
            return 3;
    }
    throw InvalidInput("physical label must be one of +-1/2, +-3/2");
}

SiteTensor &SiteTensor::operator+=(const SiteTensor &other) {
    for (size_t k = 0; k < 8; k++) {
        t[k] += other.t[k];
    }
    return *this;
}

SiteTensor SiteTensor::operator*(cplx s) const {
    SiteTensor r = *this;
    for (auto &x : r.t) {
        x *= s;
    }
    return r;
}

double SiteTensor::norm() const {
    double s = 0;
    for (auto x : t) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

Vec2 VirtualVec::index_vector() const {
    return role == LegRole::Ket ? Vec2(amps) : Vec2(amps.conjugate());
}

SiteTensor local_tensor(SiteKind kind, Axis mu, int twice_alpha) {
    int slot = alpha_slot(twice_alpha);
    Vec2 b0 = virtual_basis(mu, 0);
    Vec2 b1 = virtual_basis(mu, 1);
    Mat2 k01 = b0 * b1.adjoint();
    Mat2 k10 = b1 * b0.adjoint();
    Mat2 p = pauli_axis(mu);
    const double r3 = 1.0 / std::sqrt(3.0);
    SiteTensor out;
    if (kind == SiteKind::Top) {
        Vec2 c0 = b0.conjugate(), c1 = b1.conjugate();
        switch (slot) {
            case 0:
                out = outer3(k01, c1);
                break;
            case 1:
                out = outer3(k01, c0);
                out += outer3(p, c1);
                out = out * (-r3);
                break;
            case 2:
                out = outer3(k10, c1) * -1.0;
                out += outer3(p, c0);
                out = out * r3;
                break;
            default:
                out = outer3(k10, c0);
                break;
        }
        if (mu == Axis::Y) {
            out = out * cplx(0, -1);
        }
    } else {
        switch (slot) {
            case 0:
                out = outer3(k01, b0) * -1.0;
                break;
            case 1:
                out = outer3(k01, b1) * -1.0;
                out += outer3(p, b0);
                out = out * r3;
                break;
            case 2:
                out = outer3(k10, b0);
                out += outer3(p, b1);
                out = out * r3;
                break;
            default:
                out = outer3(k10, b1);
                break;
        }
        if (mu == Axis::X) {
            out = out * -1.0;
        }
    }
    return out;
}

Vec4 physical_state(Axis mu, int twice_alpha) {
    alpha_slot(twice_alpha);
    // The y basis is labeled so that the tensors above expand the site tensor; this
    // pairs |alpha^y> with the symmetrized eigenstate of opposite projection.
    Axis build = mu;
    int ta = twice_alpha;
    cplx phase = 1;
    if (mu == Axis::Y) {
        ta = -twice_alpha;
        phase = cplx(0, -1);
    }
    Eigen::Matrix<cplx, 8, 1> target = symmetric_state(build, (3 - ta) / 2);
    Vec4 out;
    for (int k = 0; k < 4; k++) {
        Eigen::Matrix<cplx, 8, 1> zk = symmetric_state(Axis::Z, k);
        out(k) = phase * zk.dot(target);
    }
    return out;
}

const PhysTensor &phys_tensor(SiteKind kind) {
    static const auto build = [](SiteKind k) {
        PhysTensor pt;
        for (int ta : TWICE_ALPHAS) {
            SiteTensor a = local_tensor(k, Axis::Z, ta);
            Vec4 ph = physical_state(Axis::Z, ta);
            for (int i = 0; i < 8; i++) {
                for (int p = 0; p < 4; p++) {
                    pt.t[(i << 2) | p] += a.t[i] * ph(p);
                }
            }
        }
        return pt;
    };
    static const PhysTensor top = build(SiteKind::Top);
    static const PhysTensor bot = build(SiteKind::Bot);
    return kind == SiteKind::Top ? top : bot;
}

SiteTensor apply_covector(SiteKind kind, const Vec4 &bra) {
    const PhysTensor &pt = phys_tensor(kind);
    SiteTensor r;
    for (int i = 0; i < 8; i++) {
        cplx s = 0;
        for (int p = 0; p < 4; p++) {
            s += bra(p) * pt.t[(i << 2) | p];
        }
        r.t[i] = s;
    }
    return r;
}

Mat4 povm_element(Axis mu) {
    Vec4 up = physical_state(mu, 3);
    Vec4 dn = physical_state(mu, -3);
    return std::sqrt(2.0 / 3.0) * (up * up.adjoint() + dn * dn.adjoint());
}

MeasCovector complementary_covector(Axis mu, Axis nu, double theta, int b) {
    if (mu == nu) {
        throw InvalidInput("complementary basis needs nu != mu");
    }
    const double h = 1.0 / std::sqrt(2.0);
    const double s = (b & 1) ? -1.0 : 1.0;
    const cplx e = std::polar(1.0, theta);
    const cplx i(0, 1);
    cplx g0;
    switch (mu) {
        case Axis::Z:
            g0 = nu == Axis::X ? s * e : -i * s * e;
            break;
        case Axis::X:
            g0 = nu == Axis::Z ? s * e : i * s * e;
            break;
        case Axis::Y:
            g0 = nu == Axis::X ? -i * s * e : s * e;
            break;
    }
    MeasCovector m;
    m.coeffs = {g0 * h, cplx(h)};
    m.bra = m.coeffs[0] * physical_state(mu, 3).conjugate() + m.coeffs[1] * physical_state(mu, -3).conjugate();
    m.mu = mu;
    m.nu = nu;
    m.theta = theta;
    m.b = b & 1;
    return m;
}

Vec4 standard_covector(Axis mu, int c) {
    return physical_state(mu, (c & 1) ? -3 : 3).conjugate();
}

std::array<Mat2, 4> partial_contract(SiteKind kind, Axis mu, const VirtualVec &associate) {
    LegRole vertical = leg_role(kind, Dir::Vertical);
    if (associate.role == vertical) {
        throw InvalidInput("associate vector must have the role opposite to the vertical leg");
    }
    Vec2 u = associate.index_vector();
    std::array<Mat2, 4> out;
    for (int ta : TWICE_ALPHAS) {
        SiteTensor a = local_tensor(kind, mu, ta);
        Mat2 m;
        for (int l = 0; l < 2; l++) {
            for (int r = 0; r < 2; r++) {
                m(l, r) = a(l, r, 0) * u(0) + a(l, r, 1) * u(1);
            }
        }
        out[alpha_slot(ta)] = m;
    }
    return out;
}

Mat4 spin_operator(Axis a) {
    Mat4 sp = Mat4::Zero();
    // Basis m = 3/2, 1/2, -1/2, -3/2; S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>.
    const double s = 1.5;
    for (int k = 1; k < 4; k++) {
        double m = s - k;
        sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    switch (a) {
        case Axis::X:
            return (sp + sp.transpose()) / 2.0;
        case Axis::Y:
            return (sp - sp.transpose()) / cplx(0, 2);
        case Axis::Z: {
            Mat4 z = Mat4::Zero();
            for (int k = 0; k < 4; k++) {
                z(k, k) = s - k;
            }
            return z;
        }
    }
    return sp;
}

std::optional<std::pair<Axis, int>> basis_label(const Vec2 &v, double tol) {
    double n = v.norm();
    if (n == 0) {
        return std::nullopt;
    }
    for (Axis mu : ALL_AXES) {
        for (int bit = 0; bit < 2; bit++) {
            if (std::abs(std::abs(virtual_basis(mu, bit).dot(v)) - n) < tol * n) {
                return std::make_pair(mu, bit);
            }
        }
    }
    return std::nullopt;
}

}  // namespace aklt
