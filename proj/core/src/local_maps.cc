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

#include "aklt/local_maps.h"

#include <Eigen/SVD>
#include <functional>

#include "aklt/router.h"

namespace aklt {

SiteTensor measured_site(SiteKind kind, Axis mu, Axis nu, double theta, int b) {
    return apply_covector(kind, complementary_covector(mu, nu, theta, b).bra);
}

cplx leg_entry(const SiteTensor &t, Dir d0, int i0, Dir d1, int i1, Dir d2, int i2) {
    std::array<int, 3> legs{};
    legs[(int)d0] = i0;
    legs[(int)d1] = i1;
    legs[(int)d2] = i2;
    return t.at(legs);
}

Mat2 leg_map(const SiteTensor &t, Dir out, Dir in, const Vec2 &q) {
    Dir cond = remaining_dir(out, in);
    Mat2 m = Mat2::Zero();
    for (int o = 0; o < 2; o++) {
        for (int i = 0; i < 2; i++) {
            for (int c = 0; c < 2; c++) {
                m(o, i) += leg_entry(t, out, o, in, i, cond, c) * q(c);
            }
        }
    }
    return m;
}

Vec2 associate_leg_vector(SiteKind kind, Axis nu, int c, Dir leg) {
    SiteTensor a = local_tensor(kind, nu, (c & 1) ? -3 : 3);
    Dir d1 = leg == Dir::Left ? Dir::Right : Dir::Left;
    Dir d2 = remaining_dir(leg, d1);
    Eigen::Matrix<cplx, 2, 4> m;
    for (int v = 0; v < 2; v++) {
        for (int k = 0; k < 4; k++) {
            m(v, k) = leg_entry(a, leg, v, d1, k >> 1, d2, k & 1);
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(m, Eigen::ComputeFullU);
    return svd.matrixU().col(0) * svd.singularValues()(0);
}

double rank_ratio(const Mat2 &m) {
    Eigen::JacobiSVD<Mat2> svd(m);
    auto s = svd.singularValues();
    return s(0) == 0 ? 0.0 : s(1) / s(0);
}

double leg_state_residual(const Vec2 &v, const LegState &s) {
    return scale_fit_residual(MatX(v), MatX(virtual_basis(s.axis, s.label)));
}

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

const Mat4 &cnot_matrix() {
    static const Mat4 m = [] {
        Mat4 c = Mat4::Zero();
        c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
        return c;
    }();
    return m;
}

const std::array<std::pair<Dir, Dir>, 6> &leg_pairs() {
    static const std::array<std::pair<Dir, Dir>, 6> pairs{{
        {Dir::Right, Dir::Left},
        {Dir::Left, Dir::Right},
        {Dir::Right, Dir::Vertical},
        {Dir::Vertical, Dir::Left},
        {Dir::Left, Dir::Vertical},
        {Dir::Vertical, Dir::Right},
    }};
    return pairs;
}

std::vector<std::vector<WidgetNode>> chain_geometries(int length) {
    std::vector<std::vector<WidgetNode>> out;
    std::vector<WidgetNode> cur;
    std::function<void()> grow = [&]() {
        if ((int)cur.size() == length) {
            out.push_back(cur);
            return;
        }
        std::vector<SiteKind> kinds{SiteKind::Top, SiteKind::Bot};
        if (!cur.empty()) {
            kinds = {cur.back().kind == SiteKind::Top ? SiteKind::Bot : SiteKind::Top};
        }
        for (SiteKind k : kinds) {
            for (auto [in, o] : leg_pairs()) {
                if (!cur.empty() && leg_role(cur.back().kind, cur.back().out) == leg_role(k, in)) {
                    continue;
                }
                cur.push_back({k, in, o});
                grow();
                cur.pop_back();
            }
        }
    };
    grow();
    return out;
}

SiteKind HexRing::kind(int i) const {
    return site_kind(sites[i]);
}

Dir HexRing::next_leg(int i) const {
    return direction_to(sites[i], sites[(i + 1) % 6]);
}

Dir HexRing::prev_leg(int i) const {
    return direction_to(sites[i], sites[(i + 5) % 6]);
}

Dir HexRing::external(int i) const {
    return remaining_dir(next_leg(i), prev_leg(i));
}

std::pair<Mat2, Byproduct> ring_arc(const HexRing &h, int from, int to, int dir, Axis mu, const std::vector<ArcSite> &sites) {
    Mat2 w = Mat2::Identity();
    Byproduct total;
    for (int j = (from + dir + 6) % 6; j != to; j = (j + dir + 6) % 6) {
        Dir in = dir > 0 ? h.prev_leg(j) : h.next_leg(j);
        Dir out = dir > 0 ? h.next_leg(j) : h.prev_leg(j);
        const ArcSite &s = sites[j];
        SiteKind k = h.kind(j);
        w = leg_map(measured_site(k, mu, s.nu, 0, s.b), out, in, virtual_basis(s.nu, s.label)) * w;
        total ^= widget_byproduct(
            leg_role(k, in), leg_role(k, out), mu, s.b, effective_c(leg_role(k, h.external(j)), s.nu, s.label));
    }
    return {w, total};
}

Vec2 loop_zeroth_vector(const HexRing &h, int z, Axis mu, int b0, const Mat2 &ring) {
    SiteTensor t0 = measured_site(h.kind(z), mu, loop_zeroth_axis(mu), 0, b0);
    Dir o = h.external(z), a = h.next_leg(z), p = h.prev_leg(z);
    Vec2 v = Vec2::Zero();
    for (int oi = 0; oi < 2; oi++) {
        for (int ai = 0; ai < 2; ai++) {
            for (int pi = 0; pi < 2; pi++) {
                v(oi) += leg_entry(t0, o, oi, a, ai, p, pi) * ring(pi, ai);
            }
        }
    }
    return v;
}

std::pair<Mat2, Byproduct> pass_through_map(
    const HexRing &h, int i_in, int i_out, Axis mu_in, Axis nu_in, int b_in, Axis nu_out, int b_out,
    const std::vector<ArcSite> &sites) {
    auto [fw, fp] = ring_arc(h, i_in, i_out, +1, Axis::Z, sites);
    auto [bw, bp] = ring_arc(h, i_in, i_out, -1, Axis::Z, sites);
    SiteTensor ti = measured_site(h.kind(i_in), mu_in, nu_in, 0, b_in);
    SiteTensor to = measured_site(h.kind(i_out), Axis::Z, nu_out, 0, b_out);
    Mat2 m = Mat2::Zero();
    // a, c: legs of the entry site towards next and prev; a2, c2: legs of the exit site towards prev and next.
    for (int o = 0; o < 2; o++) {
        for (int i = 0; i < 2; i++) {
            for (int k = 0; k < 16; k++) {
                int a = k & 1, c = (k >> 1) & 1, a2 = (k >> 2) & 1, c2 = k >> 3;
                m(o, i) += leg_entry(to, h.external(i_out), o, h.prev_leg(i_out), a2, h.next_leg(i_out), c2) *
                           fw(a2, a) * bw(c2, c) *
                           leg_entry(ti, h.external(i_in), i, h.next_leg(i_in), a, h.prev_leg(i_in), c);
            }
        }
    }
    return {m, fp ^ bp};
}

Mat4 cnot_junction_map(int b_top, int b_bottom, const Mat2 &chain) {
    SiteTensor tt = measured_site(SiteKind::Top, Axis::Z, Axis::X, 0, b_top);
    SiteTensor tb = measured_site(SiteKind::Bot, Axis::X, Axis::Z, 0, b_bottom);
    Mat4 m = Mat4::Zero();
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            for (int c = 0; c < 2; c++) {
                for (int d = 0; d < 2; d++) {
                    for (int j = 0; j < 2; j++) {
                        for (int k = 0; k < 2; k++) {
                            m(2 * a + c, 2 * b + d) += tt(a, b, j) * chain(j, k) * tb(c, d, k);
                        }
                    }
                }
            }
        }
    }
    return m;
}

}  // namespace aklt
