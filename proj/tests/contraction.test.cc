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

#include "aklt/contraction.h"

#include <random>

#include "gtest/gtest.h"

using namespace aklt;

namespace {

MeasurementPattern random_pattern(size_t n, std::mt19937_64 &rng) {
    MeasurementPattern pat(n);
    for (size_t k = 0; k < n; k++) {
        int choice = (int)(rng() % 3);
        Axis mu = ALL_AXES[rng() % 3];
        if (choice == 1) {
            pat[k] = SiteMeasurement::polarized(mu);
        } else if (choice == 2) {
            int c = (int)(rng() % 2);
            pat[k] = SiteMeasurement::projected(mu, standard_covector(mu, c));
        }
    }
    return pat;
}

}  // namespace

TEST(contraction, normalization) {
    for (auto term : {BoundaryTermination::fixed(), BoundaryTermination::traced()}) {
        HexLattice lat = build_lattice(2, 3);
        MeasurementPattern pat(lat.num_sites());
        ASSERT_NEAR(pattern_probability(lat, term, pat, Engine::Dense), 1.0, 1e-12);
        ASSERT_NEAR(pattern_probability(lat, term, pat, Engine::Strip), 1.0, 1e-12);
    }
}

TEST(contraction, single_site_polarization) {
    HexLattice lat = build_lattice(2, 2);
    auto term = BoundaryTermination::traced();
    for (size_t k = 0; k < lat.num_sites(); k++) {
        for (Axis mu : ALL_AXES) {
            MeasurementPattern pat(lat.num_sites());
            pat[k] = SiteMeasurement::polarized(mu);
            ASSERT_NEAR(pattern_probability(lat, term, pat), 1.0 / 3.0, 1e-10);
            pat[k] = SiteMeasurement::projected(Axis::Z, standard_covector(Axis::Z, 0));
            if (mu == Axis::Z) {
                ASSERT_NEAR(pattern_probability(lat, term, pat), 1.0 / 6.0, 1e-10);
                ASSERT_NEAR(pattern_probability(lat, term, pat, Engine::Dense), 1.0 / 6.0, 1e-10);
            }
        }
    }
}

TEST(contraction, dense_and_strip_agree) {
    std::mt19937_64 rng(5);
    std::vector<std::pair<int, int>> dims{{1, 2}, {1, 4}, {2, 2}, {2, 3}, {3, 3}, {2, 5}, {4, 2}};
    for (auto [r, c] : dims) {
        HexLattice lat = build_lattice(r, c);
        std::vector<BoundaryTermination> terms{
            BoundaryTermination::fixed(), BoundaryTermination::fixed(Vec2(0, 1)),
            BoundaryTermination::fixed(Vec2(1, cplx(0.3, -0.4)))};
        if (r * c <= 6) {
            terms.push_back(BoundaryTermination::traced());
        }
        for (const auto &term : terms) {
            for (int trial = 0; trial < 4; trial++) {
                MeasurementPattern pat = random_pattern(lat.num_sites(), rng);
                double pd = pattern_probability(lat, term, pat, Engine::Dense);
                double ps = pattern_probability(lat, term, pat, Engine::Strip);
                ASSERT_NEAR(pd, ps, 1e-9) << r << "x" << c << " " << term.describe();
            }
        }
    }
}

TEST(contraction, reduced_density_is_maximally_mixed_with_traced_boundary) {
    HexLattice lat = build_lattice(2, 3);
    auto term = BoundaryTermination::traced();
    for (size_t k = 0; k < lat.num_sites(); k++) {
        Mat4 rho = reduced_density(lat, term, lat.site(k));
        ASSERT_LT((rho - 0.25 * Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
        ASSERT_NEAR(rho.trace().real(), 1.0, 1e-12);
        ASSERT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        Mat4 dense = reduced_density(lat, term, lat.site(k), Engine::Dense);
        ASSERT_LT((rho - dense).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(contraction, reduced_density_fixed_boundary_is_a_state) {
    HexLattice lat = build_lattice(2, 3);
    auto term = BoundaryTermination::fixed();
    for (size_t k = 0; k < lat.num_sites(); k++) {
        Mat4 rho = reduced_density(lat, term, lat.site(k));
        ASSERT_NEAR(rho.trace().real(), 1.0, 1e-12);
        ASSERT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
        ASSERT_GT(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(contraction, build_state_caps) {
    HexLattice big = build_lattice(4, 4);
    ASSERT_THROW(build_state(big, BoundaryTermination::fixed()), SizeError);
    HexLattice wide = build_lattice(5, 3);
    MeasurementPattern pat(wide.num_sites());
    ASSERT_THROW(pattern_probability(wide, BoundaryTermination::fixed(), pat), SizeError);
    StateVector sv = build_state(build_lattice(1, 2), BoundaryTermination::fixed());
    ASSERT_EQ(sv.amplitudes.size(), 16u);
    ASSERT_GT(sv.norm_sq, 0);
}

TEST(contraction, clamp) {
    ASSERT_EQ(clamp_probability(-1e-12), 0.0);
    ASSERT_EQ(clamp_probability(0.25), 0.25);
    ASSERT_THROW(clamp_probability(-1e-6), ConsistencyError);
}

TEST(contraction, chain_rule_is_deterministic_and_normalized) {
    HexLattice lat = build_lattice(2, 2);
    auto term = BoundaryTermination::traced();
    std::vector<PlanStep> plan;
    for (size_t k = 0; k < lat.num_sites(); k++) {
        std::vector<Mat4> kraus;
        for (Axis mu : ALL_AXES) {
            kraus.push_back(povm_element(mu));
        }
        plan.push_back({k, kraus});
    }
    MeasurementRecord a = chain_rule_sample(lat, term, plan, 11);
    MeasurementRecord b = chain_rule_sample(lat, term, plan, 11);
    ASSERT_EQ(a.outcomes, b.outcomes);
    ASSERT_EQ(a.probabilities, b.probabilities);

    ChainRuleSampler s(lat, term);
    for (const PlanStep &step : plan) {
        std::vector<double> p = s.conditional(step);
        double total = 0;
        for (double x : p) {
            total += x;
        }
        ASSERT_NEAR(total, 1.0, 1e-9);
        s.apply(step, 0);
    }
}

TEST(contraction, chain_rule_joint_matches_pattern_probability) {
    HexLattice lat = build_lattice(1, 3);
    auto term = BoundaryTermination::fixed();
    ChainRuleSampler s(lat, term);
    std::vector<Mat4> kraus;
    for (Axis mu : ALL_AXES) {
        kraus.push_back(povm_element(mu));
    }
    double joint = 1;
    MeasurementPattern pat(lat.num_sites());
    for (size_t k = 0; k < 3; k++) {
        PlanStep step{k, kraus};
        std::vector<double> p = s.conditional(step);
        int pick = (int)(std::max_element(p.begin(), p.end()) - p.begin());
        joint *= p[pick];
        s.apply(step, pick);
        pat[k] = SiteMeasurement::polarized(ALL_AXES[pick]);
    }
    ASSERT_NEAR(joint, pattern_probability(lat, term, pat), 1e-12);
}
