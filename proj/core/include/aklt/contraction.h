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

#ifndef AKLT_CONTRACTION_H
#define AKLT_CONTRACTION_H

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "aklt/lattice.h"
#include "aklt/tensor_network.h"
#include "aklt/tensors.h"

namespace aklt {

/// How dangling virtual legs of an open patch are closed.
///
/// Fixed: each dangling index is contracted with a vector (default |0^z>, given index-wise).
/// Traced: each dangling index is left open and traced out of |G><G|.
struct BoundaryTermination {
    enum class Mode : uint8_t { Fixed, Traced };
    Mode mode = Mode::Fixed;
    Vec2 default_vector = Vec2(1, 0);
    std::map<std::pair<size_t, Dir>, Vec2> overrides;

    static BoundaryTermination fixed(const Vec2 &v = Vec2(1, 0));
    static BoundaryTermination traced();
    /// Index-wise termination vector of dangling leg (site index, dir). Fixed mode only.
    Vec2 vector_for(size_t site, Dir d) const;
    std::string describe() const;
};

struct ContractionLimits {
    size_t dense_max_sites = 12;
    size_t max_amplitudes = size_t{1} << 24;
    int strip_max_rows = 4;
};

enum class Engine : uint8_t { Auto, Dense, Strip };

struct SiteMeasurement {
    enum class Kind : uint8_t { Unmeasured, Polarized, Projected };
    Kind kind = Kind::Unmeasured;
    Axis axis = Axis::Z;
    Vec4 covector = Vec4::Zero();

    static SiteMeasurement unmeasured();
    static SiteMeasurement polarized(Axis mu);
    /// POVM outcome mu followed by projection onto `bra`.
    static SiteMeasurement projected(Axis mu, const Vec4 &bra);
    Mat4 kraus() const;
};

using MeasurementPattern = std::vector<SiteMeasurement>;

struct StateVector {
    /// Physical indices in row-major site order (first site slowest), then environment indices.
    std::vector<cplx> amplitudes;
    size_t num_sites = 0;
    size_t env_dim = 1;
    double norm_sq = 0;
};

StateVector build_state(const HexLattice &lattice, const BoundaryTermination &term, const ContractionLimits &limits = {});

/// Dense contraction of (prod_s F_s)|G> where F_s = maps[s] is d_s x 4. The result has
/// physical labels 0..n-1 (site index order) followed by environment labels.
LabeledTensor dense_network(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<MatX> &maps,
    const ContractionLimits &limits = {});

/// Unnormalized <G| (x)_s O_s |G> from the double-layer network (strip engine).
/// Sites with no operator act as identity.
cplx strip_expectation(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<std::optional<Mat4>> &ops,
    const ContractionLimits &limits = {});

/// Unnormalized <G| (x)_s K_s^dag K_s |G> using the chosen engine.
double effect_weight(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<Mat4> &kraus, Engine engine,
    const ContractionLimits &limits = {});

double pattern_probability(
    const HexLattice &lattice, const BoundaryTermination &term, const MeasurementPattern &pattern,
    Engine engine = Engine::Auto, const ContractionLimits &limits = {});

/// Normalized <(x)_s O_s>.
cplx operator_expectation(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<std::optional<Mat4>> &ops,
    Engine engine = Engine::Auto, const ContractionLimits &limits = {});

Mat4 reduced_density(
    const HexLattice &lattice, const BoundaryTermination &term, SiteId site, Engine engine = Engine::Auto,
    const ContractionLimits &limits = {});

Engine resolve_engine(const HexLattice &lattice, Engine requested, const ContractionLimits &limits);

/// One measurement of a plan: outcome k applies Kraus operator kraus[k] to `site`.
struct PlanStep {
    size_t site;
    std::vector<Mat4> kraus;
};

struct MeasurementRecord {
    std::vector<int> outcomes;
    /// Conditional probability of each recorded outcome.
    std::vector<double> probabilities;
};

/// Exact sequential sampler: keeps the accumulated Kraus operator of every site.
class ChainRuleSampler {
   public:
    ChainRuleSampler(
        const HexLattice &lattice, const BoundaryTermination &term, Engine engine = Engine::Auto,
        const ContractionLimits &limits = {});

    /// Conditional outcome probabilities of a step given everything measured so far.
    std::vector<double> conditional(const PlanStep &step) const;
    /// Draws an outcome, applies it and returns it.
    int measure(const PlanStep &step, std::mt19937_64 &rng, double *probability = nullptr);
    /// Applies a chosen outcome without sampling.
    void apply(const PlanStep &step, int outcome);
    /// Left-multiplies every site's operator by kraus[site] with a single contraction.
    void apply_all(const std::vector<Mat4> &kraus);
    double weight() const {
        return weight_;
    }

   private:
    const HexLattice &lattice_;
    BoundaryTermination term_;
    Engine engine_;
    ContractionLimits limits_;
    std::vector<Mat4> kraus_;
    double weight_;
};

MeasurementRecord chain_rule_sample(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<PlanStep> &plan, uint64_t seed,
    Engine engine = Engine::Auto, const ContractionLimits &limits = {});

/// Probabilities in [-1e-9, 0) are clamped to 0; below that a ConsistencyError is thrown.
double clamp_probability(double p);

}  // namespace aklt

#endif
