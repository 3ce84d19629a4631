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

#include <cmath>
#include <sstream>

namespace aklt {

namespace {

constexpr double NEG_CLAMP = 1e-9;

int dangling_label(Dir d) {
    return -1 - (int)d;
}

LabeledTensor vec_tensor(int label, const std::vector<cplx> &v) {
    LabeledTensor t;
    t.labels = {label};
    t.dims = {v.size()};
    t.data = v;
    return t;
}

/// Column-major site order used by both engines.
std::vector<SiteId> contraction_order(const HexLattice &lat) {
    std::vector<SiteId> order;
    order.reserve(lat.num_sites());
    for (int c = 0; c < lat.cols; c++) {
        for (int r = 0; r < lat.rows; r++) {
            order.push_back({r, c});
        }
    }
    return order;
}

/// Double-layer site tensor with legs (l,l'), (r,r'), (v,v') combined as 2*ket+bra.
std::vector<cplx> double_layer_site(SiteKind kind, const Mat4 &op) {
    const PhysTensor &pt = phys_tensor(kind);
    Eigen::Matrix<cplx, 8, 4> t;
    for (int i = 0; i < 8; i++) {
        for (int p = 0; p < 4; p++) {
            t(i, p) = pt.t[(i << 2) | p];
        }
    }
    // d(i, j) = sum_{p, q} t(i, p) op(q, p) conj(t(j, q)).
    Eigen::Matrix<cplx, 8, 8> d = t * op.transpose() * t.adjoint();
    std::vector<cplx> out(64);
    for (int i = 0; i < 8; i++) {
        for (int j = 0; j < 8; j++) {
            int l = (i >> 2) & 1, r = (i >> 1) & 1, v = i & 1;
            int lp = (j >> 2) & 1, rp = (j >> 1) & 1, vp = j & 1;
            int a = 2 * l + lp, b = 2 * r + rp, c = 2 * v + vp;
            out[(a * 4 + b) * 4 + c] = d(i, j);
        }
    }
    return out;
}

MatX effect_factor(const Mat4 &k) {
    Mat4 e = k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Mat4> es(e);
    double tr = std::max(e.trace().real(), 0.0);
    std::vector<int> keep;
    for (int i = 0; i < 4; i++) {
        if (es.eigenvalues()(i) > 1e-14 * std::max(tr, 1e-300)) {
            keep.push_back(i);
        }
    }
    MatX f(std::max<size_t>(keep.size(), 1), 4);
    f.setZero();
    for (size_t r = 0; r < keep.size(); r++) {
        f.row((Eigen::Index)r) = std::sqrt(es.eigenvalues()(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
    }
    return f;
}

double tensor_norm_sq(const LabeledTensor &t) {
    double s = 0;
    for (auto x : t.data) {
        s += std::norm(x);
    }
    return s;
}

}  // namespace

BoundaryTermination BoundaryTermination::fixed(const Vec2 &v) {
    BoundaryTermination t;
    t.mode = Mode::Fixed;
    t.default_vector = v;
    return t;
}

BoundaryTermination BoundaryTermination::traced() {
    BoundaryTermination t;
    t.mode = Mode::Traced;
    return t;
}

Vec2 BoundaryTermination::vector_for(size_t site, Dir d) const {
    auto it = overrides.find({site, d});
    return it == overrides.end() ? default_vector : it->second;
}

std::string BoundaryTermination::describe() const {
    if (mode == Mode::Traced) {
        return "traced";
    }
    auto component = [](cplx c) {
        std::ostringstream s;
        s << c.real();
        if (c.imag() != 0) {
            s << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
        }
        return s.str();
    };
    std::ostringstream ss;
    ss << "fixed(" << component(default_vector(0)) << "," << component(default_vector(1)) << ")";
    if (!overrides.empty()) {
        ss << "+" << overrides.size() << " overrides";
    }
    return ss.str();
}

SiteMeasurement SiteMeasurement::unmeasured() {
    return {};
}

SiteMeasurement SiteMeasurement::polarized(Axis mu) {
    SiteMeasurement m;
    m.kind = Kind::Polarized;
    m.axis = mu;
    return m;
}

SiteMeasurement SiteMeasurement::projected(Axis mu, const Vec4 &bra) {
    SiteMeasurement m;
    m.kind = Kind::Projected;
    m.axis = mu;
    m.covector = bra;
    return m;
}

Mat4 SiteMeasurement::kraus() const {
    switch (kind) {
        case Kind::Unmeasured:
            return Mat4::Identity();
        case Kind::Polarized:
            return povm_element(axis);
        case Kind::Projected: {
            Mat4 k = Mat4::Zero();
            k.row(0) = covector.transpose() * povm_element(axis);
            return k;
        }
    }
    return Mat4::Identity();
}

Engine resolve_engine(const HexLattice &lattice, Engine requested, const ContractionLimits &limits) {
    bool strip_ok = lattice.rows <= limits.strip_max_rows;
    bool dense_ok = lattice.num_sites() <= limits.dense_max_sites;
    switch (requested) {
        case Engine::Strip:
            if (!strip_ok) {
                throw SizeError("strip engine supports at most " + std::to_string(limits.strip_max_rows) + " rows");
            }
            return Engine::Strip;
        case Engine::Dense:
            if (!dense_ok) {
                throw SizeError(
                    "dense engine supports at most " + std::to_string(limits.dense_max_sites) + " sites");
            }
            return Engine::Dense;
        case Engine::Auto:
            if (strip_ok) {
                return Engine::Strip;
            }
            if (dense_ok) {
                return Engine::Dense;
            }
            throw SizeError("lattice exceeds both the dense and the strip caps");
    }
    return Engine::Strip;
}

LabeledTensor dense_network(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<MatX> &maps,
    const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    if (maps.size() != n) {
        throw InvalidInput("dense_network: one map per site required");
    }
    const int num_bonds = (int)lattice.bonds.size();
    int next_env = num_bonds + (int)n;
    std::vector<int> env_labels;
    LabeledTensor acc = LabeledTensor::scalar(1);
    for (SiteId s : contraction_order(lattice)) {
        size_t k = lattice.index(s);
        const MatX &f = maps[k];
        if (f.cols() != 4 || f.rows() < 1) {
            throw InvalidInput("dense_network: maps must be d x 4");
        }
        const size_t d = (size_t)f.rows();
        const PhysTensor &pt = phys_tensor(lattice.kind(s));
        LabeledTensor st;
        st.dims = {2, 2, 2, d};
        st.data.assign(8 * d, 0);
        for (int i = 0; i < 8; i++) {
            for (size_t j = 0; j < d; j++) {
                cplx acc_v = 0;
                for (int p = 0; p < 4; p++) {
                    acc_v += f((Eigen::Index)j, p) * pt.t[(i << 2) | p];
                }
                st.data[i * d + j] = acc_v;
            }
        }
        std::vector<std::pair<int, Vec2>> fixed_legs;
        for (Dir dir : ALL_DIRS) {
            int b = lattice.bond_at(s, dir);
            if (b >= 0) {
                st.labels.push_back(b);
            } else if (term.mode == BoundaryTermination::Mode::Traced) {
                st.labels.push_back(next_env);
                env_labels.push_back(next_env++);
            } else {
                st.labels.push_back(dangling_label(dir));
                fixed_legs.emplace_back(dangling_label(dir), term.vector_for(k, dir));
            }
        }
        st.labels.push_back(num_bonds + (int)k);
        for (auto &[label, v] : fixed_legs) {
            st = contract(st, vec_tensor(label, {v(0), v(1)}));
        }
        acc = contract(acc, st, limits.max_amplitudes);
    }
    std::vector<int> order;
    for (size_t k = 0; k < n; k++) {
        order.push_back(num_bonds + (int)k);
    }
    order.insert(order.end(), env_labels.begin(), env_labels.end());
    acc = permute(acc, order);
    for (size_t k = 0; k < n; k++) {
        acc.labels[k] = (int)k;
    }
    for (size_t e = 0; e < env_labels.size(); e++) {
        acc.labels[n + e] = (int)(n + e);
    }
    return acc;
}

StateVector build_state(const HexLattice &lattice, const BoundaryTermination &term, const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    if (n > limits.dense_max_sites) {
        throw SizeError("build_state: " + std::to_string(n) + " sites exceeds the dense cap");
    }
    std::vector<MatX> maps(n, MatX::Identity(4, 4));
    LabeledTensor t = dense_network(lattice, term, maps, limits);
    StateVector sv;
    sv.num_sites = n;
    sv.env_dim = 1;
    for (size_t k = n; k < t.dims.size(); k++) {
        sv.env_dim *= t.dims[k];
    }
    sv.norm_sq = tensor_norm_sq(t);
    sv.amplitudes = std::move(t.data);
    if (!(sv.norm_sq > 0) || !std::isfinite(sv.norm_sq)) {
        throw ConsistencyError("state has zero or non-finite norm");
    }
    return sv;
}

cplx strip_expectation(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<std::optional<Mat4>> &ops,
    const ContractionLimits &limits) {
    resolve_engine(lattice, Engine::Strip, limits);
    if (ops.size() != lattice.num_sites()) {
        throw InvalidInput("strip_expectation: one operator slot per site required");
    }
    static const std::vector<cplx> id_top = double_layer_site(SiteKind::Top, Mat4::Identity());
    static const std::vector<cplx> id_bot = double_layer_site(SiteKind::Bot, Mat4::Identity());
    LabeledTensor acc = LabeledTensor::scalar(1);
    for (SiteId s : contraction_order(lattice)) {
        size_t k = lattice.index(s);
        SiteKind kind = lattice.kind(s);
        LabeledTensor st;
        st.dims = {4, 4, 4};
        if (ops[k].has_value()) {
            st.data = double_layer_site(kind, *ops[k]);
        } else {
            st.data = kind == SiteKind::Top ? id_top : id_bot;
        }
        std::vector<std::pair<int, std::vector<cplx>>> closures;
        for (Dir dir : ALL_DIRS) {
            int b = lattice.bond_at(s, dir);
            if (b >= 0) {
                st.labels.push_back(b);
                continue;
            }
            st.labels.push_back(dangling_label(dir));
            std::vector<cplx> w(4);
            if (term.mode == BoundaryTermination::Mode::Traced) {
                w = {1, 0, 0, 1};
            } else {
                Vec2 t = term.vector_for(k, dir);
                for (int i = 0; i < 2; i++) {
                    for (int j = 0; j < 2; j++) {
                        w[2 * i + j] = t(i) * std::conj(t(j));
                    }
                }
            }
            closures.emplace_back(dangling_label(dir), w);
        }
        for (auto &[label, w] : closures) {
            st = contract(st, vec_tensor(label, w));
        }
        acc = contract(acc, st, limits.max_amplitudes);
    }
    if (acc.data.size() != 1) {
        throw ConsistencyError("strip contraction left open legs");
    }
    return acc.data[0];
}

double effect_weight(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<Mat4> &kraus, Engine engine,
    const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    if (kraus.size() != n) {
        throw InvalidInput("effect_weight: one Kraus operator per site required");
    }
    Engine e = resolve_engine(lattice, engine, limits);
    if (e == Engine::Strip) {
        std::vector<std::optional<Mat4>> ops(n);
        for (size_t k = 0; k < n; k++) {
            if (!kraus[k].isIdentity(0)) {
                ops[k] = kraus[k].adjoint() * kraus[k];
            }
        }
        return strip_expectation(lattice, term, ops, limits).real();
    }
    std::vector<MatX> maps(n);
    for (size_t k = 0; k < n; k++) {
        maps[k] = kraus[k].isIdentity(0) ? MatX(MatX::Identity(4, 4)) : effect_factor(kraus[k]);
    }
    return tensor_norm_sq(dense_network(lattice, term, maps, limits));
}

double clamp_probability(double p) {
    if (p < -NEG_CLAMP) {
        throw ConsistencyError("negative probability " + std::to_string(p));
    }
    return p < 0 ? 0.0 : p;
}

double pattern_probability(
    const HexLattice &lattice, const BoundaryTermination &term, const MeasurementPattern &pattern, Engine engine,
    const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    if (pattern.size() != n) {
        throw InvalidInput("pattern_probability: pattern must cover every site");
    }
    std::vector<Mat4> kraus(n), ident(n, Mat4::Identity());
    for (size_t k = 0; k < n; k++) {
        kraus[k] = pattern[k].kraus();
    }
    double num = effect_weight(lattice, term, kraus, engine, limits);
    double den = effect_weight(lattice, term, ident, engine, limits);
    return clamp_probability(num / den);
}

cplx operator_expectation(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<std::optional<Mat4>> &ops,
    Engine engine, const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    if (ops.size() != n) {
        throw InvalidInput("operator_expectation: one operator slot per site required");
    }
    Engine e = resolve_engine(lattice, engine, limits);
    if (e == Engine::Strip) {
        std::vector<std::optional<Mat4>> none(n);
        return strip_expectation(lattice, term, ops, limits) / strip_expectation(lattice, term, none, limits);
    }
    std::vector<MatX> id(n, MatX::Identity(4, 4)), with(n, MatX::Identity(4, 4));
    for (size_t k = 0; k < n; k++) {
        if (ops[k].has_value()) {
            with[k] = *ops[k];
        }
    }
    LabeledTensor a = dense_network(lattice, term, id, limits);
    LabeledTensor b = dense_network(lattice, term, with, limits);
    cplx num = 0;
    for (size_t i = 0; i < a.data.size(); i++) {
        num += std::conj(a.data[i]) * b.data[i];
    }
    return num / tensor_norm_sq(a);
}

Mat4 reduced_density(
    const HexLattice &lattice, const BoundaryTermination &term, SiteId site, Engine engine,
    const ContractionLimits &limits) {
    const size_t n = lattice.num_sites();
    const size_t k = lattice.index(site);
    Engine e = resolve_engine(lattice, engine, limits);
    Mat4 rho = Mat4::Zero();
    if (e == Engine::Strip) {
        std::vector<std::optional<Mat4>> ops(n);
        double norm = strip_expectation(lattice, term, ops, limits).real();
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                Mat4 o = Mat4::Zero();
                o(b, a) = 1;
                ops[k] = o;
                rho(a, b) = strip_expectation(lattice, term, ops, limits) / norm;
            }
        }
        return rho;
    }
    std::vector<MatX> id(n, MatX::Identity(4, 4));
    LabeledTensor psi = dense_network(lattice, term, id, limits);
    size_t inner = 1;
    for (size_t j = k + 1; j < psi.dims.size(); j++) {
        inner *= psi.dims[j];
    }
    const size_t outer = psi.data.size() / (4 * inner);
    double norm = tensor_norm_sq(psi);
    for (size_t o = 0; o < outer; o++) {
        for (size_t i = 0; i < inner; i++) {
            for (int a = 0; a < 4; a++) {
                cplx va = psi.data[(o * 4 + a) * inner + i];
                for (int b = 0; b < 4; b++) {
                    rho(a, b) += va * std::conj(psi.data[(o * 4 + b) * inner + i]);
                }
            }
        }
    }
    return rho / norm;
}

ChainRuleSampler::ChainRuleSampler(
    const HexLattice &lattice, const BoundaryTermination &term, Engine engine, const ContractionLimits &limits)
    : lattice_(lattice),
      term_(term),
      engine_(resolve_engine(lattice, engine, limits)),
      limits_(limits),
      kraus_(lattice.num_sites(), Mat4::Identity()) {
    weight_ = effect_weight(lattice_, term_, kraus_, engine_, limits_);
}

std::vector<double> ChainRuleSampler::conditional(const PlanStep &step) const {
    if (step.site >= kraus_.size() || step.kraus.empty()) {
        throw InvalidInput("plan step has an invalid site or no outcomes");
    }
    std::vector<Mat4> trial = kraus_;
    std::vector<double> p;
    double total = 0;
    for (const Mat4 &k : step.kraus) {
        trial[step.site] = k * kraus_[step.site];
        double w = effect_weight(lattice_, term_, trial, engine_, limits_) / weight_;
        p.push_back(clamp_probability(w));
        total += p.back();
    }
    if (std::abs(total - 1) > 1e-9) {
        throw ConsistencyError("chain-rule step probabilities sum to " + std::to_string(total));
    }
    return p;
}

void ChainRuleSampler::apply(const PlanStep &step, int outcome) {
    if (outcome < 0 || (size_t)outcome >= step.kraus.size()) {
        throw InvalidInput("outcome out of range");
    }
    kraus_[step.site] = step.kraus[outcome] * kraus_[step.site];
    weight_ = effect_weight(lattice_, term_, kraus_, engine_, limits_);
    if (!(weight_ > 0)) {
        throw ConsistencyError("applied an outcome of zero probability");
    }
}

void ChainRuleSampler::apply_all(const std::vector<Mat4> &kraus) {
    if (kraus.size() != kraus_.size()) {
        throw InvalidInput("one operator per site is required");
    }
    for (size_t k = 0; k < kraus.size(); k++) {
        kraus_[k] = kraus[k] * kraus_[k];
    }
    weight_ = effect_weight(lattice_, term_, kraus_, engine_, limits_);
    if (!(weight_ > 0)) {
        throw ConsistencyError("applied operators of zero weight");
    }
}

int ChainRuleSampler::measure(const PlanStep &step, std::mt19937_64 &rng, double *probability) {
    std::vector<double> p = conditional(step);
    double total = 0;
    for (double x : p) {
        total += x;
    }
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    int pick = (int)p.size() - 1;
    double acc = 0;
    for (size_t k = 0; k < p.size(); k++) {
        acc += p[k];
        if (u < acc && p[k] > 0) {
            pick = (int)k;
            break;
        }
    }
    while (p[pick] == 0 && pick > 0) {
        pick--;
    }
    if (probability != nullptr) {
        *probability = p[pick];
    }
    apply(step, pick);
    return pick;
}

MeasurementRecord chain_rule_sample(
    const HexLattice &lattice, const BoundaryTermination &term, const std::vector<PlanStep> &plan, uint64_t seed,
    Engine engine, const ContractionLimits &limits) {
    ChainRuleSampler sampler(lattice, term, engine, limits);
    std::mt19937_64 rng(seed);
    MeasurementRecord rec;
    for (const PlanStep &step : plan) {
        double p = 0;
        rec.outcomes.push_back(sampler.measure(step, rng, &p));
        rec.probabilities.push_back(p);
    }
    return rec;
}

}  // namespace aklt
