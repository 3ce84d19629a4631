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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "aklt/logic.h"
#include "aklt/router.h"
#include "aklt/sampler.h"
#include "aklt/verify.h"
#include "json.hpp"

namespace aklt_cli {

namespace {

using nlohmann::json;

/// Thrown after the tool's own validation; mapped to EXIT_INVALID.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string lattice = "2x4";
    std::string termination = "fixed";
    std::string mode = "exact";
    std::optional<uint64_t> seed;
    std::string out;
    int jobs = 1;
};

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

aklt::HexLattice load_lattice(const std::string &spec) {
    if (std::regex_match(spec, std::regex("[0-9]+[xX][0-9]+"))) {
        auto [r, c] = aklt::parse_dims(spec);
        return aklt::build_lattice(r, c);
    }
    return aklt::lattice_from_json(read_file(spec));
}

aklt::BoundaryTermination load_termination(const std::string &name) {
    const double h = 1 / std::sqrt(2.0);
    if (name == "fixed" || name == "fixed-z") {
        return aklt::BoundaryTermination::fixed();
    }
    if (name == "fixed-x") {
        return aklt::BoundaryTermination::fixed(aklt::Vec2(h, h));
    }
    if (name == "fixed-y") {
        return aklt::BoundaryTermination::fixed(aklt::Vec2(h, aklt::cplx(0, h)));
    }
    if (name == "traced") {
        return aklt::BoundaryTermination::traced();
    }
    throw UsageError("unknown termination '" + name + "' (fixed, fixed-z, fixed-x, fixed-y, traced)");
}

aklt::CircuitSpec load_circuit(const std::string &path) {
    if (path.empty()) {
        throw UsageError("--circuit is required");
    }
    return aklt::circuit_from_json(read_file(path));
}

uint64_t require_seed(const Common &c) {
    if (!c.seed) {
        throw UsageError("--seed is required");
    }
    return *c.seed;
}

/// Writes `text` to --out, else to $AKLT_OUTPUT_DIR/<default_name>, else to `out`.
void emit(const Common &c, const std::string &default_name, const std::string &text, std::ostream &out) {
    std::filesystem::path target;
    if (!c.out.empty()) {
        target = c.out;
    } else if (const char *dir = std::getenv(OUTPUT_DIR_ENV); dir != nullptr && *dir != '\0') {
        target = std::filesystem::path(dir) / default_name;
    } else {
        out << text;
        if (text.empty() || text.back() != '\n') {
            out << '\n';
        }
        return;
    }
    if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path());
    }
    std::ofstream f(target);
    if (!f) {
        throw UsageError("cannot write '" + target.string() + "'");
    }
    f << text;
    if (text.empty() || text.back() != '\n') {
        f << '\n';
    }
}

void add_common(CLI::App *app, Common &c, bool lattice, bool sampling) {
    if (lattice) {
        app->add_option("--lattice", c.lattice, "RxC dimensions or a lattice JSON file")->capture_default_str();
        app->add_option("--termination", c.termination, "fixed (|0^z>), fixed-x, fixed-y or traced")
            ->capture_default_str();
    }
    if (sampling) {
        app->add_option("--mode", c.mode, "stage-1 sampling: exact or iid")->capture_default_str();
    }
    app->add_option("--seed", c.seed, "RNG seed (required)");
    app->add_option("--out", c.out, "output file (default: stdout or $" + std::string(OUTPUT_DIR_ENV) + ")");
}

json lattice_json(const aklt::HexLattice &lat) {
    return {{"rows", lat.rows}, {"cols", lat.cols}};
}

json site_json(aklt::SiteId s) {
    return json::array({s.row, s.col});
}

int cmd_sample(const Common &c, std::ostream &out) {
    aklt::HexLattice lat = load_lattice(c.lattice);
    aklt::BoundaryTermination term = load_termination(c.termination);
    aklt::SamplingMode mode = aklt::sampling_mode_from_string(c.mode);
    uint64_t seed = require_seed(c);
    aklt::AxisAssignment a = aklt::stage1_sample(lat, term, mode, seed);
    aklt::MatchedBondSet m = aklt::matched_bonds(lat, a);
    json matched = json::array();
    for (size_t b = 0; b < lat.bonds.size(); b++) {
        if (m.matched[b]) {
            matched.push_back(json::array({site_json(lat.bonds[b].a), site_json(lat.bonds[b].b)}));
        }
    }
    json j;
    j["format_version"] = 1;
    j["lattice"] = lattice_json(lat);
    j["termination"] = term.describe();
    j["mode"] = aklt::sampling_mode_name(mode);
    j["seed"] = seed;
    j["assignment"] = json::parse(aklt::assignment_to_json(a));
    j["matched_bonds"] = matched;
    j["matched_count"] = m.count();
    j["bond_count"] = lat.bonds.size();
    emit(c, "sample.json", j.dump(2), out);
    return EXIT_OK;
}

int cmd_route(const Common &c, const std::string &circuit_path, const std::string &assignment_path, int spacing,
              int attempts, std::ostream &out, std::ostream &err) {
    aklt::HexLattice lat = load_lattice(c.lattice);
    aklt::BoundaryTermination term = load_termination(c.termination);
    aklt::CircuitSpec circuit = load_circuit(circuit_path);
    aklt::RouterOptions router;
    router.spacing = spacing;
    std::vector<aklt::AxisAssignment> candidates;
    uint64_t seed = 0;
    if (!assignment_path.empty()) {
        candidates.push_back(aklt::assignment_from_json(read_file(assignment_path)));
    } else {
        seed = require_seed(c);
        aklt::SamplingMode mode = aklt::sampling_mode_from_string(c.mode);
        for (int k = 0; k < attempts; k++) {
            candidates.push_back(aklt::stage1_sample(lat, term, mode, aklt::derive_seed(seed, (uint64_t)k)));
        }
    }
    std::string diagnostic;
    for (size_t k = 0; k < candidates.size(); k++) {
        aklt::RouteResult r = aklt::route_assignment(lat, candidates[k], circuit, term, router);
        if (!r.backbone) {
            diagnostic = r.diagnostic;
            continue;
        }
        json j;
        j["format_version"] = 1;
        j["lattice"] = lattice_json(lat);
        j["termination"] = term.describe();
        if (assignment_path.empty()) {
            j["seed"] = seed;
        }
        j["attempt"] = k;
        j["assignment"] = json::parse(aklt::assignment_to_json(candidates[k]));
        j["backbone"] = json::parse(aklt::backbone_to_json(*r.backbone));
        emit(c, "route.json", j.dump(2), out);
        return EXIT_OK;
    }
    json e = {{"format_version", 1},
              {"error", {{"kind", "routing"}, {"message", "no routable assignment"}, {"diagnostic", diagnostic}}}};
    err << e.dump() << '\n';
    return EXIT_PROTOCOL;
}

struct TrialOutcome {
    bool ok = false;
    std::vector<int> bits;
    std::string error;
};

int cmd_run(const Common &c, const std::string &circuit_path, int spacing, int attempts, int trials,
            std::ostream &out, std::ostream &err) {
    aklt::HexLattice lat = load_lattice(c.lattice);
    aklt::BoundaryTermination term = load_termination(c.termination);
    aklt::CircuitSpec circuit = load_circuit(circuit_path);
    if (trials < 1) {
        throw UsageError("--trials must be at least 1");
    }
    aklt::ProtocolOptions o;
    o.mode = aklt::sampling_mode_from_string(c.mode);
    o.seed = require_seed(c);
    o.router.spacing = spacing;
    o.max_stage1_attempts = attempts;
    if (trials == 1) {
        aklt::ProtocolResult r = aklt::run_protocol(lat, term, circuit, o);
        emit(c, "run.json", aklt::transcript_to_json(lat, term, circuit, o, r), out);
        return EXIT_OK;
    }
    std::vector<TrialOutcome> results((size_t)trials);
    auto work = [&](size_t begin, size_t end) {
        for (size_t t = begin; t < end; t++) {
            aklt::ProtocolOptions ot = o;
            ot.seed = aklt::derive_seed(o.seed, t);
            try {
                aklt::ProtocolResult r = aklt::run_protocol(lat, term, circuit, ot);
                results[t].ok = true;
                for (const auto &w : r.outcome.wires) {
                    results[t].bits.push_back(w.corrected);
                }
            } catch (const aklt::ProtocolError &e) {
                results[t].error = e.what();
            }
        }
    };
    int jobs = std::max(1, std::min(c.jobs, trials));
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; k++) {
        pool.emplace_back(work, (size_t)trials * k / jobs, (size_t)trials * (k + 1) / jobs);
    }
    for (auto &th : pool) {
        th.join();
    }
    std::map<std::string, size_t> counts;
    json per_trial = json::array();
    size_t failures = 0;
    for (const TrialOutcome &t : results) {
        if (!t.ok) {
            failures++;
            per_trial.push_back({{"error", t.error}});
            continue;
        }
        std::string key;
        for (int b : t.bits) {
            key.push_back((char)('0' + b));
        }
        counts[key]++;
        per_trial.push_back({{"bits", key}});
    }
    json j;
    j["format_version"] = 1;
    j["lattice"] = lattice_json(lat);
    j["termination"] = term.describe();
    j["mode"] = aklt::sampling_mode_name(o.mode);
    j["seed"] = o.seed;
    j["trials"] = trials;
    j["circuit"] = json::parse(aklt::circuit_to_json(circuit));
    j["counts"] = counts;
    j["failures"] = failures;
    j["per_trial"] = per_trial;
    emit(c, "run.json", j.dump(2), out);
    if (failures == (size_t)trials) {
        err << json{{"format_version", 1}, {"error", {{"kind", "routing"}, {"message", "every trial failed"}}}}.dump()
            << '\n';
        return EXIT_PROTOCOL;
    }
    return EXIT_OK;
}

int cmd_verify(const Common &c, const std::string &level, std::ostream &out, std::ostream &err) {
    aklt::VerifyOptions o;
    o.level = aklt::verify_level_from_string(level);
    o.jobs = c.jobs;
    if (c.seed) {
        o.seed = *c.seed;
    }
    auto results = aklt::run_verification(o, [&](const aklt::CheckResult &r) {
        err << aklt::format_check(r) << std::endl;
    });
    emit(c, "verify.json", aklt::verification_to_json(o.level, results), out);
    for (const auto &r : results) {
        if (!r.passed) {
            return EXIT_PROTOCOL;
        }
    }
    return EXIT_OK;
}

std::vector<double> parse_p_values(const std::string &text) {
    std::vector<double> out;
    std::smatch m;
    static const std::regex range("([0-9.]+):([0-9.]+):([0-9.]+)");
    try {
        if (std::regex_match(text, m, range)) {
            double lo = std::stod(m[1]), hi = std::stod(m[2]), step = std::stod(m[3]);
            if (!(step > 0) || hi < lo) {
                throw UsageError("--p range needs lo <= hi and a positive step");
            }
            for (int k = 0; lo + k * step <= hi + 1e-12; k++) {
                out.push_back(lo + k * step);
            }
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw UsageError("bad --p value '" + item + "'");
            }
        }
    } catch (const std::logic_error &) {
        throw UsageError("bad --p value '" + text + "'");
    }
    if (out.empty()) {
        throw UsageError("--p is empty");
    }
    return out;
}

int cmd_percolate(const Common &c, const std::string &p_text, const std::string &sizes_text, size_t trials,
                  std::ostream &out) {
    uint64_t seed = require_seed(c);
    std::vector<double> ps = parse_p_values(p_text);
    std::vector<std::pair<int, int>> sizes;
    std::stringstream ss(sizes_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        sizes.push_back(aklt::parse_dims(item));
    }
    if (sizes.empty()) {
        throw UsageError("--size is empty");
    }
    std::ostringstream csv;
    csv << "format_version,rows,cols,p,trials,spanning,fraction,std_error\n";
    uint64_t index = 0;
    for (auto [r, cols] : sizes) {
        for (double p : ps) {
            aklt::SpanningEstimate e = aklt::spanning_probability(r, cols, p, trials, aklt::derive_seed(seed, index++), c.jobs);
            size_t spanning = (size_t)std::llround(e.fraction * (double)e.trials);
            csv << 1 << ',' << r << ',' << cols << ',' << p << ',' << e.trials << ',' << spanning << ',' << e.fraction
                << ',' << e.std_error << '\n';
        }
    }
    emit(c, "percolate.csv", csv.str(), out);
    return EXIT_OK;
}

void error_body(std::ostream &err, const std::string &kind, const std::string &message) {
    err << json{{"format_version", 1}, {"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Measurement-based quantum computation on the 2D AKLT state"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "aklt 0.1.0");

    Common c;
    std::string circuit_path, assignment_path, level = "full", p_text = "0.6527", sizes = "8x16";
    int spacing = 4, attempts = 32, trials = 1;
    size_t perc_trials = 1000;

    auto *sample = app.add_subcommand("sample", "stage-1 polarizing measurement and matched-bond map");
    add_common(sample, c, true, true);

    auto *route = app.add_subcommand("route", "route a circuit backbone on a sampled or given assignment");
    add_common(route, c, true, true);
    route->add_option("--circuit", circuit_path, "circuit JSON file")->required();
    route->add_option("--assignment", assignment_path, "assignment JSON file (skips sampling)");
    route->add_option("--spacing", spacing, "rows per wire band")->capture_default_str();
    route->add_option("--attempts", attempts, "stage-1 samples to try")->capture_default_str();

    auto *run_cmd = app.add_subcommand("run", "full protocol; transcript JSON");
    add_common(run_cmd, c, true, true);
    run_cmd->add_option("--circuit", circuit_path, "circuit JSON file")->required();
    run_cmd->add_option("--spacing", spacing, "rows per wire band")->capture_default_str();
    run_cmd->add_option("--attempts", attempts, "stage-1 samples to try")->capture_default_str();
    run_cmd->add_option("--trials", trials, "independent runs; more than one gives a summary")->capture_default_str();
    run_cmd->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();

    auto *verify = app.add_subcommand("verify", "oracle and acceptance checks");
    verify->add_option("--level", level, "quick or full")->capture_default_str();
    verify->add_option("--seed", c.seed, "seed for the Monte Carlo checks");
    verify->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
    verify->add_option("--out", c.out, "output file");

    auto *percolate = app.add_subcommand("percolate", "spanning-probability sweep (CSV)");
    add_common(percolate, c, false, false);
    percolate->add_option("--p", p_text, "comma list or lo:hi:step")->capture_default_str();
    percolate->add_option("--size", sizes, "comma list of RxC")->capture_default_str();
    percolate->add_option("--trials", perc_trials, "trials per point")->capture_default_str();
    percolate->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return EXIT_OK;
    } catch (const CLI::CallForVersion &e) {
        out << e.what() << '\n';
        return EXIT_OK;
    } catch (const CLI::ParseError &e) {
        error_body(err, "usage", e.what());
        return EXIT_INVALID;
    }
    if (c.jobs < 1) {
        error_body(err, "usage", "--jobs must be at least 1");
        return EXIT_INVALID;
    }

    try {
        if (sample->parsed()) {
            return cmd_sample(c, out);
        }
        if (route->parsed()) {
            return cmd_route(c, circuit_path, assignment_path, spacing, attempts, out, err);
        }
        if (run_cmd->parsed()) {
            return cmd_run(c, circuit_path, spacing, attempts, trials, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(c, level, out, err);
        }
        return cmd_percolate(c, p_text, sizes, perc_trials, out);
    } catch (const UsageError &e) {
        error_body(err, "usage", e.what());
        return EXIT_INVALID;
    } catch (const aklt::InvalidInput &e) {
        error_body(err, "invalid_input", e.what());
        return EXIT_INVALID;
    } catch (const aklt::SizeError &e) {
        error_body(err, "size", e.what());
        return EXIT_INVALID;
    } catch (const aklt::RoutingError &e) {
        error_body(err, "routing", e.what());
        return EXIT_PROTOCOL;
    } catch (const aklt::ProtocolError &e) {
        error_body(err, "protocol", e.what());
        return EXIT_PROTOCOL;
    } catch (const std::exception &e) {
        error_body(err, "internal", e.what());
        return EXIT_PROTOCOL;
    }
}

}  // namespace aklt_cli
