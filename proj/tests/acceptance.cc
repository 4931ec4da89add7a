// Copyright 2026 The qbroadcast Authors
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

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "qbroadcast/analysis.h"
#include "qbroadcast/broadcast.h"
#include "qbroadcast/cli.h"
#include "qbroadcast/cloner.h"
#include "qbroadcast/errors.h"

using namespace qbroadcast;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; k++) {
        out.push_back(lo + (hi - lo) * k / (n - 1));
    }
    return out;
}

Outcome range_reproduction(double xi, double radius) {
    auto p = ClonerParameter::make(xi);
    double lo = boundary_bisect(p, nonlocal_inseparable, Side::Lower, 1e-12);
    double hi = boundary_bisect(p, nonlocal_inseparable, Side::Upper, 1e-12);
    Interval closed = nonlocal_inseparability_range(p);
    double numeric_err = std::max(std::abs(lo - (0.5 - radius)), std::abs(hi - (0.5 + radius)));
    double closed_err = std::max(std::abs(closed.lo - (0.5 - radius)), std::abs(closed.hi - (0.5 + radius)));
    return {numeric_err <= 1e-8 && closed_err <= 1e-12,
            "numeric [" + g(lo) + ", " + g(hi) + "] err " + g(numeric_err) + " (tol 1e-8), closed-form err " +
                g(closed_err) + " (tol 1e-12)"};
}

Outcome criterion_1() {
    return range_reproduction(1.0 / 6, std::sqrt(39.0) / 16);
}

Outcome criterion_2() {
    return range_reproduction(kXiMin, std::sqrt(3.0) / 4);
}

Outcome criterion_3() {
    bool undefined = false;
    try {
        nonlocal_inseparability_range(ClonerParameter::make(kXiEntanglingMax + 1e-6));
    } catch (const RangeUndefined &) {
        undefined = true;
    }
    Interval at = nonlocal_inseparability_range(ClonerParameter::make(kXiEntanglingMax));
    bool degenerate = at.width() <= 1e-6 && std::abs(at.lo - 0.5) <= 1e-6;
    return {undefined && degenerate, std::string("RangeUndefined above bound: ") + (undefined ? "yes" : "no") +
                                         ", width at bound " + g(at.width()) + " (tol 1e-6)"};
}

Outcome criterion_4() {
    double worst = 0;
    int cases = 0;
    for (double xi : {1.0 / 6, 0.20, 0.30, 0.45}) {
        auto p = ClonerParameter::make(xi);
        for (int k = 1; k <= 9; k++) {
            auto in = EntangledInput::from_alpha_sq(k / 10.0);
            auto out = oracle_broadcast(in, p);
            worst = std::max({worst, max_abs_diff(out.nonlocal.matrix(), nonlocal_state(in, p).matrix()),
                              max_abs_diff(out.local.matrix(), local_state(in, p).matrix())});
            cases++;
        }
    }
    return {cases == 36 && worst <= 1e-12, std::to_string(cases) + " cases, max entry gap " + g(worst) +
                                               " (tol 1e-12)"};
}

Outcome criterion_5() {
    auto xis = grid(kXiMin, kXiEntanglingMax, 20);
    double worst_excess = -1;
    for (double xi : xis) {
        auto p = ClonerParameter::make(xi);
        Interval inner = nonlocal_inseparability_range(p);
        Interval outer = local_separability_range(p);
        worst_excess = std::max({worst_excess, outer.lo - inner.lo, inner.hi - outer.hi});
    }
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<size_t> pick(0, xis.size() - 2);
    std::uniform_real_distribution<double> u(0, 1);
    int confirmed = 0;
    for (int trial = 0; trial < 50; trial++) {
        auto p = ClonerParameter::make(xis[pick(rng)]);
        Interval inner = nonlocal_inseparability_range(p);
        double a2 = inner.lo + (inner.hi - inner.lo) * u(rng);
        auto in = EntangledInput::from_alpha_sq(a2);
        bool cross_entangled = !ppt_test(nonlocal_state(in, p)).separable;
        bool copy_separable = ppt_test(local_state(in, p)).separable;
        if (cross_entangled && copy_separable) {
            confirmed++;
        }
    }
    return {worst_excess <= 1e-12 && confirmed == 50,
            "containment excess " + g(worst_excess) + " over 20 xi; direct PPT confirmed " +
                std::to_string(confirmed) + "/50"};
}

Outcome criterion_6() {
    double max_m = 0;
    int ranges = 0;
    for (double xi : grid(kXiMin, 0.5, 20)) {
        auto p = ClonerParameter::make(xi);
        for (double a2 : grid(0, 1, 200)) {
            max_m = std::max(max_m, bell_quantity_m(nonlocal_state(EntangledInput::from_alpha_sq(a2), p)));
        }
        ranges += bell_violation_range(p).has_value() ? 1 : 0;
    }
    auto exists = [](double xi) {
        return bell_violation_range(ClonerParameter::analysis_only(xi)).has_value();
    };
    double threshold = bisect_threshold(exists, 0, kXiMin, 1e-12);
    double expected = 0.5 - std::pow(2.0, -1.25);
    bool pass = max_m <= 0.5 + 1e-9 && ranges == 0 && std::abs(threshold - expected) <= 1e-9;
    return {pass, "max M " + g(max_m) + " (bound 0.5), ranges inside machine range " + std::to_string(ranges) +
                      ", threshold " + g(threshold) + " vs " + g(expected) + " err " +
                      g(std::abs(threshold - expected))};
}

Outcome criterion_7() {
    auto a = filter_search_max_m(EntangledInput::from_alpha(1 / std::sqrt(2.0)), ClonerParameter::make(kXiMin), 101);
    auto b = filter_search_max_m(EntangledInput::from_alpha_sq(0.2), ClonerParameter::make(1.0 / 6), 101);
    return {a.max_m <= 1 && b.max_m <= 1, "max M over 101x101 filters: " + g(a.max_m) + " (maxent, xi_min), " +
                                              g(b.max_m) + " (alpha^2=0.2, xi=1/6)"};
}

Outcome criterion_8() {
    double worst = 0;
    bool all_found = true;
    for (double xi : grid(kXiMin, 0.5, 12)) {
        auto w = werner_decompose(nonlocal_state(EntangledInput::from_alpha_sq(0.5), ClonerParameter::make(xi)), 1e-12);
        if (!w) {
            all_found = false;
            continue;
        }
        worst = std::max(worst, std::abs(w->x - (1 - 2 * xi) * (1 - 2 * xi)));
    }
    int rejected = 0;
    for (double a2 : {0.3, 0.45, 0.55}) {
        for (double xi : {kXiMin, 1.0 / 6, 0.3}) {
            rejected += werner_decompose(nonlocal_state(EntangledInput::from_alpha_sq(a2), ClonerParameter::make(xi)),
                                         1e-12)
                            ? 0
                            : 1;
        }
    }
    auto opt = werner_decompose(nonlocal_state(EntangledInput::from_alpha_sq(0.5), ClonerParameter::make(1.0 / 6)), 1e-12);
    auto low = werner_decompose(nonlocal_state(EntangledInput::from_alpha_sq(0.5), ClonerParameter::make(kXiMin)), 1e-12);
    bool named = opt && low && std::abs(opt->x - 4.0 / 9) <= 1e-12 && std::abs(low->x - 0.5) <= 1e-12;
    return {all_found && worst <= 1e-12 && rejected == 9 && named,
            "x err " + g(worst) + " on balanced inputs, rejected " + std::to_string(rejected) +
                "/9 unbalanced, x(1/6) = " + (opt ? g(opt->x) : "none") + ", x(xi_min) = " + (low ? g(low->x) : "none")};
}

Outcome criterion_9() {
    auto maxent = EntangledInput::from_alpha(1 / std::sqrt(2.0));
    double f_opt = teleportation_fidelity(nonlocal_state(maxent, ClonerParameter::make(1.0 / 6)));
    double f_low = teleportation_fidelity(nonlocal_state(maxent, ClonerParameter::make(kXiMin)));
    double worst = 0;
    for (double a2 : grid(0, 1, 20)) {
        for (double xi : grid(kXiMin, 0.5, 20)) {
            auto in = EntangledInput::from_alpha_sq(a2);
            double eta = 1 - 2 * xi;
            double closed = 0.5 * (1 + eta * eta * (1 + 4 * in.alpha() * in.beta()) / 3);
            worst = std::max(worst, std::abs(teleportation_fidelity(nonlocal_state(in, ClonerParameter::make(xi))) - closed));
        }
    }
    bool pass = std::abs(f_opt - 13.0 / 18) <= 1e-12 && std::abs(f_low - 0.75) <= 1e-12 && worst <= 1e-12;
    return {pass, "F(1/6) = " + g(f_opt) + ", F(xi_min) = " + g(f_low) + ", grid gap " + g(worst)};
}

Outcome criterion_10() {
    double iso = 0;
    for (double xi : grid(kXiMin, 0.5, 50)) {
        ComplexMatrix v = literal_isometry(ClonerParameter::make(xi));
        iso = std::max(iso, max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(2)));
    }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    double shrink = 0;
    for (double xi : {1.0 / 6, 0.25, 0.4}) {
        auto p = ClonerParameter::make(xi);
        for (int trial = 0; trial < 100; trial++) {
            std::array<Complex, 2> psi{Complex(n(rng), n(rng)), Complex(n(rng), n(rng))};
            double norm = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
            psi[0] /= norm;
            psi[1] /= norm;
            DensityOperator in(ComplexMatrix::projector(psi));
            ComplexMatrix expected = p.eta() * in.matrix() + xi * ComplexMatrix::identity(2);
            shrink = std::max(shrink, max_abs_diff(single_clone(in, p, MachineKind::AbstractBH).matrix(), expected));
        }
    }
    bool gram_ok = true;
    for (double xi : {0.147, 0.16}) {
        try {
            abstract_machine_vectors(ClonerParameter::make(xi));
            gram_ok = false;
        } catch (const GramNotPSD &) {
        }
    }
    for (double xi : {1.0 / 6, 0.2}) {
        try {
            abstract_machine_vectors(ClonerParameter::make(xi));
        } catch (const GramNotPSD &) {
            gram_ok = false;
        }
    }
    double spread_opt = universality_report(ClonerParameter::make(1.0 / 6), MachineKind::Literal2D, 200).spread;
    double spread_low = universality_report(ClonerParameter::make(kXiMin), MachineKind::Literal2D, 200).spread;
    bool pass = iso <= 1e-14 && shrink <= 1e-12 && gram_ok && spread_opt <= 1e-12 &&
                std::abs(spread_low - 0.0318) <= 1e-3;
    return {pass, "isometry defect " + g(iso) + ", shrinking-map gap " + g(shrink) + ", Gram PSD pattern " +
                      (gram_ok ? "as expected" : "unexpected") + ", spread(1/6) " + g(spread_opt) +
                      ", spread(xi_min) " + g(spread_low) + " [DISCREPANCY: literal machine not universal at xi_min]"};
}

struct Process {
    int code;
    std::string out;
};

Process run_cli(const std::string &args) {
    std::string cmd = std::string(QBROADCAST_CLI_PATH) + " " + args + " 2>/dev/null";
    Process p{-1, ""};
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return p;
    }
    std::array<char, 4096> buf;
    size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        p.out.append(buf.data(), got);
    }
    int status = pclose(pipe);
    p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return p;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (size_t k = 0; k < line.size(); k++) {
        char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                fields.back() += '"';
                k++;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

bool same_value(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

Outcome criterion_11() {
    auto dir = std::filesystem::temp_directory_path() / ("qbroadcast_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string json1 = (dir / "claims1.json").string(), json2 = (dir / "claims2.json").string();
    std::string csv1 = (dir / "claims1.csv").string(), csv2 = (dir / "claims2.csv").string();
    auto a = run_cli("verify --format json --out " + json1);
    auto b = run_cli("verify --format json --out " + json2);
    auto c = run_cli("verify --format csv --out " + csv1);
    auto d = run_cli("verify --format csv --out " + csv2);
    std::string sweep_args = "sweep --xi-grid 0.1464466094067263:0.5:5 --alpha-grid 0:1:7 "
                             "--quantity pptNonlocal,pptLocal,bellM,fidelity,wernerX --out -";
    auto s_csv = run_cli(sweep_args + " --format csv");
    auto s_json = run_cli(sweep_args + " --format json");
    auto s_csv2 = run_cli(sweep_args + " --format csv");

    std::vector<std::string> problems;
    for (const auto *p : {&a, &b, &c, &d, &s_csv, &s_json, &s_csv2}) {
        if (p->code != 0) {
            problems.push_back("exit code " + std::to_string(p->code));
        }
    }
    std::string j1 = slurp(json1), j2 = slurp(json2), c1 = slurp(csv1), c2 = slurp(csv2);
    if (j1.empty() || j1 != j2 || c1 != c2 || s_csv.out != s_csv2.out) {
        problems.push_back("outputs differ between runs");
    }

    size_t fails = 0;
    try {
        auto claims = claims_from_json(j1);
        for (const auto &cl : claims) {
            fails += cl.verdict == Verdict::Fail ? 1 : 0;
        }
        if (to_json(claims) != j1) {
            problems.push_back("claims JSON does not re-serialize identically");
        }
        std::istringstream lines(c1);
        std::string line;
        std::getline(lines, line);
        size_t k = 0;
        while (std::getline(lines, line)) {
            auto f = split_csv_line(line);
            if (k >= claims.size() || f.size() < 7 || f[0] != claims[k].claim_id ||
                !same_value(std::strtod(f[2].c_str(), nullptr), claims[k].expected.lo) ||
                !same_value(std::strtod(f[3].c_str(), nullptr), claims[k].expected.hi) ||
                !same_value(std::strtod(f[4].c_str(), nullptr), claims[k].computed.lo) ||
                !same_value(std::strtod(f[5].c_str(), nullptr), claims[k].computed.hi) ||
                !same_value(std::strtod(f[6].c_str(), nullptr), claims[k].tolerance)) {
                problems.push_back("claims CSV/JSON mismatch at row " + std::to_string(k));
                break;
            }
            k++;
        }
        if (k != claims.size()) {
            problems.push_back("claims CSV row count");
        }
        auto rows_csv = sweep_rows_from_csv(s_csv.out);
        auto rows_json = sweep_rows_from_json(s_json.out);
        SweepConfig cfg;
        cfg.xi_grid = parse_grid("0.1464466094067263:0.5:5");
        cfg.alpha_sq_grid = parse_grid("0:1:7");
        cfg.quantities = {Quantity::PptNonlocal, Quantity::PptLocal, Quantity::BellM, Quantity::Fidelity,
                          Quantity::WernerX};
        auto rows = run_sweep(cfg);
        bool match = rows_csv.size() == rows.size() && rows_json.size() == rows.size();
        for (size_t r = 0; match && r < rows.size(); r++) {
            match = same_value(rows_csv[r].value, rows[r].value) && same_value(rows_json[r].value, rows[r].value) &&
                    rows_csv[r].xi == rows[r].xi && rows_json[r].alpha_sq == rows[r].alpha_sq;
        }
        if (!match) {
            problems.push_back("sweep CSV/JSON values do not round-trip");
        }
    } catch (const std::exception &e) {
        problems.push_back(std::string("parse error: ") + e.what());
    }
    if (fails > 0) {
        problems.push_back(std::to_string(fails) + " FAIL verdicts");
    }
    std::filesystem::remove_all(dir);

    std::string detail = "verify exit " + std::to_string(a.code) + ", " + std::to_string(fails) +
                         " FAIL verdicts, byte-identical reruns, 17-digit CSV/JSON round trip";
    if (!problems.empty()) {
        detail = problems.front();
        for (size_t k = 1; k < problems.size(); k++) {
            detail += "; " + problems[k];
        }
    }
    return {problems.empty(), detail};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cross-pair entanglement window at xi = 1/6", criterion_1},
        {"cross-pair entanglement window at xi_min", criterion_2},
        {"entangling bound on xi", criterion_3},
        {"state-vector oracle equals closed forms", criterion_4},
        {"cross-pair entanglement implies copy-pair separability", criterion_5},
        {"no Bell violation without filtering", criterion_6},
        {"no Bell violation with local filtering", criterion_7},
        {"Werner decomposition", criterion_8},
        {"teleportation fidelity", criterion_9},
        {"cloner audits", criterion_10},
        {"command-line reports", criterion_11},
    };
    int failed = 0;
    auto start = std::chrono::steady_clock::now();
    for (size_t k = 0; k < criteria.size(); k++) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << (k + 1) << "] " << criteria[k].first << ": " << o.detail
                  << "\n";
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed in " << g(seconds)
              << " s\n";
    return failed == 0 ? 0 : 1;
}
