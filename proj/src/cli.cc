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

#include "qbroadcast/cli.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbroadcast/analysis.h"
#include "qbroadcast/broadcast.h"
#include "qbroadcast/cloner.h"
#include "qbroadcast/errors.h"
#include "qbroadcast/parallel.h"

namespace qbroadcast {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string g17(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json number_or_null(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

double number_from_json(const json &j) {
    return j.is_null() ? kNaN : j.get<double>();
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text, const std::string &field) {
    std::string s = trim(text);
    if (s.empty()) {
        throw ConfigError(field + ": empty number");
    }
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw ConfigError(field + ": not a number: '" + s + "'");
    }
    if (used != s.size()) {
        throw ConfigError(field + ": trailing characters in '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

}  // namespace

std::string_view quantity_name(Quantity q) {
    switch (q) {
        case Quantity::PptNonlocal:
            return "pptNonlocal";
        case Quantity::PptLocal:
            return "pptLocal";
        case Quantity::BellM:
            return "bellM";
        case Quantity::Fidelity:
            return "fidelity";
        case Quantity::WernerX:
            return "wernerX";
    }
    return "?";
}

Quantity parse_quantity(std::string_view name) {
    for (Quantity q : {Quantity::PptNonlocal, Quantity::PptLocal, Quantity::BellM, Quantity::Fidelity,
                       Quantity::WernerX}) {
        if (quantity_name(q) == name) {
            return q;
        }
    }
    throw ConfigError("quantity: unknown quantity '" + std::string(name) +
                      "' (expected pptNonlocal, pptLocal, bellM, fidelity or wernerX)");
}

Format parse_format(std::string_view name) {
    if (name == "csv") {
        return Format::Csv;
    }
    if (name == "json") {
        return Format::Json;
    }
    throw ConfigError("format: expected csv or json, got '" + std::string(name) + "'");
}

double SweepConfig::tolerance(const std::string &name) const {
    auto it = tolerances.find(name);
    if (it != tolerances.end()) {
        return it->second;
    }
    if (name == "ppt") {
        return kPptTol;
    }
    if (name == "werner") {
        return 1e-12;
    }
    throw ConfigError("tol: unknown tolerance '" + name + "' (expected ppt or werner)");
}

void SweepConfig::validate() const {
    if (xi_grid.empty()) {
        throw ConfigError("xi-grid: no machine parameter values");
    }
    if (alpha_sq_grid.empty()) {
        throw ConfigError("alpha-grid: no alpha^2 values");
    }
    if (quantities.empty()) {
        throw ConfigError("quantity: no quantities requested");
    }
    for (double xi : xi_grid) {
        if (analysis_only) {
            if (!(xi >= 0 && xi <= kXiMax)) {
                throw ConfigError("xi-grid: value " + g17(xi) + " outside [0, 0.5] even for analysis-only sweeps");
            }
        } else if (!(xi >= kXiMin - kXiSlack && xi <= kXiMax + kXiSlack)) {
            throw ConfigError("xi-grid: value " + g17(xi) + " outside [" + g17(kXiMin) +
                              ", 0.5]; pass --analysis-only to probe it");
        }
    }
    for (double a : alpha_sq_grid) {
        if (!(a >= 0 && a <= 1)) {
            throw ConfigError("alpha-grid: value " + g17(a) + " outside [0, 1]");
        }
    }
    for (const auto &[name, value] : tolerances) {
        if (name != "ppt" && name != "werner") {
            throw ConfigError("tol: unknown tolerance '" + name + "' (expected ppt or werner)");
        }
        if (!(value >= 0) || !std::isfinite(value)) {
            throw ConfigError("tol." + name + ": must be a finite non-negative number");
        }
    }
}

std::vector<double> parse_grid(std::string_view spec) {
    auto parts = split(spec, ':');
    if (parts.size() != 3) {
        throw ConfigError("grid '" + std::string(spec) + "': expected lo:hi:n");
    }
    double lo = parse_double(parts[0], "grid lo");
    double hi = parse_double(parts[1], "grid hi");
    double n_real = parse_double(parts[2], "grid n");
    if (!(n_real >= 1) || n_real != std::floor(n_real) || n_real > 1e7) {
        throw ConfigError("grid n: expected a positive integer, got '" + parts[2] + "'");
    }
    auto n = static_cast<size_t>(n_real);
    if (n == 1) {
        return {lo};
    }
    std::vector<double> grid(n);
    for (size_t k = 0; k < n; k++) {
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    grid.back() = hi;
    return grid;
}

SweepConfig parse_sweep_config(std::istream &in) {
    SweepConfig cfg;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        auto eq = body.find('=');
        std::string where = "line " + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value, got '" + body + "'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        try {
            if (key == "xi") {
                for (const auto &v : split(value, ',')) {
                    cfg.xi_grid.push_back(parse_double(v, key));
                }
            } else if (key == "xi-grid") {
                auto g = parse_grid(value);
                cfg.xi_grid.insert(cfg.xi_grid.end(), g.begin(), g.end());
            } else if (key == "alpha-sq") {
                for (const auto &v : split(value, ',')) {
                    cfg.alpha_sq_grid.push_back(parse_double(v, key));
                }
            } else if (key == "alpha-grid") {
                auto g = parse_grid(value);
                cfg.alpha_sq_grid.insert(cfg.alpha_sq_grid.end(), g.begin(), g.end());
            } else if (key == "quantity") {
                for (const auto &v : split(value, ',')) {
                    cfg.quantities.push_back(parse_quantity(trim(v)));
                }
            } else if (key == "format") {
                cfg.output_format = parse_format(value);
            } else if (key == "analysis-only") {
                if (value != "true" && value != "false") {
                    throw ConfigError("expected true or false");
                }
                cfg.analysis_only = value == "true";
            } else if (key.rfind("tol.", 0) == 0) {
                cfg.tolerances[key.substr(4)] = parse_double(value, key);
            } else {
                throw ConfigError("unknown key");
            }
        } catch (const ConfigError &e) {
            throw ConfigError(where + ", field '" + key + "': " + e.what());
        }
    }
    return cfg;
}

namespace {

struct PointValues {
    std::vector<double> values;
    std::exception_ptr error;
};

PointValues evaluate_point(const SweepConfig &cfg, double xi, double alpha_sq) {
    PointValues out;
    try {
        ClonerParameter p = cfg.analysis_only ? ClonerParameter::analysis_only(xi) : ClonerParameter::make(xi);
        EntangledInput in = EntangledInput::from_alpha_sq(alpha_sq);
        DensityOperator cross = nonlocal_state(in, p);
        for (Quantity q : cfg.quantities) {
            double v = kNaN;
            switch (q) {
                case Quantity::PptNonlocal:
                    v = ppt_test(cross, cfg.tolerance("ppt")).min_pt_eigenvalue;
                    break;
                case Quantity::PptLocal:
                    v = ppt_test(local_state(in, p), cfg.tolerance("ppt")).min_pt_eigenvalue;
                    break;
                case Quantity::BellM:
                    v = bell_quantity_m(cross);
                    break;
                case Quantity::Fidelity:
                    v = teleportation_fidelity(cross);
                    break;
                case Quantity::WernerX:
                    if (auto w = werner_decompose(cross, cfg.tolerance("werner"))) {
                        v = w->x;
                    }
                    break;
            }
            out.values.push_back(v);
        }
    } catch (...) {
        out.error = std::current_exception();
    }
    return out;
}

std::vector<SweepRow> assemble(const SweepConfig &cfg, const std::vector<PointValues> &points) {
    std::vector<SweepRow> rows;
    rows.reserve(points.size() * cfg.quantities.size());
    size_t k = 0;
    for (double xi : cfg.xi_grid) {
        for (double a : cfg.alpha_sq_grid) {
            const auto &pv = points[k++];
            if (pv.error) {
                std::rethrow_exception(pv.error);
            }
            for (size_t q = 0; q < cfg.quantities.size(); q++) {
                rows.push_back({xi, a, cfg.quantities[q], pv.values[q]});
            }
        }
    }
    return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    const size_t na = cfg.alpha_sq_grid.size();
    const long long total = static_cast<long long>(cfg.xi_grid.size() * na);
    std::vector<PointValues> points(static_cast<size_t>(total));
    QBROADCAST_OMP_PRAGMA("omp parallel for schedule(dynamic, 4)")
    for (long long k = 0; k < total; k++) {
        size_t i = static_cast<size_t>(k) / na;
        size_t j = static_cast<size_t>(k) % na;
        points[k] = evaluate_point(cfg, cfg.xi_grid[i], cfg.alpha_sq_grid[j]);
    }
    return assemble(cfg, points);
}

namespace serial {

std::vector<SweepRow> run_sweep(const SweepConfig &cfg) {
    cfg.validate();
    std::vector<PointValues> points;
    for (double xi : cfg.xi_grid) {
        for (double a : cfg.alpha_sq_grid) {
            points.push_back(evaluate_point(cfg, xi, a));
        }
    }
    return assemble(cfg, points);
}

}  // namespace serial

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "PASS";
        case Verdict::Fail:
            return "FAIL";
        case Verdict::Discrepancy:
            return "DISCREPANCY";
    }
    return "?";
}

namespace {

std::string_view comparison_name(Comparison c) {
    return c == Comparison::Equal ? "equal" : "at_most";
}

Verdict parse_verdict(std::string_view s) {
    for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Discrepancy}) {
        if (verdict_name(v) == s) {
            return v;
        }
    }
    throw std::runtime_error("unknown verdict '" + std::string(s) + "'");
}

}  // namespace

Verdict judge(const ClaimValue &expected, const ClaimValue &computed, double tolerance, Comparison comparison) {
    if (comparison == Comparison::AtMost) {
        return computed.hi <= expected.hi + tolerance ? Verdict::Pass : Verdict::Fail;
    }
    bool ok = std::abs(expected.lo - computed.lo) <= tolerance && std::abs(expected.hi - computed.hi) <= tolerance;
    return ok ? Verdict::Pass : Verdict::Fail;
}

namespace {

ClaimResult claim(std::string id, std::string anchor, ClaimValue expected, ClaimValue computed, double tol,
                  Comparison cmp = Comparison::Equal, std::string note = "") {
    ClaimResult r{std::move(id), std::move(anchor), expected, computed, tol, cmp, Verdict::Fail, std::move(note)};
    r.verdict = judge(expected, computed, tol, cmp);
    return r;
}

ClaimValue as_claim(const Interval &i) {
    return ClaimValue::interval(i.lo, i.hi);
}

ClaimResult failed_claim(std::string id, std::string anchor, ClaimValue expected, double tol, const std::exception &e) {
    return {std::move(id), std::move(anchor), expected, ClaimValue::scalar(kNaN), tol, Comparison::Equal,
            Verdict::Fail, std::string("error: ") + e.what()};
}

void range_claims(std::vector<ClaimResult> &out, const std::string &prefix, const std::string &anchor, double xi,
                  double expected_radius) {
    ClonerParameter p = ClonerParameter::make(xi);
    double lo = 0.5 - expected_radius;
    double hi = 0.5 + expected_radius;
    try {
        out.push_back(claim(prefix + ".lower", anchor, ClaimValue::scalar(lo),
                            ClaimValue::scalar(boundary_bisect(p, nonlocal_inseparable, Side::Lower, 1e-12)), 1e-8,
                            Comparison::Equal, "numeric PPT bisection on the cross-pair state"));
        out.push_back(claim(prefix + ".upper", anchor, ClaimValue::scalar(hi),
                            ClaimValue::scalar(boundary_bisect(p, nonlocal_inseparable, Side::Upper, 1e-12)), 1e-8,
                            Comparison::Equal, "numeric PPT bisection on the cross-pair state"));
        out.push_back(claim(prefix + ".closed_form", anchor, ClaimValue::interval(lo, hi),
                            as_claim(nonlocal_inseparability_range(p)), 1e-12));
    } catch (const std::exception &e) {
        out.push_back(failed_claim(prefix, anchor, ClaimValue::interval(lo, hi), 1e-8, e));
    }
}

}  // namespace

std::vector<ClaimResult> verify_claims() {
    std::vector<ClaimResult> out;
    const double sqrt2 = std::sqrt(2.0);
    const double inv_sqrt2 = 1 / sqrt2;

    // Machine parameter range.
    out.push_back(claim("machine.eta_at_xi_min", "Eqs. 5, 6, 9", ClaimValue::scalar(inv_sqrt2),
                        ClaimValue::scalar(ClonerParameter::make(kXiMin).eta()), 1e-15));

    // Inseparability windows of the cross pairs.
    range_claims(out, "eq2", "Eq. 2", kXiOptimal, std::sqrt(39.0) / 16);
    range_claims(out, "eq16", "Eq. 16", kXiMin, std::sqrt(3.0) / 4);

    try {
        // The largest xi that still entangles some cross pair, found by PPT at alpha^2 = 1/2.
        auto entangled_at_half = [](double xi) {
            return nonlocal_inseparable(EntangledInput::from_alpha_sq(0.5), ClonerParameter::make(xi));
        };
        double located = bisect_threshold(entangled_at_half, kXiOptimal, 0.25, 1e-13);
        out.push_back(claim("eq14.bound", "Eq. 14", ClaimValue::scalar(kXiEntanglingMax), ClaimValue::scalar(located),
                            1e-8, Comparison::Equal, "numeric PPT at alpha^2 = 1/2, bisection in xi"));
        Interval at_bound = nonlocal_inseparability_range(ClonerParameter::make(kXiEntanglingMax));
        out.push_back(claim("eq14.degenerate_width", "Eq. 14", ClaimValue::scalar(0),
                            ClaimValue::scalar(at_bound.width()), 1e-6));
        double undefined = 0;
        try {
            nonlocal_inseparability_range(ClonerParameter::make(kXiEntanglingMax + 1e-6));
        } catch (const RangeUndefined &) {
            undefined = 1;
        }
        out.push_back(claim("eq14.undefined_above", "Eq. 14", ClaimValue::scalar(1), ClaimValue::scalar(undefined), 0,
                            Comparison::Equal, "1 = range reported undefined just above the bound"));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("eq14", "Eq. 14", ClaimValue::scalar(kXiEntanglingMax), 1e-8, e));
    }

    try {
        ClonerParameter p = ClonerParameter::make(kXiOptimal);
        double s = std::sqrt(3.0) / 4;
        out.push_back(claim("eq15.optimal.lower", "Eq. 15", ClaimValue::scalar(0.5 - s),
                            ClaimValue::scalar(boundary_bisect(p, local_separable, Side::Lower, 1e-12)), 1e-8));
        out.push_back(claim("eq15.optimal.upper", "Eq. 15", ClaimValue::scalar(0.5 + s),
                            ClaimValue::scalar(boundary_bisect(p, local_separable, Side::Upper, 1e-12)), 1e-8));
        // Every entangled cross-pair window sits inside the separable copy-pair window.
        double worst_excess = 0;
        for (double xi : parse_grid(g17(kXiMin) + ":" + g17(kXiEntanglingMax) + ":20")) {
            ClonerParameter q = ClonerParameter::make(xi);
            Interval inner = nonlocal_inseparability_range(q);
            Interval outer = local_separability_range(q);
            worst_excess = std::max({worst_excess, outer.lo - inner.lo, inner.hi - outer.hi});
        }
        out.push_back(claim("eq13_15.containment", "Eqs. 13, 15", ClaimValue::scalar(0),
                            ClaimValue::scalar(worst_excess), 1e-15, Comparison::AtMost,
                            "max amount by which the entangled cross-pair window leaves the separable copy-pair window"));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("eq15", "Eq. 15", ClaimValue::scalar(0), 1e-8, e));
    }

    // Bell inequality.
    try {
        auto violates_at_half = [](double xi) {
            return bell_quantity_m(nonlocal_state(EntangledInput::from_alpha_sq(0.5), ClonerParameter::analysis_only(xi))) > 1;
        };
        double threshold = bisect_threshold(violates_at_half, 0.0, kXiMin, 1e-13);
        out.push_back(claim("bell.threshold", "Eq. 17", ClaimValue::scalar(kXiBellMax), ClaimValue::scalar(threshold),
                            1e-9, Comparison::Equal, "largest xi with M > 1 at alpha^2 = 1/2 (analysis-only)"));

        double with_range = 0;
        double max_m = 0;
        auto xi_grid = parse_grid(g17(kXiMin) + ":0.5:20");
        auto alpha_grid = parse_grid("0:1:201");
        for (double xi : xi_grid) {
            ClonerParameter p = ClonerParameter::make(xi);
            if (bell_violation_range(p)) {
                with_range += 1;
            }
            for (double a : alpha_grid) {
                max_m = std::max(max_m, bell_quantity_m(nonlocal_state(EntangledInput::from_alpha_sq(a), p)));
            }
        }
        out.push_back(claim("bell.range_empty_in_machine_range", "Eq. 17", ClaimValue::scalar(0),
                            ClaimValue::scalar(with_range), 0, Comparison::Equal,
                            "number of machine parameters (of 20) with a violation window"));
        out.push_back(claim("bell.unfiltered.max_m", "Sec. 3", ClaimValue::scalar(0.5), ClaimValue::scalar(max_m),
                            1e-12, Comparison::Equal, "grid maximum of M; analytic 2(1-2xi)^4 at xi_min"));
        out.push_back(claim("bell.unfiltered.no_violation", "Sec. 3", ClaimValue::scalar(1), ClaimValue::scalar(max_m),
                            0, Comparison::AtMost));

        auto maxent_filtered = filter_search_max_m(EntangledInput::from_alpha(inv_sqrt2), ClonerParameter::make(kXiMin), 101);
        out.push_back(claim("bell.filtered.maxent_xi_min", "Eq. 18", ClaimValue::scalar(1),
                            ClaimValue::scalar(maxent_filtered.max_m), 0, Comparison::AtMost,
                            "max M over a 101x101 log grid of filter ratios"));
        auto skew_filtered = filter_search_max_m(EntangledInput::from_alpha_sq(0.2), ClonerParameter::make(kXiOptimal), 101);
        out.push_back(claim("bell.filtered.alpha_sq_0.2_optimal", "Eq. 18", ClaimValue::scalar(1),
                            ClaimValue::scalar(skew_filtered.max_m), 0, Comparison::AtMost,
                            "max M over a 101x101 log grid of filter ratios"));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("bell", "Sec. 3", ClaimValue::scalar(kXiBellMax), 1e-9, e));
    }

    // Werner form.
    try {
        auto maxent = EntangledInput::from_alpha(inv_sqrt2);
        auto x_at = [&](double xi) {
            auto w = werner_decompose(nonlocal_state(maxent, ClonerParameter::make(xi)), 1e-12);
            return w ? w->x : kNaN;
        };
        out.push_back(claim("werner.x.optimal", "Eq. 19", ClaimValue::scalar(4.0 / 9), ClaimValue::scalar(x_at(kXiOptimal)),
                            1e-12, Comparison::Equal, "random fraction 5/9"));
        out.push_back(claim("werner.x.xi_min", "Eq. 19", ClaimValue::scalar(0.5), ClaimValue::scalar(x_at(kXiMin)), 1e-12,
                            Comparison::Equal, "minimum random fraction 1/2"));
        double found = 0;
        for (double a : {0.3, 0.45, 0.55}) {
            for (double xi : {kXiMin, kXiOptimal, 0.3}) {
                if (werner_decompose(nonlocal_state(EntangledInput::from_alpha_sq(a), ClonerParameter::make(xi)), 1e-12)) {
                    found += 1;
                }
            }
        }
        out.push_back(claim("werner.requires_maxent", "Eq. 19", ClaimValue::scalar(0), ClaimValue::scalar(found), 0,
                            Comparison::Equal, "Werner forms found for alpha^2 in {0.3, 0.45, 0.55}"));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("werner", "Eq. 19", ClaimValue::scalar(4.0 / 9), 1e-12, e));
    }

    // Teleportation fidelity.
    try {
        auto maxent = EntangledInput::from_alpha(inv_sqrt2);
        out.push_back(claim("fidelity.optimal.maxent", "Eq. 21", ClaimValue::scalar(13.0 / 18),
                            ClaimValue::scalar(teleportation_fidelity(nonlocal_state(maxent, ClonerParameter::make(kXiOptimal)))),
                            1e-12));
        out.push_back(claim("fidelity.xi_min.maxent", "Eq. 22", ClaimValue::scalar(0.75),
                            ClaimValue::scalar(teleportation_fidelity(nonlocal_state(maxent, ClonerParameter::make(kXiMin)))),
                            1e-12));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("fidelity", "Eqs. 20-22", ClaimValue::scalar(13.0 / 18), 1e-12, e));
    }

    // Full-state route versus the closed-form output states.
    try {
        double worst = 0;
        for (double xi : {kXiOptimal, 0.20, 0.30, 0.45}) {
            ClonerParameter p = ClonerParameter::make(xi);
            for (int k = 1; k <= 9; k++) {
                auto in = EntangledInput::from_alpha_sq(k / 10.0);
                auto o = oracle_broadcast(in, p);
                worst = std::max({worst, max_abs_diff(o.local.matrix(), local_state(in, p).matrix()),
                                  max_abs_diff(o.nonlocal.matrix(), nonlocal_state(in, p).matrix()), o.symmetry_defect});
            }
        }
        out.push_back(claim("oracle.equivalence", "Eqs. 11, 12", ClaimValue::scalar(0), ClaimValue::scalar(worst), 1e-12,
                            Comparison::Equal, "max entrywise gap over 36 (xi, alpha^2) cases, xi >= 1/6"));
    } catch (const std::exception &e) {
        out.push_back(failed_claim("oracle.equivalence", "Eqs. 11, 12", ClaimValue::scalar(0), 1e-12, e));
    }

    // Universality of the machine family.
    try {
        auto optimal = universality_report(ClonerParameter::make(kXiOptimal), MachineKind::Literal2D, 200);
        out.push_back(claim("universality.optimal", "Sec. 2", ClaimValue::scalar(0), ClaimValue::scalar(optimal.spread),
                            1e-12, Comparison::Equal, "fidelity spread over the Bloch sphere, Literal2D"));

        auto low = universality_report(ClonerParameter::make(kXiMin), MachineKind::Literal2D, 200);
        auto r = claim("universality.xi_below_one_sixth", "Sec. 2", ClaimValue::scalar(0), ClaimValue::scalar(low.spread),
                       1e-12);
        r.verdict = Verdict::Discrepancy;
        r.note = "Literal2D at xi_min copies inputs unequally (fidelity " + g17(low.min_fidelity) + " to " +
                 g17(low.max_fidelity) + ")";
        out.push_back(r);

        double exists = 1;
        std::string note = "AbstractBH machine vectors exist";
        try {
            abstract_machine_vectors(ClonerParameter::make(kXiMin));
        } catch (const GramNotPSD &e) {
            exists = 0;
            note = "AbstractBH Gram matrix not PSD at xi_min (min eigenvalue " + g17(e.min_eigenvalue) +
                   "); universal machines of this family need xi >= 1/6";
        }
        auto m = claim("universality.machine_exists_at_xi_min", "Eqs. 3-5, 9", ClaimValue::scalar(1),
                       ClaimValue::scalar(exists), 0, Comparison::Equal, note);
        if (m.verdict == Verdict::Fail) {
            m.verdict = Verdict::Discrepancy;
        }
        out.push_back(m);
    } catch (const std::exception &e) {
        out.push_back(failed_claim("universality", "Sec. 2", ClaimValue::scalar(0), 1e-12, e));
    }
    return out;
}

std::vector<BoundaryRow> boundary_table(const std::vector<double> &xi_grid, bool analysis_only, double tol) {
    std::vector<BoundaryRow> rows;
    for (double xi : xi_grid) {
        ClonerParameter p = analysis_only ? ClonerParameter::analysis_only(xi) : ClonerParameter::make(xi);
        auto numeric = [&](const StatePredicate &pred, BoundaryRow &row) {
            try {
                row.numeric_lo = boundary_bisect(p, pred, Side::Lower, tol);
                row.numeric_hi = boundary_bisect(p, pred, Side::Upper, tol);
            } catch (const NoCrossing &) {
                row.numeric_lo = row.numeric_hi = kNaN;
            }
        };

        BoundaryRow cross{xi, "nonlocalInseparable", kNaN, kNaN, kNaN, kNaN};
        try {
            auto r = nonlocal_inseparability_range(p);
            cross.closed_lo = r.lo;
            cross.closed_hi = r.hi;
        } catch (const RangeUndefined &) {
        }
        numeric(nonlocal_inseparable, cross);
        rows.push_back(cross);

        BoundaryRow copy{xi, "localSeparable", kNaN, kNaN, kNaN, kNaN};
        try {
            auto r = local_separability_range(p);
            copy.closed_lo = r.lo;
            copy.closed_hi = r.hi;
        } catch (const RangeUndefined &) {
        }
        numeric(local_separable, copy);
        rows.push_back(copy);

        BoundaryRow bell{xi, "bellViolation", kNaN, kNaN, kNaN, kNaN};
        if (auto r = bell_violation_range(p)) {
            bell.closed_lo = r->lo;
            bell.closed_hi = r->hi;
        }
        numeric(
            [](const EntangledInput &in, const ClonerParameter &q) { return bell_quantity_m(nonlocal_state(in, q)) > 1; },
            bell);
        rows.push_back(bell);
    }
    return rows;
}

std::vector<CloneAuditRow> clone_audit(const std::vector<double> &xi_grid, size_t samples) {
    std::vector<CloneAuditRow> rows;
    for (double xi : xi_grid) {
        ClonerParameter p = ClonerParameter::make(xi);
        for (MachineKind kind : {MachineKind::Literal2D, MachineKind::AbstractBH}) {
            CloneAuditRow row{xi, std::string(machine_kind_name(kind)), true, kNaN, kNaN, kNaN};
            try {
                auto rep = universality_report(p, kind, samples);
                row.min_fidelity = rep.min_fidelity;
                row.max_fidelity = rep.max_fidelity;
                row.spread = rep.spread;
            } catch (const GramNotPSD &) {
                row.machine_exists = false;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string to_csv(const std::vector<SweepRow> &rows) {
    std::string s = "xi,alphaSq,quantity,value\n";
    for (const auto &r : rows) {
        s += g17(r.xi) + "," + g17(r.alpha_sq) + "," + std::string(quantity_name(r.quantity)) + "," + g17(r.value) + "\n";
    }
    return s;
}

std::string to_json(const std::vector<SweepRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back({{"xi", number_or_null(r.xi)},
                       {"alphaSq", number_or_null(r.alpha_sq)},
                       {"quantity", quantity_name(r.quantity)},
                       {"value", number_or_null(r.value)}});
    }
    return arr.dump(2) + "\n";
}

namespace {

json claim_value_json(const ClaimValue &v) {
    if (v.is_interval) {
        return json::array({number_or_null(v.lo), number_or_null(v.hi)});
    }
    return number_or_null(v.lo);
}

ClaimValue claim_value_from_json(const json &j) {
    if (j.is_array()) {
        return ClaimValue::interval(number_from_json(j.at(0)), number_from_json(j.at(1)));
    }
    return ClaimValue::scalar(number_from_json(j));
}

}  // namespace

std::string to_csv(const std::vector<ClaimResult> &claims) {
    std::string s = "claimId,paperAnchor,expectedLo,expectedHi,computedLo,computedHi,tolerance,comparison,verdict,note\n";
    for (const auto &c : claims) {
        s += csv_field(c.claim_id) + "," + csv_field(c.paper_anchor) + "," + g17(c.expected.lo) + "," +
             g17(c.expected.hi) + "," + g17(c.computed.lo) + "," + g17(c.computed.hi) + "," + g17(c.tolerance) + "," +
             std::string(comparison_name(c.comparison)) + "," + std::string(verdict_name(c.verdict)) + "," +
             csv_field(c.note) + "\n";
    }
    return s;
}

std::string to_json(const std::vector<ClaimResult> &claims) {
    json arr = json::array();
    for (const auto &c : claims) {
        arr.push_back({{"claimId", c.claim_id},
                       {"paperAnchor", c.paper_anchor},
                       {"expected", claim_value_json(c.expected)},
                       {"computed", claim_value_json(c.computed)},
                       {"tolerance", c.tolerance},
                       {"comparison", comparison_name(c.comparison)},
                       {"verdict", verdict_name(c.verdict)},
                       {"note", c.note}});
    }
    return arr.dump(2) + "\n";
}

std::string to_csv(const std::vector<BoundaryRow> &rows) {
    std::string s = "xi,criterion,closedLo,closedHi,numericLo,numericHi\n";
    for (const auto &r : rows) {
        s += g17(r.xi) + "," + r.criterion + "," + g17(r.closed_lo) + "," + g17(r.closed_hi) + "," + g17(r.numeric_lo) +
             "," + g17(r.numeric_hi) + "\n";
    }
    return s;
}

std::string to_json(const std::vector<BoundaryRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back({{"xi", number_or_null(r.xi)},
                       {"criterion", r.criterion},
                       {"closedLo", number_or_null(r.closed_lo)},
                       {"closedHi", number_or_null(r.closed_hi)},
                       {"numericLo", number_or_null(r.numeric_lo)},
                       {"numericHi", number_or_null(r.numeric_hi)}});
    }
    return arr.dump(2) + "\n";
}

std::string to_csv(const std::vector<CloneAuditRow> &rows) {
    std::string s = "xi,kind,machineExists,minFidelity,maxFidelity,spread\n";
    for (const auto &r : rows) {
        s += g17(r.xi) + "," + r.kind + "," + (r.machine_exists ? "true" : "false") + "," + g17(r.min_fidelity) + "," +
             g17(r.max_fidelity) + "," + g17(r.spread) + "\n";
    }
    return s;
}

std::string to_json(const std::vector<CloneAuditRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back({{"xi", number_or_null(r.xi)},
                       {"kind", r.kind},
                       {"machineExists", r.machine_exists},
                       {"minFidelity", number_or_null(r.min_fidelity)},
                       {"maxFidelity", number_or_null(r.max_fidelity)},
                       {"spread", number_or_null(r.spread)}});
    }
    return arr.dump(2) + "\n";
}

std::vector<SweepRow> sweep_rows_from_json(std::string_view text) {
    std::vector<SweepRow> rows;
    for (const auto &j : json::parse(text)) {
        rows.push_back({number_from_json(j.at("xi")), number_from_json(j.at("alphaSq")),
                        parse_quantity(j.at("quantity").get<std::string>()), number_from_json(j.at("value"))});
    }
    return rows;
}

std::vector<SweepRow> sweep_rows_from_csv(std::string_view text) {
    std::vector<SweepRow> rows;
    auto lines = split(text, '\n');
    for (size_t k = 1; k < lines.size(); k++) {
        if (lines[k].empty()) {
            continue;
        }
        auto f = split(lines[k], ',');
        if (f.size() != 4) {
            throw ConfigError("csv line " + std::to_string(k + 1) + ": expected 4 fields");
        }
        rows.push_back({parse_double(f[0], "xi"), parse_double(f[1], "alphaSq"), parse_quantity(f[2]),
                        parse_double(f[3], "value")});
    }
    return rows;
}

std::vector<ClaimResult> claims_from_json(std::string_view text) {
    std::vector<ClaimResult> claims;
    for (const auto &j : json::parse(text)) {
        ClaimResult c;
        c.claim_id = j.at("claimId").get<std::string>();
        c.paper_anchor = j.at("paperAnchor").get<std::string>();
        c.expected = claim_value_from_json(j.at("expected"));
        c.computed = claim_value_from_json(j.at("computed"));
        c.tolerance = j.at("tolerance").get<double>();
        c.comparison = j.at("comparison").get<std::string>() == "at_most" ? Comparison::AtMost : Comparison::Equal;
        c.verdict = parse_verdict(j.at("verdict").get<std::string>());
        c.note = j.value("note", "");
        claims.push_back(std::move(c));
    }
    return claims;
}

void emit_report(const std::string &text, const std::string &destination, std::ostream &stdout_stream) {
    if (destination == "-") {
        stdout_stream << text;
        stdout_stream.flush();
        return;
    }
    std::ofstream f(destination, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + destination + "' for writing");
    }
    f << text;
    f.flush();
    if (!f) {
        throw std::runtime_error("failed writing '" + destination + "'");
    }
}

namespace {

std::vector<double> xi_values(const std::vector<double> &xi, const std::string &grid, std::vector<double> fallback) {
    std::vector<double> out = xi;
    if (!grid.empty()) {
        auto g = parse_grid(grid);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out.empty() ? fallback : out;
}

template <typename Rows>
std::string serialize(const Rows &rows, Format format) {
    return format == Format::Json ? to_json(rows) : to_csv(rows);
}

void print_claim_table(const std::vector<ClaimResult> &claims, std::ostream &os) {
    auto show = [](const ClaimValue &v) {
        return v.is_interval ? "[" + g17(v.lo) + ", " + g17(v.hi) + "]" : g17(v.lo);
    };
    size_t counts[3] = {0, 0, 0};
    for (const auto &c : claims) {
        counts[static_cast<int>(c.verdict)]++;
        os << verdict_name(c.verdict) << "  " << c.claim_id << " (" << c.paper_anchor << ")  expected "
           << (c.comparison == Comparison::AtMost ? "<= " : "") << show(c.expected) << "  computed " << show(c.computed)
           << "  tol " << g17(c.tolerance) << "\n";
    }
    os << claims.size() << " claims: " << counts[0] << " PASS, " << counts[1] << " FAIL, " << counts[2]
       << " DISCREPANCY\n";
}

void print_discrepancies(const std::vector<ClaimResult> &claims, std::ostream &err) {
    bool any = false;
    for (const auto &c : claims) {
        if (c.verdict != Verdict::Discrepancy) {
            continue;
        }
        if (!any) {
            err << "WARNING: internal inconsistencies in the machine family (not failures):\n";
            any = true;
        }
        err << "  " << c.claim_id << ": " << c.note << "\n";
    }
    if (any) {
        err << "  The transformation as written is universal only at xi = 1/6, and the universal\n"
               "  reconstruction exists only for xi >= 1/6; the preferred xi_min lies outside it.\n";
    }
}

}  // namespace

int run_command_line(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement broadcasting with a one-parameter family of universal cloners", "qbroadcast"};
    app.require_subcommand(1);

    std::vector<double> xi;
    std::string xi_grid, alpha_grid, format = "csv", destination = "-", config_path;
    std::vector<double> alpha_sq;
    std::vector<std::string> quantities, tol_specs;
    bool analysis_only = false;
    double bisect_tol = 1e-12;
    size_t samples = 200;

    auto *sweep = app.add_subcommand("sweep", "Evaluate criteria on a (xi, alpha^2) grid");
    sweep->add_option("--xi", xi, "Machine parameter value(s)")->delimiter(',');
    sweep->add_option("--xi-grid", xi_grid, "Machine parameter grid lo:hi:n");
    sweep->add_option("--alpha-sq", alpha_sq, "alpha^2 value(s)")->delimiter(',');
    sweep->add_option("--alpha-grid", alpha_grid, "alpha^2 grid lo:hi:n");
    sweep->add_option("--quantity", quantities, "pptNonlocal, pptLocal, bellM, fidelity, wernerX")->delimiter(',');
    sweep->add_option("--format", format, "csv or json");
    sweep->add_option("--out", destination, "Output path, '-' for standard output");
    sweep->add_option("--tol", tol_specs, "Tolerance name=value (ppt, werner); a bare number sets ppt");
    sweep->add_flag("--analysis-only", analysis_only, "Allow xi outside the machine range");
    sweep->add_option("--config", config_path, "key = value sweep configuration file");

    auto *verify = app.add_subcommand("verify", "Re-derive every claim and report verdicts");
    std::string verify_out;
    verify->add_option("--format", format, "csv or json");
    verify->add_option("--out", verify_out, "Write the claim report here ('-' for standard output)");

    auto *boundary = app.add_subcommand("boundary", "Closed-form and bisected alpha^2 boundaries");
    boundary->add_option("--xi", xi, "Machine parameter value(s)")->delimiter(',');
    boundary->add_option("--xi-grid", xi_grid, "Machine parameter grid lo:hi:n");
    boundary->add_option("--tol", bisect_tol, "Bisection tolerance on alpha^2");
    boundary->add_flag("--analysis-only", analysis_only, "Allow xi outside the machine range");
    boundary->add_option("--format", format, "csv or json");
    boundary->add_option("--out", destination, "Output path, '-' for standard output");

    auto *audit = app.add_subcommand("clone-audit", "Universality of both machine readings");
    audit->add_option("--xi", xi, "Machine parameter value(s)")->delimiter(',');
    audit->add_option("--xi-grid", xi_grid, "Machine parameter grid lo:hi:n");
    audit->add_option("--samples", samples, "Fibonacci-sphere sample count")->check(CLI::Range(size_t{2}, size_t{1000000}));
    audit->add_option("--format", format, "csv or json");
    audit->add_option("--out", destination, "Output path, '-' for standard output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Format fmt = parse_format(format);
        if (*sweep) {
            SweepConfig cfg;
            if (!config_path.empty()) {
                std::ifstream f(config_path);
                if (!f) {
                    throw ConfigError("config: cannot open '" + config_path + "'");
                }
                try {
                    cfg = parse_sweep_config(f);
                } catch (const ConfigError &e) {
                    throw ConfigError(config_path + ": " + e.what());
                }
            }
            cfg.xi_grid = xi_values(xi, xi_grid, cfg.xi_grid);
            std::vector<double> alphas = alpha_sq;
            if (!alpha_grid.empty()) {
                auto g = parse_grid(alpha_grid);
                alphas.insert(alphas.end(), g.begin(), g.end());
            }
            if (!alphas.empty()) {
                cfg.alpha_sq_grid = alphas;
            }
            for (const auto &q : quantities) {
                cfg.quantities.push_back(parse_quantity(q));
            }
            if (sweep->count("--format")) {
                cfg.output_format = fmt;
            }
            cfg.analysis_only = cfg.analysis_only || analysis_only;
            for (const auto &spec : tol_specs) {
                auto eq = spec.find('=');
                if (eq == std::string::npos) {
                    cfg.tolerances["ppt"] = parse_double(spec, "tol");
                } else {
                    cfg.tolerances[spec.substr(0, eq)] = parse_double(spec.substr(eq + 1), "tol." + spec.substr(0, eq));
                }
            }
            auto rows = run_sweep(cfg);
            emit_report(serialize(rows, cfg.output_format), destination, out);
            return 0;
        }
        if (*verify) {
            auto claims = verify_claims();
            bool to_stdout = verify_out == "-";
            print_claim_table(claims, to_stdout ? err : out);
            print_discrepancies(claims, err);
            if (!verify_out.empty()) {
                emit_report(serialize(claims, fmt), verify_out, out);
            }
            for (const auto &c : claims) {
                if (c.verdict == Verdict::Fail) {
                    return 1;
                }
            }
            return 0;
        }
        if (*boundary) {
            auto grid = xi_values(xi, xi_grid, {kXiMin, kXiOptimal});
            emit_report(serialize(boundary_table(grid, analysis_only, bisect_tol), fmt), destination, out);
            return 0;
        }
        if (*audit) {
            auto grid = xi_values(xi, xi_grid, {kXiMin, kXiOptimal, 0.25});
            emit_report(serialize(clone_audit(grid, samples), fmt), destination, out);
            return 0;
        }
    } catch (const ConfigError &e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange &e) {
        err << "configuration error: " << e.what() << " (use --analysis-only where supported)\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace qbroadcast
