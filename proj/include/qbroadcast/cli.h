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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qbroadcast {

enum class Quantity { PptNonlocal, PptLocal, BellM, Fidelity, WernerX };
enum class Format { Csv, Json };

std::string_view quantity_name(Quantity q);
/// Throws ConfigError on an unknown name.
Quantity parse_quantity(std::string_view name);
Format parse_format(std::string_view name);

/// Parameter sweep over (xi, alpha^2). Recognized tolerance names: "ppt" (PPT eigenvalue slack,
/// default 1e-10) and "werner" (Werner reconstruction, default 1e-12).
struct SweepConfig {
    std::vector<double> xi_grid;
    std::vector<double> alpha_sq_grid;
    std::vector<Quantity> quantities;
    Format output_format = Format::Csv;
    std::map<std::string, double> tolerances;
    bool analysis_only = false;

    double tolerance(const std::string &name) const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// "lo:hi:n" -> n evenly spaced values including both ends (n = 1 gives {lo}).
std::vector<double> parse_grid(std::string_view spec);

/// Reads `key = value` lines (keys as the sweep flags: xi, xi-grid, alpha-sq, alpha-grid,
/// quantity, format, analysis-only, tol.<name>). '#' starts a comment. Errors carry the line
/// number and key.
SweepConfig parse_sweep_config(std::istream &in);

struct SweepRow {
    double xi;
    double alpha_sq;
    Quantity quantity;
    double value;  // NaN when undefined (wernerX without a Werner form)
};

/// One row per grid point per quantity, xi-major then alpha^2 then quantity order. Grid points are
/// evaluated in parallel; assembly order is fixed.
std::vector<SweepRow> run_sweep(const SweepConfig &cfg);

namespace serial {
std::vector<SweepRow> run_sweep(const SweepConfig &cfg);
}  // namespace serial

enum class Verdict { Pass, Fail, Discrepancy };
std::string_view verdict_name(Verdict v);

/// `Equal`: PASS iff |expected - computed| <= tolerance (per endpoint for intervals).
/// `AtMost`: PASS iff computed <= expected + tolerance (inequality claims with no reported value).
enum class Comparison { Equal, AtMost };

/// A scalar (lo == hi, is_interval false) or a closed interval.
struct ClaimValue {
    double lo = 0;
    double hi = 0;
    bool is_interval = false;

    static ClaimValue scalar(double v) {
        return {v, v, false};
    }
    static ClaimValue interval(double lo, double hi) {
        return {lo, hi, true};
    }
};

struct ClaimResult {
    std::string claim_id;
    std::string paper_anchor;
    ClaimValue expected;
    ClaimValue computed;
    double tolerance = 0;
    Comparison comparison = Comparison::Equal;
    Verdict verdict = Verdict::Fail;
    std::string note;
};

/// Verdict from the comparison rule, ignoring DISCREPANCY (which the caller assigns).
Verdict judge(const ClaimValue &expected, const ClaimValue &computed, double tolerance, Comparison comparison);

/// Re-derives every quantitative statement of the broadcasting analysis.
std::vector<ClaimResult> verify_claims();

struct BoundaryRow {
    double xi;
    std::string criterion;  // nonlocalInseparable, localSeparable, bellViolation
    double closed_lo, closed_hi;
    double numeric_lo, numeric_hi;  // NaN where the criterion has no range
};
std::vector<BoundaryRow> boundary_table(const std::vector<double> &xi_grid, bool analysis_only, double tol);

struct CloneAuditRow {
    double xi;
    std::string kind;
    bool machine_exists;
    double min_fidelity, max_fidelity, spread;  // NaN when the machine does not exist
};
std::vector<CloneAuditRow> clone_audit(const std::vector<double> &xi_grid, size_t samples);

/// Serializers. CSV: header row, 17 significant digits, "nan" for undefined values. JSON: array of
/// objects, undefined values as null. Both end with a newline.
std::string to_csv(const std::vector<SweepRow> &rows);
std::string to_json(const std::vector<SweepRow> &rows);
std::string to_csv(const std::vector<ClaimResult> &claims);
std::string to_json(const std::vector<ClaimResult> &claims);
std::string to_csv(const std::vector<BoundaryRow> &rows);
std::string to_json(const std::vector<BoundaryRow> &rows);
std::string to_csv(const std::vector<CloneAuditRow> &rows);
std::string to_json(const std::vector<CloneAuditRow> &rows);

std::vector<SweepRow> sweep_rows_from_json(std::string_view text);
std::vector<SweepRow> sweep_rows_from_csv(std::string_view text);
std::vector<ClaimResult> claims_from_json(std::string_view text);

/// Writes `text` to `destination` ("-" is standard output). Throws std::runtime_error with the path.
void emit_report(const std::string &text, const std::string &destination, std::ostream &stdout_stream);

/// Full command line (args[0] is the program name). Returns the process exit code: 0 success,
/// 1 a verification FAIL, 2 usage or configuration error.
int run_command_line(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qbroadcast
