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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "qbroadcast/cloner.h"
#include "qbroadcast/errors.h"

using namespace qbroadcast;

namespace {

SweepConfig single_point(double xi, double alpha_sq, std::vector<Quantity> quantities) {
    SweepConfig cfg;
    cfg.xi_grid = {xi};
    cfg.alpha_sq_grid = {alpha_sq};
    cfg.quantities = std::move(quantities);
    return cfg;
}

struct CommandResult {
    int code;
    std::string out;
    std::string err;
};

CommandResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "qbroadcast");
    std::ostringstream out, err;
    int code = run_command_line(args, out, err);
    return {code, out.str(), err.str()};
}

size_t count_lines(const std::string &s) {
    return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

bool same_double(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST(parse_grid, examples) {
    EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(parse_grid("0.2:0.9:1"), std::vector<double>{0.2});
    auto g = parse_grid("0.1:0.7:7");
    ASSERT_EQ(g.size(), 7u);
    EXPECT_EQ(g.back(), 0.7);
    EXPECT_THROW(parse_grid("0:1"), ConfigError);
    EXPECT_THROW(parse_grid("0:1:0"), ConfigError);
    EXPECT_THROW(parse_grid("0:1:2.5"), ConfigError);
    EXPECT_THROW(parse_grid("a:1:2"), ConfigError);
}

TEST(parse_names, round_trip) {
    for (auto q : {Quantity::PptNonlocal, Quantity::PptLocal, Quantity::BellM, Quantity::Fidelity, Quantity::WernerX}) {
        EXPECT_EQ(parse_quantity(quantity_name(q)), q);
    }
    EXPECT_EQ(quantity_name(Quantity::PptNonlocal), "pptNonlocal");
    EXPECT_THROW(parse_quantity("negativity"), ConfigError);
    EXPECT_EQ(parse_format("json"), Format::Json);
    EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(parse_sweep_config, full_file) {
    std::istringstream in(
        "# sweep\n"
        "xi = 0.2, 0.25\n"
        "alpha-grid = 0:1:5   # five points\n"
        "quantity = fidelity, bellM\n"
        "format = json\n"
        "tol.ppt = 1e-9\n"
        "\n");
    SweepConfig cfg = parse_sweep_config(in);
    EXPECT_EQ(cfg.xi_grid, (std::vector<double>{0.2, 0.25}));
    EXPECT_EQ(cfg.alpha_sq_grid.size(), 5u);
    EXPECT_EQ(cfg.quantities, (std::vector<Quantity>{Quantity::Fidelity, Quantity::BellM}));
    EXPECT_EQ(cfg.output_format, Format::Json);
    EXPECT_EQ(cfg.tolerance("ppt"), 1e-9);
    EXPECT_EQ(cfg.tolerance("werner"), 1e-12);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(parse_sweep_config, diagnostics_name_line_and_field) {
    std::istringstream bad_value("xi = 0.2\nquantity = fidelity\nalpha-sq = half\n");
    try {
        parse_sweep_config(bad_value);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("alpha-sq"), std::string::npos) << msg;
    }
    std::istringstream unknown("colour = blue\n");
    EXPECT_THROW(parse_sweep_config(unknown), ConfigError);
    std::istringstream no_equals("xi 0.2\n");
    EXPECT_THROW(parse_sweep_config(no_equals), ConfigError);
}

TEST(SweepConfig, validate) {
    auto cfg = single_point(0.2, 0.5, {});
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW(run_sweep(cfg), ConfigError);
    cfg.quantities = {Quantity::BellM};
    cfg.xi_grid = {0.05};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.analysis_only = true;
    EXPECT_NO_THROW(cfg.validate());
    cfg.alpha_sq_grid = {1.5};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.alpha_sq_grid = {};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(run_sweep, examples) {
    auto rows = run_sweep(single_point(1.0 / 6, 0.5, {Quantity::Fidelity}));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].value, 13.0 / 18, 1e-12);
    rows = run_sweep(single_point(1.0 / 6, 0.5, {Quantity::BellM}));
    EXPECT_NEAR(rows[0].value, 32.0 / 81, 1e-12);
    rows = run_sweep(single_point(1.0 / 6, 0.5, {Quantity::PptNonlocal, Quantity::WernerX}));
    EXPECT_NEAR(rows[0].value, -1.0 / 12, 1e-13);
    EXPECT_NEAR(rows[1].value, 4.0 / 9, 1e-12);
    rows = run_sweep(single_point(1.0 / 6, 0.3, {Quantity::WernerX}));
    EXPECT_TRUE(std::isnan(rows[0].value));
}

TEST(run_sweep, row_order_is_xi_major) {
    SweepConfig cfg;
    cfg.xi_grid = {0.2, 0.3};
    cfg.alpha_sq_grid = {0.1, 0.5, 0.9};
    cfg.quantities = {Quantity::Fidelity, Quantity::PptLocal};
    auto rows = run_sweep(cfg);
    ASSERT_EQ(rows.size(), 12u);
    size_t k = 0;
    for (double xi : cfg.xi_grid) {
        for (double a2 : cfg.alpha_sq_grid) {
            for (auto q : cfg.quantities) {
                EXPECT_EQ(rows[k].xi, xi);
                EXPECT_EQ(rows[k].alpha_sq, a2);
                EXPECT_EQ(rows[k].quantity, q);
                k++;
            }
        }
    }
}

TEST(emit, empty_and_single_row) {
    EXPECT_EQ(to_json(std::vector<ClaimResult>{}), "[]\n");
    EXPECT_EQ(to_json(std::vector<SweepRow>{}), "[]\n");
    auto csv = to_csv(run_sweep(single_point(0.2, 0.5, {Quantity::Fidelity})));
    EXPECT_EQ(count_lines(csv), 2u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "xi,alphaSq,quantity,value");
    EXPECT_EQ(csv.back(), '\n');
}

TEST(emit, seventeen_digits) {
    std::vector<SweepRow> rows{{1.0 / 3, 0.1, Quantity::BellM, 2.0 / 3}};
    auto csv = to_csv(rows);
    EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos) << csv;
    EXPECT_NE(csv.find("0.10000000000000001"), std::string::npos) << csv;
}

TEST(emit, csv_and_json_carry_identical_values) {
    SweepConfig cfg;
    cfg.xi_grid = parse_grid("0.15:0.45:7");
    cfg.alpha_sq_grid = parse_grid("0:1:9");
    cfg.quantities = {Quantity::PptNonlocal, Quantity::PptLocal, Quantity::BellM, Quantity::Fidelity,
                      Quantity::WernerX};
    auto rows = run_sweep(cfg);
    auto from_json = sweep_rows_from_json(to_json(rows));
    auto from_csv = sweep_rows_from_csv(to_csv(rows));
    ASSERT_EQ(from_json.size(), rows.size());
    ASSERT_EQ(from_csv.size(), rows.size());
    for (size_t k = 0; k < rows.size(); k++) {
        EXPECT_EQ(from_json[k].xi, rows[k].xi);
        EXPECT_EQ(from_csv[k].alpha_sq, rows[k].alpha_sq);
        EXPECT_EQ(from_json[k].quantity, rows[k].quantity);
        EXPECT_TRUE(same_double(from_json[k].value, rows[k].value)) << k;
        EXPECT_TRUE(same_double(from_csv[k].value, rows[k].value)) << k;
    }
}

TEST(verify_claims, coverage_and_verdicts) {
    auto claims = verify_claims();
    std::map<std::string, ClaimResult> by_id;
    for (const auto &c : claims) {
        EXPECT_TRUE(by_id.emplace(c.claim_id, c).second) << "duplicate " << c.claim_id;
        EXPECT_NE(c.verdict, Verdict::Fail) << c.claim_id << ": " << c.note;
    }
    for (const char *id : {"eq2.lower", "eq2.upper", "eq16.lower", "eq16.upper", "eq14.bound", "bell.threshold",
                           "bell.unfiltered.max_m", "bell.filtered.maxent_xi_min", "werner.x.optimal",
                           "werner.x.xi_min", "fidelity.optimal.maxent", "fidelity.xi_min.maxent",
                           "oracle.equivalence", "universality.xi_below_one_sixth"}) {
        EXPECT_TRUE(by_id.count(id)) << id;
    }
    const auto &lower = by_id.at("eq2.lower");
    EXPECT_NEAR(lower.expected.lo, 0.5 - std::sqrt(39.0) / 16, 1e-15);
    EXPECT_EQ(lower.tolerance, 1e-8);
    EXPECT_EQ(lower.verdict, Verdict::Pass);
    EXPECT_NEAR(by_id.at("fidelity.optimal.maxent").expected.lo, 13.0 / 18, 1e-15);
    const auto &univ = by_id.at("universality.xi_below_one_sixth");
    EXPECT_EQ(univ.verdict, Verdict::Discrepancy);
    EXPECT_NEAR(univ.computed.lo, 0.0318, 1e-3);
}

TEST(judge, rules) {
    EXPECT_EQ(judge(ClaimValue::scalar(1), ClaimValue::scalar(1 + 1e-9), 1e-8, Comparison::Equal), Verdict::Pass);
    EXPECT_EQ(judge(ClaimValue::scalar(1), ClaimValue::scalar(1 + 1e-7), 1e-8, Comparison::Equal), Verdict::Fail);
    EXPECT_EQ(judge(ClaimValue::interval(0, 1), ClaimValue::interval(0, 1.1), 1e-3, Comparison::Equal), Verdict::Fail);
    EXPECT_EQ(judge(ClaimValue::scalar(1), ClaimValue::scalar(0.4), 0, Comparison::AtMost), Verdict::Pass);
    EXPECT_EQ(judge(ClaimValue::scalar(1), ClaimValue::scalar(1.01), 0, Comparison::AtMost), Verdict::Fail);
    EXPECT_EQ(judge(ClaimValue::scalar(1), ClaimValue::scalar(std::nan("")), 1, Comparison::Equal), Verdict::Fail);
}

TEST(claims_json, round_trip) {
    auto claims = verify_claims();
    auto text = to_json(claims);
    auto back = claims_from_json(text);
    ASSERT_EQ(back.size(), claims.size());
    for (size_t k = 0; k < claims.size(); k++) {
        EXPECT_EQ(back[k].claim_id, claims[k].claim_id);
        EXPECT_EQ(back[k].paper_anchor, claims[k].paper_anchor);
        EXPECT_EQ(back[k].verdict, claims[k].verdict);
        EXPECT_EQ(back[k].expected.is_interval, claims[k].expected.is_interval);
        EXPECT_TRUE(same_double(back[k].expected.lo, claims[k].expected.lo));
        EXPECT_TRUE(same_double(back[k].computed.hi, claims[k].computed.hi));
        EXPECT_EQ(back[k].tolerance, claims[k].tolerance);
    }
    EXPECT_EQ(to_json(back), text);
    auto parsed = nlohmann::json::parse(text);
    ASSERT_TRUE(parsed.is_array());
    for (const char *field : {"claimId", "paperAnchor", "expected", "computed", "tolerance", "verdict"}) {
        EXPECT_TRUE(parsed[0].contains(field)) << field;
    }
}

TEST(tables, boundary_and_clone_audit) {
    auto rows = boundary_table({1.0 / 6}, false, 1e-12);
    ASSERT_FALSE(rows.empty());
    bool saw_cross = false;
    for (const auto &r : rows) {
        if (r.criterion == "nonlocalInseparable") {
            saw_cross = true;
            EXPECT_NEAR(r.closed_lo, 0.5 - std::sqrt(39.0) / 16, 1e-12);
            EXPECT_NEAR(r.numeric_lo, r.closed_lo, 1e-8);
            EXPECT_NEAR(r.numeric_hi, r.closed_hi, 1e-8);
        }
    }
    EXPECT_TRUE(saw_cross);
    auto audit = clone_audit({kXiMin, 0.25}, 50);
    ASSERT_EQ(audit.size(), 4u);
    for (const auto &r : audit) {
        if (r.kind == "AbstractBH" && r.xi == kXiMin) {
            EXPECT_FALSE(r.machine_exists);
            EXPECT_TRUE(std::isnan(r.spread));
        } else {
            EXPECT_TRUE(r.machine_exists);
        }
    }
    EXPECT_EQ(count_lines(to_csv(audit)), 5u);
    EXPECT_EQ(nlohmann::json::parse(to_json(rows)).size(), rows.size());
}

TEST(emit_report, file_and_stdout) {
    std::ostringstream sink;
    emit_report("a,b\n", "-", sink);
    EXPECT_EQ(sink.str(), "a,b\n");
    auto path = std::filesystem::temp_directory_path() / "qbroadcast_emit_report_test.csv";
    emit_report("x\n", path.string(), sink);
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(content, "x\n");
    std::filesystem::remove(path);
    EXPECT_THROW(emit_report("x\n", "/nonexistent-dir/out.csv", sink), std::runtime_error);
}

TEST(run_command_line, sweep) {
    auto r = run({"sweep", "--xi", "0.2", "--alpha-sq", "0.5", "--quantity", "fidelity", "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto rows = sweep_rows_from_json(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].value, 0.5 * (1 + 0.36 * 3 / 3), 1e-15);
}

TEST(run_command_line, errors_exit_two) {
    EXPECT_EQ(run({"sweep", "--xi", "0.2", "--alpha-sq", "0.5"}).code, 2);
    EXPECT_EQ(run({"sweep", "--xi", "0.05", "--alpha-sq", "0.5", "--quantity", "bellM"}).code, 2);
    EXPECT_EQ(run({"sweep", "--xi-grid", "0:1", "--alpha-sq", "0.5", "--quantity", "bellM"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"sweep", "--config", "/nonexistent/config.txt"}).code, 2);
    auto ok = run({"sweep", "--xi", "0.05", "--alpha-sq", "0.5", "--quantity", "bellM", "--analysis-only"});
    EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(run_command_line, verify_is_deterministic) {
    auto a = run({"verify", "--format", "csv"});
    auto b = run({"verify", "--format", "csv"});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("DISCREPANCY"), std::string::npos);
    EXPECT_EQ(a.out.find(",FAIL,"), std::string::npos);
    EXPECT_NE(a.err.find("universality.xi_below_one_sixth"), std::string::npos);
}

TEST(run_command_line, config_file) {
    auto path = std::filesystem::temp_directory_path() / "qbroadcast_cli_test.conf";
    {
        std::ofstream f(path);
        f << "xi = 0.1666666666666666667\nalpha-sq = 0.5\nquantity = bellM\nformat = csv\n";
    }
    auto r = run({"sweep", "--config", path.string()});
    std::filesystem::remove(path);
    EXPECT_EQ(r.code, 0) << r.err;
    auto rows = sweep_rows_from_csv(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].value, 32.0 / 81, 1e-12);
}
