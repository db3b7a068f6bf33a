// Copyright 2026 The nlsim Authors
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

#include <gtest/gtest.h>

#include <sstream>

#include "nlsim/cli.hpp"
#include "support/fixtures.hpp"

using namespace nlsim;
using nlsim::testing::Rng;

namespace {

template <typename F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidFormat;
}

std::string scenario_path(const std::string &name) {
    return std::string(NLSIM_SCENARIO_DIR) + "/" + name;
}

struct CliOutput {
    int code;
    std::string out;
    std::string err;
};

CliOutput cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(json_io, matrix_round_trip) {
    Rng rng(1);
    const ComplexMatrix m = nlsim::testing::random_matrix(3, 2, rng);
    const ComplexMatrix back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
    EXPECT_EQ(back, m);
}

TEST(json_io, real_entries_accepted) {
    const Json j = Json::parse(R"({"rows": 2, "cols": 2, "data": [1, [0, 2], 0, 1.5]})");
    const ComplexMatrix m = matrix_from_json(j);
    EXPECT_EQ(m(0, 0), Complex(1, 0));
    EXPECT_EQ(m(0, 1), Complex(0, 2));
    EXPECT_EQ(m(1, 1), Complex(1.5, 0));
}

TEST(json_io, malformed_matrix) {
    EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})")); }),
              ErrorCode::InvalidFormat);
    EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "data": ["x"]})")); }),
              ErrorCode::InvalidFormat);
}

TEST(json_io, scenario_round_trip) {
    Rng rng(2);
    const Scenario s = nlsim::testing::random_scenario(rng);
    const ScenarioFile back = scenario_from_json(Json::parse(scenario_to_json("r", s).dump()));
    EXPECT_EQ(back.id, "r");
    EXPECT_NEAR(exact_probability(back.scenario), exact_probability(s), 1e-12);
}

TEST(json_io, rejects_unknown_version) {
    Json j = load_json_file(scenario_path("singlet.json"));
    j["version"] = 2;
    EXPECT_EQ(code_of([&] { scenario_from_json(j); }), ErrorCode::InvalidFormat);
    j.erase("version");
    EXPECT_EQ(code_of([&] { scenario_from_json(j); }), ErrorCode::InvalidFormat);
    EXPECT_EQ(code_of([] { load_json_file(scenario_path("missing.json")); }), ErrorCode::InvalidFormat);
}

TEST(json_io, shipped_files_load) {
    EXPECT_NEAR(exact_probability(scenario_from_json(load_json_file(scenario_path("singlet.json"))).scenario), 0.5, 1e-12);
    EXPECT_NEAR(exact_probability(scenario_from_json(load_json_file(scenario_path("ip2_uniform.json"))).scenario), 0.375,
                1e-12);
    const MeasurementGame g = game_from_json(load_json_file(scenario_path("singlet_game.json")));
    EXPECT_EQ(g.alice.size(), 2u);
    EXPECT_EQ(g.bob.size(), 3u);
    const EntangledProtocol p = protocol_from_json(load_json_file(scenario_path("equality_1bit.json")));
    for (std::uint64_t x = 0; x < 2; ++x) {
        for (std::uint64_t y = 0; y < 2; ++y) {
            EXPECT_NEAR(exact_acceptance_twoway(p.spec, x, y), x == y ? 1.0 : 0.0, 1e-12);
        }
    }
    const TwowayFile t = twoway_from_json(load_json_file(scenario_path("and_twoway.json")));
    for (std::uint64_t x = 0; x < 2; ++x) {
        for (std::uint64_t y = 0; y < 2; ++y) {
            EXPECT_EQ(run_twoway(t.protocol, x, y, 0).output, x & y);
        }
    }
}

TEST(run_record, csv_round_trip) {
    RunRecord r{"singlet", "simulate", 0.05, 0.01, 7, 0.4987654321, 0.5, 0.0, 188270, 0.0};
    r.abs_error = std::abs(r.estimate - r.oracle);
    const RunRecord back = run_record_from_csv(to_csv(r));
    EXPECT_EQ(back.scenario, r.scenario);
    EXPECT_EQ(back.seed, 7u);
    EXPECT_EQ(back.bits, 188270u);
    EXPECT_DOUBLE_EQ(back.estimate, r.estimate);
    EXPECT_NEAR(back.abs_error, 0.0012345679, 1e-10);
}

TEST(run_record, abs_error_recomputed) {
    const RunRecord r = run_record_from_csv("s,simulate,0.1,0.1,1,0.25,0.5,99,10,0");
    EXPECT_DOUBLE_EQ(r.abs_error, 0.25);
    EXPECT_EQ(code_of([] { run_record_from_csv("s,simulate,0.1"); }), ErrorCode::InvalidFormat);
    EXPECT_EQ(code_of([] { run_record_from_csv("s,simulate,a,0.1,1,0.25,0.5,0,10,0"); }), ErrorCode::InvalidFormat);
}

TEST(run_record, stream_and_sort) {
    std::vector<RunRecord> rows{{"b", "sweep", 0.1, 0.1, 2}, {"a", "sweep", 0.2, 0.1, 1}, {"a", "sweep", 0.1, 0.1, 3},
                                {"a", "sweep", 0.1, 0.1, 1}};
    sort_run_records(rows);
    EXPECT_EQ(rows[0].seed, 1u);
    EXPECT_EQ(rows[1].seed, 3u);
    EXPECT_EQ(rows[2].epsilon, 0.2);
    EXPECT_EQ(rows[3].scenario, "b");
    std::stringstream ss;
    write_run_records(ss, rows);
    EXPECT_EQ(read_run_records(ss).size(), 4u);
    std::stringstream bad("x,y\n");
    EXPECT_EQ(code_of([&] { read_run_records(bad); }), ErrorCode::InvalidFormat);
}

TEST(cli, oracle_prints_twelve_decimals) {
    const CliOutput r = cli({"oracle", scenario_path("singlet.json")});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out, "0.500000000000\n");
    EXPECT_EQ(cli({"oracle", scenario_path("ip2_uniform.json")}).out, "0.375000000000\n");
}

TEST(cli, simulate_is_reproducible) {
    const std::vector<std::string> args{"simulate", scenario_path("singlet.json"), "--eps", "0.2", "--beta", "0.1",
                                        "--seed", "11"};
    const CliOutput a = cli(args);
    const CliOutput b = cli(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const std::vector<std::string> rows = lines_of(a.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], kRunRecordHeader);
    const RunRecord rec = run_record_from_csv(rows[1]);
    EXPECT_EQ(rec.scenario, "singlet");
    EXPECT_EQ(rec.seed, 11u);
    EXPECT_LE(rec.abs_error, 0.2);
    EXPECT_EQ(rec.wall_ms, 0.0);
}

TEST(cli, exit_codes) {
    EXPECT_EQ(cli({}).code, kExitUsage);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cli({"simulate", scenario_path("singlet.json"), "--eps", "abc"}).code, kExitUsage);
    EXPECT_EQ(cli({"oracle", scenario_path("missing.json")}).code, kExitValidation);
    EXPECT_EQ(cli({"simulate", scenario_path("singlet.json"), "--eps", "0"}).code, kExitValidation);
    const CliOutput bad = cli({"game", scenario_path("singlet_game.json"), "--choiceA", "5"});
    EXPECT_EQ(bad.code, kExitValidation);
    EXPECT_NE(bad.err.find("UnknownMeasurement"), std::string::npos) << bad.err;
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(cli, norms_json) {
    const CliOutput r = cli({"norms", "--op", "ip:1", "--budget", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_NEAR(j["upper"].get<double>(), 1.0, 1e-6);
    EXPECT_NEAR(j["lower"].get<double>(), 1.0, 1e-6);
    const Json u = Json::parse(cli({"norms", "--op", scenario_path("ip2.json"), "--method", "upper"}).out);
    EXPECT_TRUE(u["lower"].is_null());
    EXPECT_GE(u["upper"].get<double>(), 4.0 / 3.0 - 1e-6);
}

TEST(cli, bench_ip_reports_trivial_bound) {
    const CliOutput r = cli({"bench", "ip", "--n", "1", "--budget", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["n"].get<int>(), 1);
    EXPECT_EQ(j["trivial"].get<double>(), 16.0);
    EXPECT_LE(j["lower"].get<double>(), j["upper"].get<double>() + 1e-9);
}

TEST(cli, twoway_equality_agrees) {
    const CliOutput r = cli({"twoway", "--protocol", "equality", "--bits", "2", "--seed", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const std::vector<std::string> rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], "x,y,direct,smp,twoway_bits,smp_bits");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        std::vector<std::string> c;
        std::stringstream ss(rows[k]);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            c.push_back(cell);
        }
        ASSERT_EQ(c.size(), 6u);
        EXPECT_EQ(c[2], c[3]) << rows[k];
        EXPECT_EQ(c[2], c[0] == c[1] ? "1" : "0");
    }
}

TEST(cli, twoway_file) {
    const CliOutput r = cli({"twoway", scenario_path("and_twoway.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(lines_of(r.out).back(), "1,1,1,1,2,4");
}

TEST(cli, game_rows) {
    const CliOutput r = cli({"game", scenario_path("singlet_game.json"), "--choiceA", "0", "--choiceB", "0", "--eps",
                             "0.4", "--beta", "0.2", "--runs", "2", "--seed", "4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const std::vector<std::string> rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].rfind("run,outcome,p_", 0), 0u);
    EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
    EXPECT_EQ(rows[2].rfind("1,", 0), 0u);
}

TEST(cli, compile_equality) {
    const CliOutput r = cli({"compile", scenario_path("equality_1bit.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["qubits"].get<int>(), 2);
    EXPECT_LE(j["max_deviation"].get<double>(), 1e-10);
    EXPECT_EQ(j["inputs"].size(), 4u);
    EXPECT_LE(j["gram_upper"].get<double>(), j["gram_cap"].get<double>() + 1e-9);
}

TEST(cli, sweep_sorted) {
    const CliOutput r = cli({"sweep", scenario_path("singlet.json"), scenario_path("ip2_uniform.json"), "--eps",
                             "0.4,0.3", "--beta", "0.2", "--seeds", "2,1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream in(r.out);
    const std::vector<RunRecord> rows = read_run_records(in);
    ASSERT_EQ(rows.size(), 8u);
    std::vector<RunRecord> sorted = rows;
    sort_run_records(sorted);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(to_csv(rows[k]), to_csv(sorted[k]));
        EXPECT_EQ(rows[k].command, "sweep");
    }
    EXPECT_EQ(rows.front().scenario, "ip2_uniform");
}

TEST(cli, parse_seed_forms) {
    EXPECT_EQ(parse_seed("42"), 42u);
    EXPECT_EQ(code_of([] { parse_seed("4x"); }), ErrorCode::InvalidParameter);
    parse_seed("random");
}
