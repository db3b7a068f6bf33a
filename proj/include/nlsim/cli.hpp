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

// Command-line front end. run_cli() does all the work so tests can call it
// without spawning a process; tools/nlsim.cpp only forwards argv.
//
// Exit codes: 0 ok, 1 usage, 2 validation error, 3 estimation failure.

#pragma once

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlsim/games.hpp"
#include "nlsim/harness.hpp"
#include "nlsim/json_io.hpp"
#include "nlsim/norms.hpp"
#include "nlsim/oracle.hpp"
#include "nlsim/run_record.hpp"

namespace nlsim {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitEstimation = 3 };

inline std::uint64_t parse_seed(const std::string &text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used, 0);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::logic_error &) {
    }
    fail(ErrorCode::InvalidParameter, "seed must be an unsigned integer or 'random', got '" + text + "'");
}

/// Loads an operator file, or builds one from "ip:N".
inline BipartiteOperator load_operator(const std::string &spec) {
    if (spec.rfind("ip:", 0) == 0) {
        return ip_operator(static_cast<unsigned>(std::stoul(spec.substr(3))));
    }
    return operator_from_json(load_json_file(spec));
}

/// Balanced operator-Schmidt decomposition, or the optimized one when budget > 0.
inline OperatorDecomposition simulation_decomposition(const BipartiteOperator &q, int budget, std::uint64_t seed) {
    if (budget > 0) {
        return diamond_upper_optimize(q, budget, seed).witness_decomposition;
    }
    return balance(operator_schmidt(q));
}

/// Full pipeline for one scenario: decompose, balance, build psi, plan, run_smp.
/// The cap is max(1, sqrt of the balanced bound), which bounds both psi norms.
inline RunRecord simulate_scenario(const ScenarioFile &file, double epsilon, double beta, std::uint64_t seed,
                                   double alpha = 0.0, int budget = 0, bool timing = false) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario &s = file.scenario;
    const OperatorDecomposition decomp = simulation_decomposition(s.q, budget, seed);
    const double cap = std::max(1.0, std::sqrt(diamond_upper_from(decomp)));
    const EstimationPlan p = plan(epsilon, beta, cap, seed);
    SmpScenario smp;
    smp.alice_vector = [&] { return build_psi_alice(decomp, s.e, s.u, alpha); };
    smp.bob_vector = [&] { return build_psi_bob(decomp, s.e, s.v, alpha); };
    const SmpResult r = run_smp(smp, p);
    RunRecord rec;
    rec.scenario = file.id;
    rec.command = "simulate";
    rec.epsilon = epsilon;
    rec.beta = beta;
    rec.seed = seed;
    rec.estimate = r.estimate;
    rec.oracle = exact_probability(s);
    rec.abs_error = std::abs(rec.estimate - rec.oracle);
    rec.bits = r.ledger.total();
    if (timing) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return rec;
}

namespace detail {

inline Json nullable(const std::optional<double> &x) {
    return x ? Json(*x) : Json(nullptr);
}

inline std::string fixed12(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(12) << x;
    return os.str();
}

struct NormsResult {
    std::optional<double> upper;
    std::optional<double> lower;
    std::optional<std::size_t> terms;
};

inline NormsResult compute_norms(const BipartiteOperator &q, const std::string &method, int budget,
                                 std::uint64_t seed) {
    NormsResult out;
    if (method == "upper" || method == "both") {
        const NormBound b = diamond_upper_optimize(q, budget, seed);
        out.upper = b.upper;
        out.terms = b.witness_decomposition.size();
    }
    if (method == "lower" || method == "both") {
        out.lower = diamond_lower(q, standard_witnesses(q, budget, seed));
    }
    return out;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"nlsim: classical simulation of quantum measurements with counted communication", "nlsim"};
    app.require_subcommand(1);

    std::string seed_text = std::to_string(kDefaultSeed);
    double epsilon = 0.05;
    double beta = 0.01;
    int budget = 4;

    // oracle
    std::string oracle_file;
    CLI::App *oracle_cmd = app.add_subcommand("oracle", "exact acceptance probability of a scenario");
    oracle_cmd->add_option("scenario", oracle_file, "scenario JSON")->required();

    // simulate
    std::string simulate_file;
    double alpha = 0.0;
    int simulate_budget = 0;
    bool timing = false;
    CLI::App *simulate_cmd = app.add_subcommand("simulate", "estimate a scenario through the SMP protocol");
    simulate_cmd->add_option("scenario", simulate_file, "scenario JSON")->required();
    simulate_cmd->add_option("--eps", epsilon, "additive error");
    simulate_cmd->add_option("--beta", beta, "failure probability");
    simulate_cmd->add_option("--seed", seed_text, "shared-randomness seed or 'random'");
    simulate_cmd->add_option("--alpha", alpha, "Schmidt-weight split in [0,1]");
    simulate_cmd->add_option("--budget", simulate_budget, "restarts for the decomposition search (0 = operator Schmidt)");
    simulate_cmd->add_flag("--timing", timing, "fill wall_ms (rows are then not reproducible)");

    // norms
    std::string op_spec;
    std::string method = "both";
    CLI::App *norms_cmd = app.add_subcommand("norms", "diamond-norm bounds of an operator");
    norms_cmd->add_option("--op", op_spec, "operator JSON or ip:N")->required();
    norms_cmd->add_option("--method", method, "upper|lower|both")->check(CLI::IsMember({"upper", "lower", "both"}));
    norms_cmd->add_option("--budget", budget, "search restarts and ascent witnesses");
    norms_cmd->add_option("--seed", seed_text, "search seed or 'random'");

    // game
    std::string game_file;
    std::size_t choice_a = 0;
    std::size_t choice_b = 0;
    int runs = 1;
    CLI::App *game_cmd = app.add_subcommand("game", "simulate a measurement game");
    game_cmd->add_option("game", game_file, "game JSON")->required();
    game_cmd->add_option("--choiceA", choice_a, "Alice's measurement index");
    game_cmd->add_option("--choiceB", choice_b, "Bob's measurement index");
    game_cmd->add_option("--eps", epsilon, "statistical-distance target");
    game_cmd->add_option("--beta", beta, "failure probability");
    game_cmd->add_option("--seed", seed_text, "seed of run 0 or 'random'; run r uses seed + r");
    game_cmd->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);

    // twoway
    std::string twoway_file;
    std::string protocol_name = "equality";
    unsigned input_bits = 2;
    CLI::App *twoway_cmd = app.add_subcommand("twoway", "convert a twoway protocol to SMP and compare on all inputs");
    twoway_cmd->add_option("file", twoway_file, "table-driven twoway protocol JSON (optional)");
    twoway_cmd->add_option("--protocol", protocol_name, "built-in protocol when no file is given")
        ->check(CLI::IsMember({"equality"}));
    twoway_cmd->add_option("--bits", input_bits, "input width of the built-in protocol");
    twoway_cmd->add_option("--seed", seed_text, "shared seed fixed before conversion");

    // compile
    std::string compile_file;
    std::optional<double> compile_eps;
    CLI::App *compile_cmd = app.add_subcommand("compile", "Yao-compile a quantum protocol");
    compile_cmd->add_option("protocol", compile_file, "protocol JSON")->required();
    compile_cmd->add_option("--eps", compile_eps, "also run the classical simulation at this error");
    compile_cmd->add_option("--beta", beta, "failure probability for --eps");
    compile_cmd->add_option("--seed", seed_text, "seed for --eps");

    // bench
    std::string bench_target;
    unsigned bench_n = 2;
    std::string bench_method = "both";
    CLI::App *bench_cmd = app.add_subcommand("bench", "built-in benchmark operators");
    bench_cmd->add_option("target", bench_target, "ip")->required()->check(CLI::IsMember({"ip"}));
    bench_cmd->add_option("--n", bench_n, "input bits per party");
    bench_cmd->add_option("--method", bench_method, "upper|lower|both")->check(CLI::IsMember({"upper", "lower", "both"}));
    bench_cmd->add_option("--budget", budget, "search restarts and ascent witnesses");
    bench_cmd->add_option("--seed", seed_text, "search seed or 'random'");

    // sweep
    std::vector<std::string> sweep_files;
    std::vector<double> sweep_eps{0.1, 0.05};
    std::vector<double> sweep_beta{0.01};
    std::vector<std::string> sweep_seeds{std::to_string(kDefaultSeed)};
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "grid of simulate runs as CSV");
    sweep_cmd->add_option("scenarios", sweep_files, "scenario JSON files")->required();
    sweep_cmd->add_option("--eps", sweep_eps, "epsilon values")->delimiter(',');
    sweep_cmd->add_option("--beta", sweep_beta, "beta values")->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep_seeds, "seeds")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*oracle_cmd) {
            out << detail::fixed12(exact_probability(scenario_from_json(load_json_file(oracle_file)).scenario)) << '\n';
        } else if (*simulate_cmd) {
            const ScenarioFile file = scenario_from_json(load_json_file(simulate_file));
            write_run_records(out, {simulate_scenario(file, epsilon, beta, parse_seed(seed_text), alpha,
                                                      simulate_budget, timing)});
        } else if (*norms_cmd) {
            const detail::NormsResult r = detail::compute_norms(load_operator(op_spec), method, budget, parse_seed(seed_text));
            Json j{{"upper", detail::nullable(r.upper)},
                   {"lower", detail::nullable(r.lower)},
                   {"terms", r.terms ? Json(*r.terms) : Json(nullptr)}};
            out << j.dump() << '\n';
        } else if (*game_cmd) {
            const MeasurementGame g = game_from_json(load_json_file(game_file));
            const std::uint64_t seed = parse_seed(seed_text);
            const JointDistribution exact = oracle_distribution(g, choice_a, choice_b);
            const Povm &ma = g.alice[choice_a];
            const Povm &mb = g.bob[choice_b];
            out << "run,outcome";
            for (const Outcome &a : ma.outcomes) {
                for (const Outcome &b : mb.outcomes) {
                    out << ",p_" << a.label << '_' << b.label;
                }
            }
            out << ",l1_to_oracle,bits\n";
            for (int r = 0; r < runs; ++r) {
                const GameRun run = simulate_game(g, choice_a, choice_b, epsilon, beta, seed + static_cast<std::uint64_t>(r));
                out << r << ',' << ma.outcomes[run.outcome_a].label << ':' << mb.outcomes[run.outcome_b].label;
                for (double p : run.cleaned) {
                    out << ',' << format_real(p);
                }
                out << ',' << format_real(l1_distance(run.cleaned, exact.p)) << ',' << run.ledger.total() << '\n';
            }
        } else if (*twoway_cmd) {
            const std::uint64_t seed = parse_seed(seed_text);
            TwowayFile file;
            if (!twoway_file.empty()) {
                file = twoway_from_json(load_json_file(twoway_file));
            } else {
                file.protocol = equality_protocol(input_bits);
                file.inputs_a = file.inputs_b = std::size_t{1} << input_bits;
            }
            out << "x,y,direct,smp,twoway_bits,smp_bits\n";
            for (std::uint64_t x = 0; x < file.inputs_a; ++x) {
                for (std::uint64_t y = 0; y < file.inputs_b; ++y) {
                    const TwowayRun direct = run_twoway(file.protocol, x, y, seed);
                    const SmpConversion smp = twoway_to_smp(file.protocol, x, y, seed);
                    out << x << ',' << y << ',' << direct.output << ',' << smp.output << ',' << direct.ledger.total()
                        << ',' << smp.ledger.total() << '\n';
                }
            }
        } else if (*compile_cmd) {
            const EntangledProtocol p = protocol_from_json(load_json_file(compile_file));
            const YaoCompilation c = yao_compile(p.spec);
            double max_a = 0.0;
            double max_b = 0.0;
            for (std::size_t h = 0; h < c.alice_ops.size(); ++h) {
                max_a = std::max(max_a, spectral_norm(c.alice_ops[h]));
                max_b = std::max(max_b, spectral_norm(c.bob_ops[h]));
            }
            const double gram_upper = diamond_upper_from(expand_gram(c));
            Json inputs = Json::array();
            double deviation = 0.0;
            const std::uint64_t seed = parse_seed(seed_text);
            for (std::uint64_t x = 0; x < p.input_dim_a; ++x) {
                for (std::uint64_t y = 0; y < p.input_dim_b; ++y) {
                    const double exact = exact_acceptance_twoway(p.spec, x, y);
                    const double compiled = compiled_acceptance(c, protocol_initial_state(p.spec, x, y));
                    deviation = std::max(deviation, std::abs(exact - compiled));
                    Json row{{"x", x}, {"y", y}, {"exact", exact}, {"compiled", compiled}};
                    if (compile_eps) {
                        const SmpResult r = simulate_twoway_quantum(p, x, y, twoway_quantum_plan(c.qubits, *compile_eps, beta, seed));
                        row["estimate"] = r.estimate;
                        row["bits"] = r.ledger.total();
                    }
                    inputs.push_back(std::move(row));
                }
            }
            Json j{{"qubits", c.qubits},
                   {"terms", c.alice_ops.size()},
                   {"max_norm_a", max_a},
                   {"max_norm_b", max_b},
                   {"gram_upper", gram_upper},
                   {"gram_cap", std::ldexp(1.0, 2 * (static_cast<int>(c.qubits) - 1))},
                   {"max_deviation", deviation},
                   {"inputs", std::move(inputs)}};
            out << j.dump(2) << '\n';
        } else if (*bench_cmd) {
            const BipartiteOperator q = ip_operator(bench_n);
            const detail::NormsResult r = detail::compute_norms(q, bench_method, budget, parse_seed(seed_text));
            const double side = static_cast<double>(q.side());
            Json j{{"n", bench_n},
                   {"upper", detail::nullable(r.upper)},
                   {"lower", detail::nullable(r.lower)},
                   {"trivial", side * side}};
            out << j.dump() << '\n';
        } else if (*sweep_cmd) {
            std::vector<RunRecord> rows;
            for (const std::string &path : sweep_files) {
                const ScenarioFile file = scenario_from_json(load_json_file(path));
                for (double e : sweep_eps) {
                    for (double b : sweep_beta) {
                        for (const std::string &s : sweep_seeds) {
                            RunRecord rec = simulate_scenario(file, e, b, parse_seed(s));
                            rec.command = "sweep";
                            rows.push_back(std::move(rec));
                        }
                    }
                }
            }
            sort_run_records(rows);
            write_run_records(out, rows);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::EstimationFailure || e.code() == ErrorCode::CapExceeded ? kExitEstimation
                                                                                                : kExitValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace nlsim
