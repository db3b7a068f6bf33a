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

// JSON files. Every top-level document carries "version": 1.
//
// matrix:   {"rows": r, "cols": c, "data": [x, ...]} row-major, each x either a
//           number or [re, im]
// vector:   [x, ...] with the same entry forms
// state:    {"dimA": a, "dimB": b, "amplitudes": vector}, index i * b + j
// operator: {"version": 1, "dimA": a, "dimB": b, "matrix": matrix}
// scenario: {"version": 1, "id": s, "operator": {...}, "state": {...},
//            "U": matrix, "V": matrix}  (U, V default to identity)
// game:     {"version": 1, "state": {...}, "alice": [povm...], "bob": [povm...]}
//           povm = {"isometry": matrix (default identity),
//                   "outcomes": [{"label": s, "projector": matrix}, ...]}
// protocol: {"version": 1, "inputs": {"alice": nx, "bob": ny},
//            "entanglement": state, "rounds": [{"party": "alice", "unitary": matrix}, ...]}
// twoway:   {"version": 1, "inputs": {"alice": nx, "bob": ny},
//            "turns": [{"speaker": "alice", "bits": k}, ...],
//            "alice": [{"<turn>/<heard bits>": "<sent bits>", ...} per input],
//            "bob": [...]}

#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsim/games.hpp"
#include "nlsim/harness.hpp"
#include "nlsim/oracle.hpp"

namespace nlsim {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorCode::InvalidFormat, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline std::size_t size_field(const Json &j, const char *key) {
    const Json &v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        fail(ErrorCode::InvalidFormat, std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline Complex complex_from(const Json &x) {
    if (x.is_number()) {
        return {x.get<double>(), 0.0};
    }
    if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        return {x[0].get<double>(), x[1].get<double>()};
    }
    fail(ErrorCode::InvalidFormat, "entry must be a number or [re, im]");
}

inline Json complex_to(Complex z) {
    return Json::array({z.real(), z.imag()});
}

inline Party party_from(const Json &j) {
    const std::string s = j.is_string() ? j.get<std::string>() : "";
    if (s == "alice") {
        return Party::Alice;
    }
    if (s == "bob") {
        return Party::Bob;
    }
    fail(ErrorCode::InvalidFormat, "party must be \"alice\" or \"bob\"");
}

}  // namespace detail

inline void require_version(const Json &j) {
    const Json &v = detail::field(j, "version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
        fail(ErrorCode::InvalidFormat, "unsupported schema version " + v.dump());
    }
}

inline Json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::InvalidFormat, "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        fail(ErrorCode::InvalidFormat, path + ": " + e.what());
    }
}

inline ComplexMatrix matrix_from_json(const Json &j) {
    const std::size_t rows = detail::size_field(j, "rows");
    const std::size_t cols = detail::size_field(j, "cols");
    const Json &data = detail::field(j, "data");
    if (!data.is_array() || data.size() != rows * cols) {
        fail(ErrorCode::InvalidFormat, "matrix data must hold rows * cols entries");
    }
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::complex_from(data[r * cols + c]);
        }
    }
    return m;
}

inline Json matrix_to_json(const ComplexMatrix &m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            data.push_back(detail::complex_to(m(r, c)));
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexVector vector_from_json(const Json &j) {
    if (!j.is_array()) {
        fail(ErrorCode::InvalidFormat, "vector must be an array");
    }
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = detail::complex_from(j[k]);
    }
    return v;
}

inline SchmidtState state_from_json(const Json &j) {
    const std::size_t da = detail::size_field(j, "dimA");
    const std::size_t db = detail::size_field(j, "dimB");
    const ComplexVector amp = vector_from_json(detail::field(j, "amplitudes"));
    if (static_cast<std::size_t>(amp.size()) != da * db) {
        fail(ErrorCode::InvalidFormat, "state amplitudes must hold dimA * dimB entries");
    }
    return schmidt_decompose(amp, da, db);
}

inline Json state_to_json(const SchmidtState &s) {
    Json amp = Json::array();
    const ComplexVector v = s.state_vector();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        amp.push_back(detail::complex_to(v(k)));
    }
    return {{"dimA", s.dim_a()}, {"dimB", s.dim_b()}, {"amplitudes", std::move(amp)}};
}

/// Accepts either a versioned operator document or the bare {dimA, dimB, matrix} body.
inline BipartiteOperator operator_from_json(const Json &j) {
    if (j.contains("version")) {
        require_version(j);
    }
    return BipartiteOperator(detail::size_field(j, "dimA"), detail::size_field(j, "dimB"),
                             matrix_from_json(detail::field(j, "matrix")));
}

inline Json operator_to_json(const BipartiteOperator &q) {
    return {{"version", kSchemaVersion}, {"dimA", q.dim_a()}, {"dimB", q.dim_b()}, {"matrix", matrix_to_json(q.matrix())}};
}

struct ScenarioFile {
    std::string id;
    Scenario scenario;
};

inline ScenarioFile scenario_from_json(const Json &j) {
    require_version(j);
    BipartiteOperator q = operator_from_json(detail::field(j, "operator"));
    SchmidtState e = state_from_json(detail::field(j, "state"));
    auto isometry = [&](const char *key, std::size_t target, std::size_t source) {
        if (j.contains(key)) {
            return matrix_from_json(j.at(key));
        }
        if (target != source) {
            fail(ErrorCode::InvalidFormat, std::string("field '") + key + "' required when dimensions differ");
        }
        return ComplexMatrix(ComplexMatrix::Identity(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(source)));
    };
    ComplexMatrix u = isometry("U", q.dim_a(), e.dim_a());
    ComplexMatrix v = isometry("V", q.dim_b(), e.dim_b());
    std::string id = j.contains("id") && j.at("id").is_string() ? j.at("id").get<std::string>() : "scenario";
    ScenarioFile out{std::move(id), Scenario{std::move(q), std::move(e), std::move(u), std::move(v)}};
    validate_scenario(out.scenario);
    return out;
}

inline Json scenario_to_json(const std::string &id, const Scenario &s) {
    return {{"version", kSchemaVersion},
            {"id", id},
            {"operator", operator_to_json(s.q)},
            {"state", state_to_json(s.e)},
            {"U", matrix_to_json(s.u)},
            {"V", matrix_to_json(s.v)}};
}

inline Povm povm_from_json(const Json &j, std::size_t source_dim) {
    Povm m;
    const Json &outcomes = detail::field(j, "outcomes");
    if (!outcomes.is_array()) {
        fail(ErrorCode::InvalidFormat, "outcomes must be an array");
    }
    for (const Json &o : outcomes) {
        const Json &label = detail::field(o, "label");
        m.outcomes.push_back({label.is_string() ? label.get<std::string>() : label.dump(),
                              matrix_from_json(detail::field(o, "projector"))});
    }
    if (j.contains("isometry")) {
        m.isometry = matrix_from_json(j.at("isometry"));
    } else {
        const auto d = static_cast<Eigen::Index>(source_dim);
        m.isometry = ComplexMatrix::Identity(d, d);
    }
    return m;
}

inline MeasurementGame game_from_json(const Json &j) {
    require_version(j);
    SchmidtState state = state_from_json(detail::field(j, "state"));
    auto family = [&](const char *key, std::size_t dim) {
        const Json &arr = detail::field(j, key);
        if (!arr.is_array()) {
            fail(ErrorCode::InvalidFormat, std::string("field '") + key + "' must be an array");
        }
        std::vector<Povm> out;
        for (const Json &m : arr) {
            out.push_back(povm_from_json(m, dim));
        }
        return out;
    };
    std::vector<Povm> alice = family("alice", state.dim_a());
    std::vector<Povm> bob = family("bob", state.dim_b());
    MeasurementGame g{std::move(state), std::move(alice), std::move(bob)};
    validate_game(g);
    return g;
}

inline EntangledProtocol protocol_from_json(const Json &j) {
    require_version(j);
    const Json &inputs = detail::field(j, "inputs");
    const std::size_t nx = detail::size_field(inputs, "alice");
    const std::size_t ny = detail::size_field(inputs, "bob");
    SchmidtState e = j.contains("entanglement") ? state_from_json(j.at("entanglement")) : SchmidtState::product(basis_vector(1, 0), basis_vector(1, 0));
    std::vector<ProtocolRound> rounds;
    for (const Json &r : detail::field(j, "rounds")) {
        rounds.push_back({detail::party_from(detail::field(r, "party")), matrix_from_json(detail::field(r, "unitary"))});
    }
    EntangledProtocol p = make_entangled_protocol(std::move(rounds), std::move(e), nx, ny);
    validate_protocol(p.spec);
    return p;
}

namespace detail {

inline std::string bits_string(const Bits &bits) {
    std::string s;
    for (bool b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

inline Bits parse_bits(const std::string &s) {
    Bits out;
    for (char c : s) {
        if (c != '0' && c != '1') {
            fail(ErrorCode::InvalidFormat, "bit string '" + s + "' contains a non-bit character");
        }
        out.push_back(c == '1');
    }
    return out;
}

using NextMessageTable = std::vector<std::map<std::string, Bits>>;

inline NextMessageTable next_message_table(const Json &j, std::size_t inputs) {
    if (!j.is_array() || j.size() != inputs) {
        fail(ErrorCode::InvalidFormat, "next-message table needs one object per input");
    }
    NextMessageTable out(inputs);
    for (std::size_t x = 0; x < inputs; ++x) {
        for (const auto &[key, value] : j[x].items()) {
            if (!value.is_string()) {
                fail(ErrorCode::InvalidFormat, "next-message entries must be bit strings");
            }
            out[x][key] = parse_bits(value.get<std::string>());
        }
    }
    return out;
}

inline NextMessage table_function(std::shared_ptr<const NextMessageTable> table) {
    return [table](std::uint64_t input, const Bits &heard, std::uint64_t, std::size_t turn) -> Bits {
        if (input >= table->size()) {
            fail(ErrorCode::InvalidParameter, "input " + std::to_string(input) + " out of range");
        }
        const std::string key = std::to_string(turn) + "/" + bits_string(heard);
        const auto &entries = (*table)[input];
        const auto it = entries.find(key);
        if (it == entries.end()) {
            fail(ErrorCode::MalformedProtocol, "no table entry for input " + std::to_string(input) + " at '" + key + "'");
        }
        return it->second;
    };
}

}  // namespace detail

struct TwowayFile {
    TwowayProtocol protocol;
    std::size_t inputs_a = 0;
    std::size_t inputs_b = 0;
};

/// Table-driven deterministic protocol; the shared seed is ignored.
inline TwowayFile twoway_from_json(const Json &j) {
    require_version(j);
    const Json &inputs = detail::field(j, "inputs");
    TwowayFile out;
    out.inputs_a = detail::size_field(inputs, "alice");
    out.inputs_b = detail::size_field(inputs, "bob");
    for (const Json &t : detail::field(j, "turns")) {
        out.protocol.turns.push_back({detail::party_from(detail::field(t, "speaker")),
                                      static_cast<unsigned>(detail::size_field(t, "bits"))});
    }
    if (out.protocol.alice_bits() > 0) {
        out.protocol.alice = detail::table_function(std::make_shared<const detail::NextMessageTable>(
            detail::next_message_table(detail::field(j, "alice"), out.inputs_a)));
    }
    if (out.protocol.bob_bits() > 0) {
        out.protocol.bob = detail::table_function(std::make_shared<const detail::NextMessageTable>(
            detail::next_message_table(detail::field(j, "bob"), out.inputs_b)));
    }
    return out;
}

}  // namespace nlsim
