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

// One CSV row per estimation run. Column order is fixed:
//   scenario,command,epsilon,beta,seed,estimate,oracle,abs_error,bits,wall_ms
// Reals are written with 12 significant digits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "nlsim/error.hpp"

namespace nlsim {

inline constexpr const char *kRunRecordHeader =
    "scenario,command,epsilon,beta,seed,estimate,oracle,abs_error,bits,wall_ms";

struct RunRecord {
    std::string scenario;
    std::string command;
    double epsilon = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double oracle = 0.0;
    double abs_error = 0.0;
    std::uint64_t bits = 0;
    double wall_ms = 0.0;
};

inline std::string format_real(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

inline std::string to_csv(const RunRecord &r) {
    std::ostringstream os;
    os << r.scenario << ',' << r.command << ',' << format_real(r.epsilon) << ',' << format_real(r.beta) << ','
       << r.seed << ',' << format_real(r.estimate) << ',' << format_real(r.oracle) << ','
       << format_real(r.abs_error) << ',' << r.bits << ',' << format_real(r.wall_ms);
    return os.str();
}

/// abs_error is recomputed from estimate and oracle, whatever the file says.
inline RunRecord run_record_from_csv(const std::string &line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (cells.size() != 10) {
        fail(ErrorCode::InvalidFormat, "run record needs 10 columns, got " + std::to_string(cells.size()));
    }
    RunRecord r;
    try {
        r.scenario = cells[0];
        r.command = cells[1];
        r.epsilon = std::stod(cells[2]);
        r.beta = std::stod(cells[3]);
        r.seed = std::stoull(cells[4]);
        r.estimate = std::stod(cells[5]);
        r.oracle = std::stod(cells[6]);
        r.bits = std::stoull(cells[8]);
        r.wall_ms = std::stod(cells[9]);
    } catch (const std::logic_error &) {
        fail(ErrorCode::InvalidFormat, "unparseable run record: " + line);
    }
    r.abs_error = std::abs(r.estimate - r.oracle);
    return r;
}

inline void write_run_records(std::ostream &out, const std::vector<RunRecord> &rows) {
    out << kRunRecordHeader << '\n';
    for (const RunRecord &r : rows) {
        out << to_csv(r) << '\n';
    }
}

inline std::vector<RunRecord> read_run_records(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kRunRecordHeader) {
        fail(ErrorCode::InvalidFormat, "missing run record header");
    }
    std::vector<RunRecord> rows;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            rows.push_back(run_record_from_csv(line));
        }
    }
    return rows;
}

/// Order used for sweep output: (scenario, epsilon, seed), then beta.
inline void sort_run_records(std::vector<RunRecord> &rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const RunRecord &a, const RunRecord &b) {
        return std::tie(a.scenario, a.epsilon, a.seed, a.beta) < std::tie(b.scenario, b.epsilon, b.seed, b.beta);
    });
}

}  // namespace nlsim
