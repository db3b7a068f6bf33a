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

// Exact quantum-mechanical ground truth for every simulated quantity.

#pragma once

#include <cstdint>

#include "nlsim/bipartite.hpp"
#include "nlsim/quantum_protocol.hpp"

namespace nlsim {

inline constexpr std::size_t kMaxOracleDimension = std::size_t{1} << 12;

/// Measurement element Q, shared state E, and the isometries U: E_A -> N_A, V: E_B -> N_B.
struct Scenario {
    BipartiteOperator q;
    SchmidtState e;
    ComplexMatrix u;
    ComplexMatrix v;
};

inline void validate_scenario(const Scenario &s) {
    if (s.q.side() > kMaxOracleDimension) {
        fail(ErrorCode::SizeLimit, "operator side exceeds " + std::to_string(kMaxOracleDimension));
    }
    if (!validate_measurement_element(s.q, kStateTolerance)) {
        fail(ErrorCode::InvalidScenario, "Q is not a measurement element");
    }
    if (static_cast<std::size_t>(s.u.rows()) != s.q.dim_a() || static_cast<std::size_t>(s.u.cols()) != s.e.dim_a() ||
        static_cast<std::size_t>(s.v.rows()) != s.q.dim_b() || static_cast<std::size_t>(s.v.cols()) != s.e.dim_b()) {
        fail(ErrorCode::InvalidScenario, "embedding dimensions do not compose");
    }
    if (!is_isometry(s.u) || !is_isometry(s.v)) {
        fail(ErrorCode::InvalidScenario, "U and V must be isometries");
    }
}

/// (U (x) V)|E>
inline ComplexVector embedded_state(const Scenario &s) {
    const ComplexMatrix c = s.u * s.e.coefficient_matrix() * s.v.transpose();
    ComplexVector out(c.size());
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            out(a * c.cols() + b) = c(a, b);
        }
    }
    return out;
}

/// <E|(U (x) V)^dagger Q (U (x) V)|E>
inline double exact_probability(const Scenario &s) {
    validate_scenario(s);
    const ComplexVector e = embedded_state(s);
    const Complex p = e.dot(s.q.matrix() * e);
    if (std::abs(p.imag()) > 1e-10) {
        fail(ErrorCode::InvalidScenario, "probability has imaginary part " + std::to_string(p.imag()));
    }
    if (p.real() < -1e-9 || p.real() > 1.0 + 1e-9) {
        fail(ErrorCode::InvalidScenario, "probability " + std::to_string(p.real()) + " outside [0,1]");
    }
    return std::clamp(p.real(), 0.0, 1.0);
}

namespace detail {

// State indexed (a, c, b) -> (a*2 + c)*dimB + b.
inline void apply_alice_round(ComplexVector &psi, const ComplexMatrix &u, Eigen::Index da, Eigen::Index db) {
    ComplexVector local(2 * da);
    for (Eigen::Index b = 0; b < db; ++b) {
        for (Eigen::Index ac = 0; ac < 2 * da; ++ac) {
            local(ac) = psi(ac * db + b);
        }
        local = u * local;
        for (Eigen::Index ac = 0; ac < 2 * da; ++ac) {
            psi(ac * db + b) = local(ac);
        }
    }
}

inline void apply_bob_round(ComplexVector &psi, const ComplexMatrix &u, Eigen::Index da, Eigen::Index db) {
    ComplexVector local(2 * db);
    for (Eigen::Index a = 0; a < da; ++a) {
        for (Eigen::Index b = 0; b < db; ++b) {
            for (Eigen::Index c = 0; c < 2; ++c) {
                local(b * 2 + c) = psi((a * 2 + c) * db + b);
            }
        }
        local = u * local;
        for (Eigen::Index b = 0; b < db; ++b) {
            for (Eigen::Index c = 0; c < 2; ++c) {
                psi((a * 2 + c) * db + b) = local(b * 2 + c);
            }
        }
    }
}

}  // namespace detail

/// Direct state-vector simulation of every round and the final channel measurement.
inline double exact_acceptance_twoway(const QuantumProtocolSpec &spec, std::uint64_t x, std::uint64_t y) {
    validate_protocol(spec);
    if (2 * spec.alice_dim * spec.bob_dim > kMaxOracleDimension) {
        fail(ErrorCode::SizeLimit, "protocol state exceeds " + std::to_string(kMaxOracleDimension));
    }
    const auto da = static_cast<Eigen::Index>(spec.alice_dim);
    const auto db = static_cast<Eigen::Index>(spec.bob_dim);
    const ComplexVector phi = protocol_initial_state(spec, x, y);
    ComplexVector psi = ComplexVector::Zero(2 * da * db);
    for (Eigen::Index a = 0; a < da; ++a) {
        for (Eigen::Index b = 0; b < db; ++b) {
            psi((a * 2) * db + b) = phi(a * db + b);
        }
    }
    for (const ProtocolRound &round : spec.rounds) {
        if (round.party == Party::Alice) {
            detail::apply_alice_round(psi, round.unitary, da, db);
        } else {
            detail::apply_bob_round(psi, round.unitary, da, db);
        }
    }
    double accept = 0.0;
    for (Eigen::Index a = 0; a < da; ++a) {
        for (Eigen::Index b = 0; b < db; ++b) {
            accept += std::norm(psi((a * 2 + kAcceptOutcome) * db + b));
        }
    }
    return accept;
}

}  // namespace nlsim
