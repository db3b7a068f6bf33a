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

// Two-party interactive quantum protocols with a one-qubit channel.
//
// Round k: the party holding the channel applies its unitary to
// (own register) (x) (channel), channel as the least significant qubit, then
// sends the channel qubit across. Alice moves first and the channel starts in
// |0>, the accepting state. After the last round the receiver measures the
// channel; outcome 0 accepts, so a protocol that never touches it accepts.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nlsim/matcore.hpp"

namespace nlsim {

enum class Party { Alice, Bob, Referee };

inline const char *party_name(Party p) {
    switch (p) {
        case Party::Alice: return "alice";
        case Party::Bob: return "bob";
        case Party::Referee: return "referee";
    }
    return "?";
}

struct ProtocolRound {
    Party party = Party::Alice;
    ComplexMatrix unitary;
};

struct QuantumProtocolSpec {
    std::size_t alice_dim = 1;
    std::size_t bob_dim = 1;
    std::vector<ProtocolRound> rounds;
    /// |Phi_{x,y}> on H_A (x) H_B, before the channel qubit is attached.
    std::function<ComplexVector(std::uint64_t, std::uint64_t)> initial_state;

    std::size_t qubits() const noexcept {
        return rounds.size();
    }
};

inline constexpr std::size_t kMaxYaoQubits = 5;
inline constexpr int kAcceptOutcome = 0;

inline void validate_protocol(const QuantumProtocolSpec &spec) {
    if (spec.alice_dim == 0 || spec.bob_dim == 0) {
        fail(ErrorCode::InvalidProtocol, "party registers must be non-empty");
    }
    if (spec.rounds.empty()) {
        fail(ErrorCode::InvalidProtocol, "protocol communicates no qubits");
    }
    for (std::size_t k = 0; k < spec.rounds.size(); ++k) {
        const ProtocolRound &round = spec.rounds[k];
        const Party expected = k % 2 == 0 ? Party::Alice : Party::Bob;
        if (round.party != expected) {
            fail(ErrorCode::InvalidProtocol, "rounds must alternate starting with Alice");
        }
        const std::size_t dim = 2 * (expected == Party::Alice ? spec.alice_dim : spec.bob_dim);
        if (static_cast<std::size_t>(round.unitary.rows()) != dim || !is_unitary(round.unitary)) {
            fail(ErrorCode::InvalidProtocol, "round " + std::to_string(k) + " is not a unitary on register (x) channel");
        }
    }
    if (!spec.initial_state) {
        fail(ErrorCode::InvalidProtocol, "missing initial state builder");
    }
}

inline ComplexVector protocol_initial_state(const QuantumProtocolSpec &spec, std::uint64_t x, std::uint64_t y) {
    ComplexVector phi = spec.initial_state(x, y);
    if (static_cast<std::size_t>(phi.size()) != spec.alice_dim * spec.bob_dim) {
        fail(ErrorCode::InvalidProtocol, "initial state has wrong dimension");
    }
    if (std::abs(phi.norm() - 1.0) > kStateTolerance) {
        fail(ErrorCode::InvalidProtocol, "initial state is not normalized");
    }
    return phi;
}

/// U_x : c -> |x> (x) c, the isometry E_A -> X_A (x) E_A that loads an input.
inline ComplexMatrix input_embedding(std::size_t input_dim, std::uint64_t x, std::size_t carrier_dim) {
    if (x >= input_dim) {
        fail(ErrorCode::InvalidParameter, "input " + std::to_string(x) + " out of range");
    }
    return kron(basis_vector(input_dim, static_cast<std::size_t>(x)),
                ComplexMatrix::Identity(static_cast<Eigen::Index>(carrier_dim), static_cast<Eigen::Index>(carrier_dim)));
}

}  // namespace nlsim
