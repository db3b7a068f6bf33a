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

// In-process protocol execution with exact bit accounting.
//
// Parties are plain functions that only see their own inputs, public data and
// the shared coins; everything they hand to another party goes through a
// Channel, which serializes it and charges its exact bit length to the ledger.
//
// Wire format of an SMP message (one per party, sent to the referee):
//   norm level: unsigned fixed point, plan.norm_width() bits, MSB first
//   signs:      plan.reps bits, 1 = negative, packed 8 per byte MSB first
// The trailing partial byte is charged at its true bit count.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlsim/estimator.hpp"
#include "nlsim/norms.hpp"
#include "nlsim/oracle.hpp"
#include "nlsim/quantum_protocol.hpp"

namespace nlsim {

// ---------------------------------------------------------------------------
// Messages and accounting

class BitMessage {
  public:
    void put_bit(bool bit) {
        if (bits_ % 8 == 0) {
            bytes_.push_back(0);
        }
        if (bit) {
            bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
        }
        ++bits_;
    }

    void put_uint(std::uint64_t value, unsigned width) {
        if (width < 64 && (value >> width) != 0) {
            fail(ErrorCode::InvalidParameter, "value " + std::to_string(value) + " does not fit in " +
                                                  std::to_string(width) + " bits");
        }
        for (unsigned k = width; k-- > 0;) {
            put_bit(((value >> k) & 1u) != 0);
        }
    }

    bool bit(std::size_t index) const {
        if (index >= bits_) {
            fail(ErrorCode::MalformedProtocol, "read past end of message");
        }
        return (bytes_[index / 8] & (0x80u >> (index % 8))) != 0;
    }

    std::size_t bit_length() const noexcept {
        return bits_;
    }
    const std::vector<std::uint8_t> &bytes() const noexcept {
        return bytes_;
    }

  private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

class BitReader {
  public:
    explicit BitReader(const BitMessage &msg) : msg_(msg) {
    }

    bool get_bit() {
        return msg_.bit(pos_++);
    }

    std::uint64_t get_uint(unsigned width) {
        std::uint64_t v = 0;
        for (unsigned k = 0; k < width; ++k) {
            v = (v << 1) | (get_bit() ? 1u : 0u);
        }
        return v;
    }

    std::size_t remaining() const noexcept {
        return msg_.bit_length() - pos_;
    }

  private:
    const BitMessage &msg_;
    std::size_t pos_ = 0;
};

enum class Direction { AliceToBob, BobToAlice };

struct BitLedger {
    std::uint64_t alice_to_referee = 0;
    std::uint64_t bob_to_referee = 0;
    std::vector<std::pair<Direction, std::uint64_t>> alice_bob_roundtrips;
    std::uint64_t shared_random_bits_drawn = 0;  // informational, never charged

    std::uint64_t total() const {
        std::uint64_t sum = alice_to_referee + bob_to_referee;
        for (const auto &[dir, bits] : alice_bob_roundtrips) {
            sum += bits;
        }
        return sum;
    }

    BitLedger &operator+=(const BitLedger &other) {
        alice_to_referee += other.alice_to_referee;
        bob_to_referee += other.bob_to_referee;
        alice_bob_roundtrips.insert(alice_bob_roundtrips.end(), other.alice_bob_roundtrips.begin(),
                                    other.alice_bob_roundtrips.end());
        shared_random_bits_drawn += other.shared_random_bits_drawn;
        return *this;
    }
};

struct TranscriptEntry {
    Party from;
    Party to;
    std::size_t bits;
};

/// The only way messages move between parties.
class Channel {
  public:
    const BitMessage &send(Party from, Party to, BitMessage msg) {
        const std::size_t bits = msg.bit_length();
        if (to == Party::Referee) {
            (from == Party::Alice ? ledger_.alice_to_referee : ledger_.bob_to_referee) += bits;
        } else if (from == Party::Alice && to == Party::Bob) {
            ledger_.alice_bob_roundtrips.emplace_back(Direction::AliceToBob, bits);
        } else if (from == Party::Bob && to == Party::Alice) {
            ledger_.alice_bob_roundtrips.emplace_back(Direction::BobToAlice, bits);
        } else {
            fail(ErrorCode::InvalidProtocol, "unsupported message route");
        }
        log_.push_back({from, to, bits});
        delivered_.push_back(std::move(msg));
        return delivered_.back();
    }

    void note_shared_bits(std::uint64_t bits) {
        ledger_.shared_random_bits_drawn += bits;
    }

    const BitLedger &ledger() const noexcept {
        return ledger_;
    }
    const std::vector<TranscriptEntry> &log() const noexcept {
        return log_;
    }

  private:
    BitLedger ledger_;
    std::vector<TranscriptEntry> log_;
    std::deque<BitMessage> delivered_;
};

// ---------------------------------------------------------------------------
// SMP estimation of <psi_A|psi_B>

/// Each party computes its own psi from its private input plus public data.
struct SmpScenario {
    std::function<ComplexVector()> alice_vector;
    std::function<ComplexVector()> bob_vector;
    bool is_probability = true;
};

struct SmpResult {
    double estimate = 0.0;
    BitLedger ledger;
    std::vector<TranscriptEntry> transcript;
};

/// 2 * (norm width + reps)
inline std::uint64_t smp_charged_bits(const EstimationPlan &plan) {
    return 2 * (static_cast<std::uint64_t>(plan.norm_width()) + plan.reps);
}

namespace detail {

inline BitMessage smp_party_message(const ComplexVector &psi, const EstimationPlan &plan, const char *who,
                                    std::uint64_t &uniforms) {
    const RealVector v = embed_real(psi);
    const double norm = v.norm();
    require_within_cap(norm, plan, who);
    BitMessage msg;
    msg.put_uint(plan.quantize(norm), plan.norm_width());
    SharedDirections directions(plan);
    for (std::uint64_t rep = 0; rep < plan.reps; ++rep) {
        msg.put_bit(directions.negative_sign(rep, v));
    }
    uniforms += directions.uniforms_drawn();
    return msg;
}

}  // namespace detail

inline SmpResult run_smp(const SmpScenario &scenario, const EstimationPlan &plan) {
    if (plan.reps == 0) {
        fail(ErrorCode::InvalidParameter, "plan has zero repetitions");
    }
    const ComplexVector psi_a = scenario.alice_vector();
    const ComplexVector psi_b = scenario.bob_vector();
    if (psi_a.size() != psi_b.size()) {
        fail(ErrorCode::ShapeMismatch, "parties disagree on vector length");
    }
    Channel channel;
    std::uint64_t uniforms = 0;
    const BitMessage &from_alice =
        channel.send(Party::Alice, Party::Referee, detail::smp_party_message(psi_a, plan, "Alice", uniforms));
    const BitMessage &from_bob =
        channel.send(Party::Bob, Party::Referee, detail::smp_party_message(psi_b, plan, "Bob", uniforms));
    channel.note_shared_bits(64 * uniforms);

    BitReader ra(from_alice);
    BitReader rb(from_bob);
    const std::uint64_t level_a = ra.get_uint(plan.norm_width());
    const std::uint64_t level_b = rb.get_uint(plan.norm_width());
    std::uint64_t mismatches = 0;
    for (std::uint64_t rep = 0; rep < plan.reps; ++rep) {
        mismatches += ra.get_bit() != rb.get_bit() ? 1 : 0;
    }
    const double raw = combine_estimate(plan, level_a, level_b, mismatches);

    SmpResult out;
    out.estimate = scenario.is_probability ? clamp_probability(raw) : raw;
    out.ledger = channel.ledger();
    out.transcript = channel.log();
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic twoway classical protocols and their SMP conversion

using Bits = std::vector<bool>;

struct ProtocolTurn {
    Party speaker = Party::Alice;
    unsigned bits = 1;
};

/// Next-message function: (own input, all bits heard so far from the other
/// party, shared seed, turn index) -> the bits sent this turn.
using NextMessage = std::function<Bits(std::uint64_t, const Bits &, std::uint64_t, std::size_t)>;

struct TwowayProtocol {
    std::vector<ProtocolTurn> turns;
    NextMessage alice;
    NextMessage bob;

    unsigned bits_of(Party p) const {
        unsigned n = 0;
        for (const ProtocolTurn &t : turns) {
            n += t.speaker == p ? t.bits : 0;
        }
        return n;
    }
    unsigned alice_bits() const {
        return bits_of(Party::Alice);
    }
    unsigned bob_bits() const {
        return bits_of(Party::Bob);
    }
};

inline constexpr unsigned kMaxTwowayPartyBits = 16;

struct TwowayRun {
    bool output = false;
    Bits transcript;  // every bit in send order
    BitLedger ledger;
};

namespace detail {

inline void validate_twoway(const TwowayProtocol &p) {
    if (p.turns.empty()) {
        fail(ErrorCode::MalformedProtocol, "protocol has no turns");
    }
    if ((p.alice_bits() > 0 && !p.alice) || (p.bob_bits() > 0 && !p.bob)) {
        fail(ErrorCode::MalformedProtocol, "missing next-message function");
    }
    for (const ProtocolTurn &t : p.turns) {
        if (t.speaker == Party::Referee || t.bits == 0) {
            fail(ErrorCode::MalformedProtocol, "turns must be non-empty messages from Alice or Bob");
        }
    }
    if (p.alice_bits() > kMaxTwowayPartyBits || p.bob_bits() > kMaxTwowayPartyBits) {
        fail(ErrorCode::SizeLimit, "twoway party message too long for SMP conversion");
    }
}

inline Bits checked_turn(const NextMessage &fn, std::uint64_t input, const Bits &heard, std::uint64_t seed,
                         std::size_t turn, unsigned expected) {
    Bits out = fn(input, heard, seed, turn);
    if (out.size() != expected) {
        fail(ErrorCode::MalformedProtocol, "turn " + std::to_string(turn) + " produced " +
                                               std::to_string(out.size()) + " bits, expected " +
                                               std::to_string(expected));
    }
    return out;
}

inline Bits to_bits(std::uint64_t value, unsigned width) {
    Bits out(width);
    for (unsigned k = 0; k < width; ++k) {
        out[k] = ((value >> (width - 1 - k)) & 1u) != 0;
    }
    return out;
}

inline std::uint64_t from_bits(const Bits &bits) {
    std::uint64_t v = 0;
    for (bool b : bits) {
        v = (v << 1) | (b ? 1u : 0u);
    }
    return v;
}

// One party's full message string, assuming the other party's whole message is `other`.
inline Bits hypothetical_message(const TwowayProtocol &p, Party self, std::uint64_t input, const Bits &other,
                                 std::uint64_t seed) {
    Bits mine;
    std::size_t heard = 0;
    for (std::size_t turn = 0; turn < p.turns.size(); ++turn) {
        const ProtocolTurn &t = p.turns[turn];
        if (t.speaker == self) {
            const Bits prefix(other.begin(), other.begin() + static_cast<std::ptrdiff_t>(heard));
            const Bits sent = checked_turn(self == Party::Alice ? p.alice : p.bob, input, prefix, seed, turn, t.bits);
            mine.insert(mine.end(), sent.begin(), sent.end());
        } else {
            heard += t.bits;
        }
    }
    return mine;
}

inline Bits interleave(const TwowayProtocol &p, const Bits &alice, const Bits &bob) {
    Bits out;
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (const ProtocolTurn &t : p.turns) {
        for (unsigned k = 0; k < t.bits; ++k) {
            out.push_back(t.speaker == Party::Alice ? alice[ia++] : bob[ib++]);
        }
    }
    return out;
}

}  // namespace detail

/// Runs the interactive protocol, charging every turn to the Alice-Bob ledger.
inline TwowayRun run_twoway(const TwowayProtocol &p, std::uint64_t x, std::uint64_t y, std::uint64_t seed) {
    detail::validate_twoway(p);
    Channel channel;
    Bits heard_by_alice;
    Bits heard_by_bob;
    Bits transcript;
    for (std::size_t turn = 0; turn < p.turns.size(); ++turn) {
        const ProtocolTurn &t = p.turns[turn];
        const bool alice_speaks = t.speaker == Party::Alice;
        const Bits sent = alice_speaks ? detail::checked_turn(p.alice, x, heard_by_alice, seed, turn, t.bits)
                                       : detail::checked_turn(p.bob, y, heard_by_bob, seed, turn, t.bits);
        BitMessage msg;
        for (bool b : sent) {
            msg.put_bit(b);
        }
        const BitMessage &delivered =
            channel.send(t.speaker, alice_speaks ? Party::Bob : Party::Alice, std::move(msg));
        Bits &receiver = alice_speaks ? heard_by_bob : heard_by_alice;
        for (std::size_t k = 0; k < delivered.bit_length(); ++k) {
            receiver.push_back(delivered.bit(k));
            transcript.push_back(delivered.bit(k));
        }
    }
    return {transcript.back(), transcript, channel.ledger()};
}

/// Referee side of the conversion. `alice_table[s]` is Alice's full message
/// assuming Bob sends s (as an integer, first bit most significant); likewise
/// `bob_table`. Returns the unique consistent transcript.
inline Bits reconstruct_transcript(const TwowayProtocol &p, const std::vector<std::uint64_t> &alice_table,
                                   const std::vector<std::uint64_t> &bob_table) {
    const unsigned ba = p.alice_bits();
    const unsigned bb = p.bob_bits();
    if (alice_table.size() != (std::size_t{1} << bb) || bob_table.size() != (std::size_t{1} << ba)) {
        fail(ErrorCode::MalformedProtocol, "table sizes do not match the protocol shape");
    }
    std::size_t found = 0;
    Bits transcript;
    for (std::uint64_t s = 0; s < alice_table.size(); ++s) {
        const std::uint64_t a = alice_table[s];
        if (a >= bob_table.size()) {
            fail(ErrorCode::MalformedProtocol, "Alice table entry out of range");
        }
        if (bob_table[a] == s) {
            ++found;
            transcript = detail::interleave(p, detail::to_bits(a, ba), detail::to_bits(s, bb));
        }
    }
    if (found != 1) {
        fail(ErrorCode::MalformedProtocol, std::to_string(found) + " consistent transcripts, expected exactly 1");
    }
    return transcript;
}

struct SmpConversion {
    bool output = false;
    Bits transcript;
    BitLedger ledger;
};

/// 2^{bB} * bA + 2^{bA} * bB
inline std::uint64_t twoway_smp_charged_bits(const TwowayProtocol &p) {
    const std::uint64_t ba = p.alice_bits();
    const std::uint64_t bb = p.bob_bits();
    return (std::uint64_t{1} << bb) * ba + (std::uint64_t{1} << ba) * bb;
}

/// Each party sends its response to every possible message string of the
/// other; the referee finds the consistent pair and outputs its last bit.
inline SmpConversion twoway_to_smp(const TwowayProtocol &p, std::uint64_t x, std::uint64_t y, std::uint64_t seed) {
    detail::validate_twoway(p);
    const unsigned ba = p.alice_bits();
    const unsigned bb = p.bob_bits();
    Channel channel;

    BitMessage alice_msg;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << bb); ++s) {
        for (bool b : detail::hypothetical_message(p, Party::Alice, x, detail::to_bits(s, bb), seed)) {
            alice_msg.put_bit(b);
        }
    }
    BitMessage bob_msg;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << ba); ++a) {
        for (bool b : detail::hypothetical_message(p, Party::Bob, y, detail::to_bits(a, ba), seed)) {
            bob_msg.put_bit(b);
        }
    }
    const BitMessage &at_referee_a = channel.send(Party::Alice, Party::Referee, std::move(alice_msg));
    const BitMessage &at_referee_b = channel.send(Party::Bob, Party::Referee, std::move(bob_msg));

    BitReader ra(at_referee_a);
    BitReader rb(at_referee_b);
    std::vector<std::uint64_t> alice_table(std::size_t{1} << bb);
    std::vector<std::uint64_t> bob_table(std::size_t{1} << ba);
    for (auto &entry : alice_table) {
        entry = ra.get_uint(ba);
    }
    for (auto &entry : bob_table) {
        entry = rb.get_uint(bb);
    }
    Bits transcript = reconstruct_transcript(p, alice_table, bob_table);
    const bool output = transcript.back();
    return {output, std::move(transcript), channel.ledger()};
}

/// Equality on k-bit inputs. Alice reveals x bit by bit, masked by shared
/// coins, and stops (sends 0) once Bob has reported a mismatch; Bob answers
/// each bit with the running equality flag. bA = bB = k; last bit is [x == y].
inline TwowayProtocol equality_protocol(unsigned input_bits) {
    if (input_bits == 0 || input_bits > kMaxTwowayPartyBits) {
        fail(ErrorCode::InvalidParameter, "equality protocol input width out of range");
    }
    auto mask_bit = [](std::uint64_t seed, unsigned k) { return (mix64(seed ^ 0xe9) >> k & 1u) != 0; };
    auto input_bit = [input_bits](std::uint64_t v, unsigned k) { return ((v >> (input_bits - 1 - k)) & 1u) != 0; };
    TwowayProtocol p;
    for (unsigned k = 0; k < input_bits; ++k) {
        p.turns.push_back({Party::Alice, 1});
        p.turns.push_back({Party::Bob, 1});
    }
    p.alice = [=](std::uint64_t x, const Bits &heard, std::uint64_t seed, std::size_t turn) -> Bits {
        const auto k = static_cast<unsigned>(turn / 2);
        if (k > 0 && !heard.back()) {
            return {false};
        }
        return {input_bit(x, k) != mask_bit(seed, k)};
    };
    p.bob = [=](std::uint64_t y, const Bits &heard, std::uint64_t seed, std::size_t) -> Bits {
        bool equal = true;
        for (unsigned k = 0; k < heard.size(); ++k) {
            equal = equal && heard[k] == (input_bit(y, k) != mask_bit(seed, k));
        }
        return {equal};
    };
    return p;
}

// ---------------------------------------------------------------------------
// Yao decomposition of interactive quantum protocols

struct YaoCompilation {
    std::vector<ComplexMatrix> alice_ops;  // A_h, h in {0,1}^{q-1}, first transcript bit most significant
    std::vector<ComplexMatrix> bob_ops;    // B_h
    ComplexMatrix p;                       // sum_h A_h (x) B_h on H_A (x) H_B
    OperatorDecomposition decomposition;   // the same sum, stored as A_h (x) (B_h^dagger)^dagger
    std::size_t qubits = 0;
};

namespace detail {

// (I (x) <out|) U (I (x) |in>), channel the least significant qubit.
inline ComplexMatrix channel_block(const ComplexMatrix &u, int out, int in) {
    const Eigen::Index d = u.rows() / 2;
    ComplexMatrix block(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            block(r, c) = u(r * 2 + out, c * 2 + in);
        }
    }
    return block;
}

}  // namespace detail

/// A_h and B_h are products of each party's round blocks along the channel
/// path 0 -> h_1 -> ... -> h_{q-1} -> 0; the final 0 is the accepting outcome.
inline YaoCompilation yao_compile(const QuantumProtocolSpec &spec) {
    validate_protocol(spec);
    const std::size_t q = spec.qubits();
    if (q > kMaxYaoQubits) {
        fail(ErrorCode::SizeLimit, "Yao compilation supports at most " + std::to_string(kMaxYaoQubits) + " qubits");
    }
    const auto da = static_cast<Eigen::Index>(spec.alice_dim);
    const auto db = static_cast<Eigen::Index>(spec.bob_dim);
    const std::size_t paths = std::size_t{1} << (q - 1);
    std::vector<ComplexMatrix> alice_ops;
    std::vector<ComplexMatrix> bob_ops;
    std::vector<DecompositionTerm> terms;
    ComplexMatrix p = ComplexMatrix::Zero(da * db, da * db);
    for (std::size_t h = 0; h < paths; ++h) {
        ComplexMatrix a = ComplexMatrix::Identity(da, da);
        ComplexMatrix b = ComplexMatrix::Identity(db, db);
        int previous = 0;
        for (std::size_t k = 0; k < q; ++k) {
            const int next = k + 1 == q ? kAcceptOutcome : static_cast<int>((h >> (q - 2 - k)) & 1u);
            const ComplexMatrix block = detail::channel_block(spec.rounds[k].unitary, next, previous);
            if (spec.rounds[k].party == Party::Alice) {
                a = block * a;
            } else {
                b = block * b;
            }
            previous = next;
        }
        p += kron(a, b);
        terms.push_back({a, b.adjoint()});
        alice_ops.push_back(std::move(a));
        bob_ops.push_back(std::move(b));
    }
    OperatorDecomposition decomposition(spec.alice_dim, spec.bob_dim, std::move(terms));
    return {std::move(alice_ops), std::move(bob_ops), std::move(p), std::move(decomposition), q};
}

/// ||P |Phi>||^2
inline double compiled_acceptance(const YaoCompilation &c, const ComplexVector &phi) {
    return (c.p * phi).squaredNorm();
}

/// P^dagger P = sum_{h,h'} (A_{h'}^dagger A_h) (x) (B_{h'}^dagger B_h), written as
/// terms (A_{h'}^dagger A_h, B_h^dagger B_{h'}) of the A (x) B^dagger form.
inline OperatorDecomposition expand_gram(const YaoCompilation &c) {
    std::vector<DecompositionTerm> terms;
    const std::size_t n = c.alice_ops.size();
    terms.reserve(n * n);
    for (std::size_t hp = 0; hp < n; ++hp) {
        for (std::size_t h = 0; h < n; ++h) {
            terms.push_back({c.alice_ops[hp].adjoint() * c.alice_ops[h], c.bob_ops[h].adjoint() * c.bob_ops[hp]});
        }
    }
    return OperatorDecomposition(static_cast<std::size_t>(c.alice_ops.front().rows()),
                                 static_cast<std::size_t>(c.bob_ops.front().rows()), std::move(terms));
}

/// Protocol whose parties hold an input register and one half of |E>:
/// H_A = X_A (x) E_A, H_B = X_B (x) E_B, |Phi_{x,y}> = (U_x (x) U_y)|E>.
struct EntangledProtocol {
    QuantumProtocolSpec spec;
    SchmidtState entanglement;
    std::size_t input_dim_a = 1;
    std::size_t input_dim_b = 1;
};

/// Builds the spec with alice_dim = input_dim_a * dim E_A and the matching initial state.
inline EntangledProtocol make_entangled_protocol(std::vector<ProtocolRound> rounds, SchmidtState entanglement,
                                                 std::size_t input_dim_a, std::size_t input_dim_b) {
    QuantumProtocolSpec spec;
    spec.alice_dim = input_dim_a * entanglement.dim_a();
    spec.bob_dim = input_dim_b * entanglement.dim_b();
    spec.rounds = std::move(rounds);
    const ComplexMatrix coeff = entanglement.coefficient_matrix();
    const std::size_t ea = entanglement.dim_a();
    const std::size_t eb = entanglement.dim_b();
    spec.initial_state = [=](std::uint64_t x, std::uint64_t y) {
        const ComplexMatrix c =
            input_embedding(input_dim_a, x, ea) * coeff * input_embedding(input_dim_b, y, eb).transpose();
        ComplexVector v(c.size());
        for (Eigen::Index a = 0; a < c.rows(); ++a) {
            for (Eigen::Index b = 0; b < c.cols(); ++b) {
                v(a * c.cols() + b) = c(a, b);
            }
        }
        return v;
    };
    return {std::move(spec), std::move(entanglement), input_dim_a, input_dim_b};
}

/// Plan with the a-priori cap C = 2^{q-1}; depends on q alone, never on dim |E>.
inline EstimationPlan twoway_quantum_plan(std::size_t qubits, double epsilon, double beta, std::uint64_t seed) {
    return plan(epsilon, beta, std::ldexp(1.0, static_cast<int>(qubits) - 1), seed);
}

/// Estimates the acceptance probability ||P|Phi_{x,y}>||^2 as the measurement
/// element P^dagger P on (U_x (x) U_y)|E>, through run_smp.
inline SmpResult simulate_twoway_quantum(const EntangledProtocol &protocol, std::uint64_t x, std::uint64_t y,
                                         const EstimationPlan &plan) {
    const YaoCompilation compiled = yao_compile(protocol.spec);
    const OperatorDecomposition gram = balance(expand_gram(compiled));
    const SchmidtState &e = protocol.entanglement;
    SmpScenario scenario;
    scenario.alice_vector = [&] {
        return build_psi_alice(gram, e, input_embedding(protocol.input_dim_a, x, e.dim_a()));
    };
    scenario.bob_vector = [&] {
        return build_psi_bob(gram, e, input_embedding(protocol.input_dim_b, y, e.dim_b()));
    };
    return run_smp(scenario, plan);
}

}  // namespace nlsim
