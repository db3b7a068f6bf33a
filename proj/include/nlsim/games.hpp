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

// Measurement games: a shared state plus a family of local measurements per
// party. Each measurement is an isometry followed by a projective measurement.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlsim/harness.hpp"
#include "nlsim/oracle.hpp"

namespace nlsim {

inline constexpr double kPovmTolerance = 1e-8;
inline constexpr double kProjectorTolerance = 1e-9;
inline constexpr std::size_t kMaxGameOutcomes = 64;

struct Outcome {
    std::string label;
    ComplexMatrix projector;
};

struct Povm {
    ComplexMatrix isometry;  // E side -> measured space
    std::vector<Outcome> outcomes;
};

struct MeasurementGame {
    SchmidtState state;
    std::vector<Povm> alice;
    std::vector<Povm> bob;
};

inline void validate_povm(const Povm &m, std::size_t source_dim, const std::string &who) {
    if (m.outcomes.empty()) {
        fail(ErrorCode::InvalidScenario, who + " measurement has no outcomes");
    }
    if (static_cast<std::size_t>(m.isometry.cols()) != source_dim || !is_isometry(m.isometry)) {
        fail(ErrorCode::InvalidScenario, who + " measurement isometry is invalid");
    }
    const Eigen::Index d = m.isometry.rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const Outcome &o : m.outcomes) {
        if (o.projector.rows() != d || o.projector.cols() != d || !all_finite(o.projector)) {
            fail(ErrorCode::InvalidScenario, who + " outcome '" + o.label + "' has wrong shape");
        }
        if ((o.projector * o.projector - o.projector).norm() > kProjectorTolerance ||
            !is_hermitian(o.projector, kProjectorTolerance)) {
            fail(ErrorCode::InvalidScenario, who + " outcome '" + o.label + "' is not a projector");
        }
        sum += o.projector;
    }
    const ComplexMatrix effect = m.isometry.adjoint() * sum * m.isometry;
    if ((effect - ComplexMatrix::Identity(effect.rows(), effect.cols())).norm() > kPovmTolerance) {
        fail(ErrorCode::InvalidScenario, who + " measurement effects do not sum to the identity");
    }
}

inline void validate_game(const MeasurementGame &g) {
    if (g.alice.empty() || g.bob.empty()) {
        fail(ErrorCode::InvalidScenario, "each party needs at least one measurement");
    }
    for (const Povm &m : g.alice) {
        validate_povm(m, g.state.dim_a(), "Alice");
    }
    for (const Povm &m : g.bob) {
        validate_povm(m, g.state.dim_b(), "Bob");
    }
}

/// Joint distribution, row-major over (v, v'): index v * |V_B| + v'.
struct JointDistribution {
    std::size_t outcomes_a = 0;
    std::size_t outcomes_b = 0;
    std::vector<double> p;

    double operator()(std::size_t v, std::size_t w) const {
        return p[v * outcomes_b + w];
    }
};

inline double l1_distance(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size()) {
        fail(ErrorCode::ShapeMismatch, "distributions differ in support size");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        d += std::abs(x[k] - y[k]);
    }
    return d;
}

namespace detail {

inline std::pair<const Povm &, const Povm &> chosen(const MeasurementGame &g, std::size_t choice_a,
                                                    std::size_t choice_b) {
    if (choice_a >= g.alice.size() || choice_b >= g.bob.size()) {
        fail(ErrorCode::UnknownMeasurement, "measurement choice (" + std::to_string(choice_a) + ", " +
                                                std::to_string(choice_b) + ") out of range");
    }
    return {g.alice[choice_a], g.bob[choice_b]};
}

}  // namespace detail

/// p(v, v') = || P_A^v U C V^T (P_B^{v'})^T ||_F^2 with C the coefficient matrix of |E>.
inline JointDistribution oracle_distribution(const MeasurementGame &g, std::size_t choice_a, std::size_t choice_b) {
    const auto [ma, mb] = detail::chosen(g, choice_a, choice_b);
    const ComplexMatrix c = ma.isometry * g.state.coefficient_matrix() * mb.isometry.transpose();
    JointDistribution out{ma.outcomes.size(), mb.outcomes.size(), {}};
    out.p.reserve(out.outcomes_a * out.outcomes_b);
    for (const Outcome &va : ma.outcomes) {
        const ComplexMatrix left = va.projector * c;
        for (const Outcome &vb : mb.outcomes) {
            out.p.push_back((left * vb.projector.transpose()).squaredNorm());
        }
    }
    return out;
}

/// Clip negatives to zero and renormalize. Aborts when the clipped total is below 1/2.
inline std::vector<double> clean_distribution(const std::vector<double> &raw) {
    std::vector<double> out(raw.size());
    double total = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out[k] = std::max(raw[k], 0.0);
        total += out[k];
    }
    if (!(total >= 0.5)) {
        fail(ErrorCode::EstimationFailure, "estimated probabilities sum to " + std::to_string(total));
    }
    for (double &x : out) {
        x /= total;
    }
    return out;
}

/// Inverse-CDF draw; falls back to the last nonzero cell on round-off.
inline std::size_t sample_index(const std::vector<double> &dist, double u) {
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] > 0.0) {
            last = k;
        }
        acc += dist[k];
        if (u < acc) {
            return k;
        }
    }
    return last;
}

struct GameRun {
    std::size_t outcome_a = 0;
    std::size_t outcome_b = 0;
    std::vector<double> cleaned;
    std::vector<double> raw;
    BitLedger ledger;
};

/// Per-outcome plan: epsilon / (2m), beta / m, C = 1, stream k + 1.
inline EstimationPlan game_outcome_plan(double epsilon, double beta, std::size_t m, std::size_t k,
                                        std::uint64_t seed) {
    return plan(epsilon / (2.0 * static_cast<double>(m)), beta / static_cast<double>(m), 1.0, seed, k + 1);
}

inline GameRun simulate_game(const MeasurementGame &g, std::size_t choice_a, std::size_t choice_b, double epsilon,
                             double beta, std::uint64_t seed) {
    const auto [ma, mb] = detail::chosen(g, choice_a, choice_b);
    const std::size_t na = ma.outcomes.size();
    const std::size_t nb = mb.outcomes.size();
    const std::size_t m = na * nb;
    if (m > kMaxGameOutcomes) {
        fail(ErrorCode::SizeLimit, "game has " + std::to_string(m) + " joint outcomes, limit " +
                                       std::to_string(kMaxGameOutcomes));
    }
    GameRun out;
    out.raw.resize(m);
    for (std::size_t v = 0; v < na; ++v) {
        for (std::size_t w = 0; w < nb; ++w) {
            const std::size_t k = v * nb + w;
            // Projectors are Hermitian, so B_t^dagger = P_B^{v'} gives the term P_A^v (x) P_B^{v'}.
            const OperatorDecomposition single(static_cast<std::size_t>(ma.isometry.rows()),
                                               static_cast<std::size_t>(mb.isometry.rows()),
                                               {{ma.outcomes[v].projector, mb.outcomes[w].projector}});
            SmpScenario scenario;
            scenario.alice_vector = [&] { return build_psi_alice(single, g.state, ma.isometry); };
            scenario.bob_vector = [&] { return build_psi_bob(single, g.state, mb.isometry); };
            scenario.is_probability = false;  // cleanup handles the range
            const SmpResult r = run_smp(scenario, game_outcome_plan(epsilon, beta, m, k, seed));
            out.raw[k] = r.estimate;
            out.ledger += r.ledger;
        }
    }
    out.cleaned = clean_distribution(out.raw);
    CoinStream coins(seed, 0, 0);
    const std::size_t k = sample_index(out.cleaned, coins.uniform());
    out.ledger.shared_random_bits_drawn += 64 * coins.draws();
    out.outcome_a = k / nb;
    out.outcome_b = k % nb;
    return out;
}

}  // namespace nlsim
