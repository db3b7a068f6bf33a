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

// Random-hyperplane estimation of <psi_A|psi_B> from shared coins.
//
// Error budget for target epsilon and norm cap C:
//   * each norm is rounded to a multiple of norm_quantum = eps / (6 C max(C,1)),
//     costing at most C*norm_quantum <= eps/6 in the product of norms;
//   * the disagreement frequency is within eta = eps / (3 pi C^2) of theta/pi
//     with probability >= 1 - beta (Hoeffding), costing at most pi*eta*C^2 = eps/3.

#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "nlsim/reduction.hpp"
#include "nlsim/shared_coins.hpp"

namespace nlsim {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct EstimationPlan {
    double epsilon = 0.0;
    double beta = 0.0;
    double cap = 1.0;  // C >= max(||psi_A||, ||psi_B||)
    std::uint64_t reps = 0;
    double norm_quantum = 0.0;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t stream = 0;

    /// Bits for one quantized norm: ceil(log2(C / norm_quantum)) + 1.
    unsigned norm_width() const {
        return static_cast<unsigned>(std::ceil(std::log2(cap / norm_quantum))) + 1;
    }

    std::uint64_t quantize(double norm) const {
        return static_cast<std::uint64_t>(std::llround(norm / norm_quantum));
    }

    double dequantize(std::uint64_t level) const {
        return static_cast<double>(level) * norm_quantum;
    }
};

inline double frequency_tolerance(double epsilon, double cap) {
    return epsilon / (3.0 * std::numbers::pi * cap * cap);
}

inline EstimationPlan plan(double epsilon, double beta, double cap, std::uint64_t seed = kDefaultSeed,
                           std::uint64_t stream = 0) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        fail(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        fail(ErrorCode::InvalidParameter, "beta must lie in (0, 1)");
    }
    if (!(cap >= 1.0) || !std::isfinite(cap)) {
        fail(ErrorCode::InvalidParameter, "norm cap C must be >= 1");
    }
    const double eta = frequency_tolerance(epsilon, cap);
    EstimationPlan p;
    p.epsilon = epsilon;
    p.beta = beta;
    p.cap = cap;
    p.reps = static_cast<std::uint64_t>(std::ceil(std::log(2.0 / beta) / (2.0 * eta * eta)));
    p.norm_quantum = epsilon / (6.0 * cap * std::max(cap, 1.0));
    p.seed = seed;
    p.stream = stream;
    return p;
}

/// The shared Gaussian direction for repetition `rep`, as seen by either party.
class SharedDirections {
  public:
    explicit SharedDirections(const EstimationPlan &plan) : seed_(plan.seed), stream_(plan.stream) {
    }

    /// sign(<g_rep, v>) with sign(0) = +1; returns true for a negative sign.
    bool negative_sign(std::uint64_t rep, const RealVector &v) {
        CoinStream coins(seed_, stream_, rep);
        boost::random::normal_distribution<double> gauss;
        double dot = 0.0;
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            dot += gauss(coins) * v(k);
        }
        uniforms_ += coins.draws();
        return dot < 0.0;
    }

    std::uint64_t uniforms_drawn() const noexcept {
        return uniforms_;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t uniforms_ = 0;
};

struct HyperplaneResult {
    double estimate = 0.0;
    double disagreement_freq = 0.0;
    std::uint64_t mismatches = 0;
};

/// q(a) q(b) cos(pi f) with f the observed disagreement frequency.
inline double combine_estimate(const EstimationPlan &plan, std::uint64_t level_a, std::uint64_t level_b,
                               std::uint64_t mismatches) {
    const double freq = static_cast<double>(mismatches) / static_cast<double>(plan.reps);
    return plan.dequantize(level_a) * plan.dequantize(level_b) * std::cos(std::numbers::pi * freq);
}

namespace detail {

// No zero-vector check: a zero vector reports sign +1 everywhere and
// quantizes to norm 0, so the estimate is 0 as it should be.
inline HyperplaneResult hyperplane_core(const RealVector &va, const RealVector &vb, const EstimationPlan &plan) {
    if (va.size() != vb.size()) {
        fail(ErrorCode::ShapeMismatch, "vectors differ in length");
    }
    if (plan.reps == 0) {
        fail(ErrorCode::InvalidParameter, "plan has zero repetitions");
    }
    SharedDirections directions(plan);
    std::uint64_t mismatches = 0;
    for (std::uint64_t rep = 0; rep < plan.reps; ++rep) {
        // Same coins for both sides; drawing once is equivalent to each party drawing its own copy.
        CoinStream coins(plan.seed, plan.stream, rep);
        boost::random::normal_distribution<double> gauss;
        double dot_a = 0.0;
        double dot_b = 0.0;
        for (Eigen::Index k = 0; k < va.size(); ++k) {
            const double g = gauss(coins);
            dot_a += g * va(k);
            dot_b += g * vb(k);
        }
        mismatches += (dot_a < 0.0) != (dot_b < 0.0) ? 1 : 0;
    }
    HyperplaneResult out;
    out.mismatches = mismatches;
    out.disagreement_freq = static_cast<double>(mismatches) / static_cast<double>(plan.reps);
    out.estimate = combine_estimate(plan, plan.quantize(va.norm()), plan.quantize(vb.norm()), mismatches);
    return out;
}

}  // namespace detail

inline HyperplaneResult hyperplane_round(const RealVector &va, const RealVector &vb, const EstimationPlan &plan) {
    if (va.size() == 0 || va.isZero(0.0) || vb.size() == 0 || vb.isZero(0.0)) {
        fail(ErrorCode::DegenerateVector, "hyperplane rounding needs nonzero vectors");
    }
    return detail::hyperplane_core(va, vb, plan);
}

inline double clamp_probability(double x) {
    return std::clamp(x, 0.0, 1.0);
}

inline void require_within_cap(double norm, const EstimationPlan &plan, const char *who) {
    if (norm > plan.cap * (1.0 + 1e-12)) {
        fail(ErrorCode::CapExceeded, std::string(who) + " vector norm " + std::to_string(norm) +
                                         " exceeds cap " + std::to_string(plan.cap));
    }
}

inline double estimate_probability(const PsiPair &pair, const EstimationPlan &plan, bool is_probability = true) {
    require_within_cap(pair.norm_a, plan, "Alice");
    require_within_cap(pair.norm_b, plan, "Bob");
    const HyperplaneResult r = detail::hyperplane_core(embed_real(pair.psi_a), embed_real(pair.psi_b), plan);
    return is_probability ? clamp_probability(r.estimate) : r.estimate;
}

}  // namespace nlsim
