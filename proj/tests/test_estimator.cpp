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

#include "nlsim/estimator.hpp"
#include "nlsim/norms.hpp"
#include "nlsim/oracle.hpp"
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

RealVector vec2(double x, double y) {
    RealVector v(2);
    v << x, y;
    return v;
}

}  // namespace

TEST(shared_coins, counter_based) {
    CoinStream a(5, 1, 7);
    CoinStream b(5, 1, 7);
    for (int k = 0; k < 100; ++k) {
        EXPECT_EQ(a(), b());
    }
    EXPECT_EQ(a.draws(), 100u);
    EXPECT_NE(CoinStream(5, 1, 7)(), CoinStream(5, 1, 8)());
    EXPECT_NE(CoinStream(5, 1, 7)(), CoinStream(5, 2, 7)());
    EXPECT_NE(CoinStream(5, 1, 7)(), CoinStream(6, 1, 7)());
}

TEST(shared_coins, uniform_range) {
    CoinStream c(1, 2, 3);
    double mean = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double u = c.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / 10000.0, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 10000.0));
}

TEST(estimator, plan_formula) {
    const EstimationPlan p = plan(0.1, 0.01, 1.0);
    EXPECT_EQ(p.reps, 23532u);
    EXPECT_EQ(p.reps, static_cast<std::uint64_t>(std::ceil(std::log(200.0) * 9.0 * M_PI * M_PI / (2.0 * 0.01))));
    EXPECT_NEAR(p.norm_quantum, 0.1 / 6.0, 1e-15);
    EXPECT_EQ(p.norm_width(), static_cast<unsigned>(std::ceil(std::log2(1.0 / p.norm_quantum))) + 1);
    EXPECT_GE(plan(0.5, 0.5, 1.0).reps, 1u);
}

TEST(estimator, plan_c4_scaling) {
    for (double c : {1.0, 1.5, 2.0, 3.0}) {
        const auto r1 = static_cast<double>(plan(0.05, 0.01, c).reps);
        const auto r2 = static_cast<double>(plan(0.05, 0.01, 2.0 * c).reps);
        EXPECT_NEAR(r2, 16.0 * r1, 16.0) << c;
    }
    EXPECT_EQ(plan(0.05, 0.01, 1.0).reps, 94127u);
    EXPECT_EQ(plan(0.05, 0.01, 2.0).reps, 1506019u);
}

TEST(estimator, plan_monotone) {
    std::uint64_t last = 0;
    for (double e : {0.5, 0.3, 0.1, 0.05}) {
        const std::uint64_t r = plan(e, 0.1, 1.0).reps;
        EXPECT_GE(r, last);
        last = r;
    }
    last = 0;
    for (double b : {0.5, 0.1, 0.01}) {
        const std::uint64_t r = plan(0.1, b, 1.0).reps;
        EXPECT_GE(r, last);
        last = r;
    }
    last = 0;
    for (double c : {1.0, 1.2, 2.0}) {
        const std::uint64_t r = plan(0.1, 0.1, c).reps;
        EXPECT_GE(r, last);
        last = r;
    }
}

TEST(estimator, plan_errors) {
    EXPECT_EQ(code_of([] { plan(0.0, 0.1, 1.0); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { plan(1.0, 0.1, 1.0); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { plan(0.1, 0.0, 1.0); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { plan(0.1, 1.0, 1.0); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { plan(0.1, 0.1, 0.5); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { plan(std::nan(""), 0.1, 1.0); }), ErrorCode::InvalidParameter);
}

TEST(estimator, parallel_vectors_never_disagree) {
    const EstimationPlan p = plan(0.1, 0.1, 1.0);
    const RealVector v = vec2(0.6, 0.8);
    const HyperplaneResult r = hyperplane_round(v, v, p);
    EXPECT_EQ(r.mismatches, 0u);
    EXPECT_EQ(r.disagreement_freq, 0.0);
    const double q1 = p.dequantize(p.quantize(1.0));
    EXPECT_EQ(r.estimate, q1 * q1);
    EXPECT_NEAR(r.estimate, 1.0, 0.1);
}

TEST(estimator, orthogonal_vectors) {
    const EstimationPlan p = plan(0.1, 0.01, 1.0);
    const HyperplaneResult r = hyperplane_round(vec2(1, 0), vec2(0, 1), p);
    const double sigma = std::sqrt(0.25 / static_cast<double>(p.reps));
    EXPECT_NEAR(r.disagreement_freq, 0.5, 3.0 * sigma);
    EXPECT_LE(std::abs(r.estimate), 0.1);
}

TEST(estimator, quarter_turn) {
    const EstimationPlan p = plan(0.05, 0.01, 1.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    const HyperplaneResult r = hyperplane_round(vec2(1, 0), vec2(r2, r2), p);
    const double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(p.reps));
    EXPECT_NEAR(r.disagreement_freq, 0.25, 3.0 * sigma);
    EXPECT_NEAR(r.estimate, r2, 0.05);
}

TEST(estimator, degenerate_and_shape_errors) {
    const EstimationPlan p = plan(0.1, 0.1, 1.0);
    EXPECT_EQ(code_of([&] { hyperplane_round(vec2(0, 0), vec2(1, 0), p); }), ErrorCode::DegenerateVector);
    EXPECT_EQ(code_of([&] { hyperplane_round(vec2(1, 0), RealVector::Ones(3), p); }), ErrorCode::ShapeMismatch);
}

TEST(estimator, deterministic_in_seed) {
    Rng rng(1);
    const RealVector a = RealVector::Random(6);
    const RealVector b = RealVector::Random(6);
    const EstimationPlan p = plan(0.2, 0.1, 3.0, 99);
    EXPECT_EQ(hyperplane_round(a, b, p).mismatches, hyperplane_round(a, b, p).mismatches);
    const EstimationPlan q = plan(0.2, 0.1, 3.0, 100);
    EXPECT_NE(hyperplane_round(a, b, p).mismatches, hyperplane_round(a, b, q).mismatches);
}

TEST(estimator, party_side_directions_agree_with_core) {
    Rng rng(2);
    const RealVector a = RealVector::Random(5);
    const RealVector b = RealVector::Random(5);
    EstimationPlan p = plan(0.3, 0.3, 3.0, 4);
    SharedDirections alice(p);
    SharedDirections bob(p);
    std::uint64_t mismatches = 0;
    for (std::uint64_t rep = 0; rep < p.reps; ++rep) {
        mismatches += alice.negative_sign(rep, a) != bob.negative_sign(rep, b) ? 1 : 0;
    }
    EXPECT_EQ(mismatches, hyperplane_round(a, b, p).mismatches);
    EXPECT_GE(alice.uniforms_drawn(), 5 * p.reps);
}

TEST(estimator, cap_exceeded) {
    PsiPair pair;
    pair.psi_a = ComplexVector::Constant(4, Complex(1.0, 0.0));
    pair.psi_b = pair.psi_a;
    pair.norm_a = pair.norm_b = 2.0;
    EXPECT_EQ(code_of([&] { estimate_probability(pair, plan(0.1, 0.1, 1.5)); }), ErrorCode::CapExceeded);
    EXPECT_NO_THROW(estimate_probability(pair, plan(0.1, 0.1, 2.0), false));
}

TEST(estimator, clamping) {
    for (double x : {-0.3, -0.0, 0.2, 1.0, 1.4}) {
        const double c = clamp_probability(x);
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
        const double outside = std::max({0.0, -x, x - 1.0});
        EXPECT_LE(std::abs(c - x), outside + 1e-15);
    }
}

TEST(estimator, singlet_and_deterministic_scenarios) {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexVector singlet = ComplexVector::Zero(4);
    singlet(1) = r;
    singlet(2) = -r;
    ComplexMatrix p01 = ComplexMatrix::Zero(4, 4);
    p01(1, 1) = 1.0;
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    const SchmidtState e = schmidt_decompose(singlet, 2, 2);
    const Scenario anti{BipartiteOperator(2, 2, p01), e, i2, i2};
    const Scenario sure{BipartiteOperator(2, 2, ComplexMatrix::Identity(4, 4)), e, i2, i2};
    for (const Scenario *s : {&anti, &sure}) {
        const OperatorDecomposition d = balance(operator_schmidt(s->q));
        const double cap = std::max(1.0, std::sqrt(diamond_upper_from(d)));
        const double est = estimate_probability(build_psi(d, s->e, s->u, s->v), plan(0.05, 0.01, cap, 7));
        EXPECT_NEAR(est, exact_probability(*s), 0.05);
    }
}

TEST(estimator, random_two_qubit_failure_rate) {
    Rng rng(3);
    int failures = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const Scenario s = nlsim::testing::random_scenario(rng, 2, 2);
        const OperatorDecomposition d = balance(operator_schmidt(s.q));
        const double cap = std::max(1.0, std::sqrt(diamond_upper_from(d)));
        const double est = estimate_probability(build_psi(d, s.e, s.u, s.v), plan(0.1, 0.01, cap, 1000 + trial));
        failures += std::abs(est - exact_probability(s)) > 0.1 ? 1 : 0;
    }
    EXPECT_LE(failures, 1);
}
