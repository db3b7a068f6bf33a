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

#include "nlsim/bipartite.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

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

}  // namespace

TEST(bipartite, operator_shape_checks) {
    EXPECT_EQ(code_of([] { BipartiteOperator(2, 2, ComplexMatrix::Identity(3, 3)); }), ErrorCode::ShapeMismatch);
    EXPECT_EQ(code_of([] { BipartiteOperator(0, 2, ComplexMatrix::Identity(0, 0)); }), ErrorCode::ShapeMismatch);
    const BipartiteOperator q(2, 3, ComplexMatrix::Identity(6, 6));
    EXPECT_EQ(q.side(), 6u);
}

TEST(bipartite, decomposition_checks_reconstruction) {
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    const BipartiteOperator q(2, 2, ComplexMatrix::Identity(4, 4));
    EXPECT_NO_THROW(OperatorDecomposition(q, {{i2, i2}}));
    EXPECT_EQ(code_of([&] { OperatorDecomposition(q, {{i2, 2.0 * i2}}); }), ErrorCode::InvalidDecomposition);
    EXPECT_EQ(code_of([&] { OperatorDecomposition(2, 2, {{i2, ComplexMatrix::Identity(3, 3)}}); }),
              ErrorCode::InvalidDecomposition);
}

TEST(bipartite, measurement_element_examples) {
    EXPECT_TRUE(validate_measurement_element(BipartiteOperator(2, 2, ComplexMatrix::Identity(4, 4)), 1e-9));
    EXPECT_FALSE(validate_measurement_element(BipartiteOperator(2, 2, 2.0 * ComplexMatrix::Identity(4, 4)), 1e-9));
    EXPECT_FALSE(validate_measurement_element(BipartiteOperator(2, 2, -0.1 * ComplexMatrix::Identity(4, 4)), 1e-9));
    ComplexMatrix nonherm = ComplexMatrix::Zero(4, 4);
    nonherm(0, 1) = 0.5;
    EXPECT_FALSE(validate_measurement_element(BipartiteOperator(2, 2, nonherm), 1e-9));
    for (unsigned n = 1; n <= 4; ++n) {
        EXPECT_TRUE(validate_measurement_element(ip_operator(n), 1e-12)) << n;
    }
}

TEST(bipartite, ip_operator_examples) {
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(3, 3) = 1.0;
    EXPECT_EQ(ip_operator(1).matrix(), expected);
    const ComplexMatrix ip2 = ip_operator(2).matrix();
    EXPECT_EQ(static_cast<int>(std::lround(ip2.trace().real())), oracle_ref::kIp2Ones);
    EXPECT_TRUE(ip2.isDiagonal(0.0));
    for (unsigned n = 1; n <= 4; ++n) {
        const ComplexMatrix m = ip_operator(n).matrix();
        EXPECT_EQ(m * m, m);
        const int side = 1 << n;
        for (int x = 0; x < side; ++x) {
            for (int y = 0; y < side; ++y) {
                const double want = std::popcount(static_cast<unsigned>(x & y)) % 2 == 1 ? 1.0 : 0.0;
                EXPECT_EQ(m(x * side + y, x * side + y).real(), want);
            }
        }
    }
    EXPECT_EQ(code_of([] { ip_operator(kMaxIpBits + 1); }), ErrorCode::SizeLimit);
    EXPECT_EQ(code_of([] { ip_operator(0); }), ErrorCode::InvalidParameter);
}

TEST(bipartite, realignment_convention) {
    Rng rng(2);
    const BipartiteOperator q = nlsim::testing::random_operator(2, 3, rng);
    const ComplexMatrix r = realign(q);
    ASSERT_EQ(r.rows(), 4);
    ASSERT_EQ(r.cols(), 9);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    EXPECT_EQ(r(i * 2 + j, k * 3 + l), q.matrix()(i * 3 + k, j * 3 + l));
}

TEST(bipartite, operator_schmidt_product) {
    Rng rng(3);
    const ComplexMatrix a = nlsim::testing::random_matrix(3, 3, rng);
    const ComplexMatrix b = nlsim::testing::random_matrix(2, 2, rng);
    const BipartiteOperator q(3, 2, kron(a, b.adjoint()));
    const OperatorDecomposition d = operator_schmidt(q);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_LT((d.reconstruct() - q.matrix()).norm(), 1e-10);
    // A_0 is a scalar multiple of A
    const Complex ratio = d[0].a(0, 0) / a(0, 0);
    EXPECT_LT((d[0].a - ratio * a).norm(), 1e-10);
}

TEST(bipartite, operator_schmidt_ip1) {
    const OperatorDecomposition d = operator_schmidt(ip_operator(1));
    ASSERT_EQ(d.size(), 1u);
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    EXPECT_LT((d[0].a - p1).norm(), 1e-12);
    EXPECT_LT((d[0].b - p1).norm(), 1e-12);
}

TEST(bipartite, operator_schmidt_random_reconstruction) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t da = nlsim::testing::uniform_int(2, 4, rng);
        const std::size_t db = nlsim::testing::uniform_int(2, 4, rng);
        const BipartiteOperator q = nlsim::testing::random_operator(da, db, rng);
        const OperatorDecomposition d = operator_schmidt(q);
        EXPECT_LT((d.reconstruct() - q.matrix()).norm(), 1e-8);
        EXPECT_LE(d.size(), std::min(da * da, db * db));
    }
}

TEST(bipartite, lift_with_identity_examples) {
    Rng rng(7);
    const BipartiteOperator q = nlsim::testing::random_operator(2, 3, rng);
    EXPECT_EQ(lift_with_identity(q, 1).matrix(), q.matrix());
    const BipartiteOperator id(2, 3, ComplexMatrix::Identity(6, 6));
    EXPECT_EQ(lift_with_identity(id, 2).matrix(), ComplexMatrix(ComplexMatrix::Identity(24, 24)));
    EXPECT_EQ(lift_with_identity(id, 2).dim_a(), 4u);
    EXPECT_EQ(lift_with_identity(id, 2).dim_b(), 6u);
}

TEST(bipartite, lift_permutation_regroups_factors) {
    // (A (x) B) (x) (F (x) G) regrouped to (A (x) F) (x) (B (x) G)
    Rng rng(11);
    const ComplexMatrix a = nlsim::testing::random_matrix(2, 2, rng);
    const ComplexMatrix b = nlsim::testing::random_matrix(3, 3, rng);
    const ComplexMatrix f = nlsim::testing::random_matrix(2, 2, rng);
    const ComplexMatrix g = nlsim::testing::random_matrix(2, 2, rng);
    const ComplexMatrix p = lift_permutation(2, 3, 2);
    EXPECT_LT((p * kron(kron(a, b), kron(f, g)) * p.adjoint() - kron(kron(a, f), kron(b, g))).norm(), 1e-12);
}

TEST(bipartite, lifted_decomposition_matches_lifted_operator) {
    Rng rng(13);
    for (std::size_t f = 1; f <= 3; ++f) {
        const BipartiteOperator q = nlsim::testing::random_operator(2, 2, rng);
        const OperatorDecomposition lifted = lift_decomposition(operator_schmidt(q), f);
        EXPECT_LT((lifted.reconstruct() - lift_with_identity(q, f).matrix()).norm(), 1e-10);
    }
}

TEST(bipartite, lift_preserves_measurement_element) {
    Rng rng(17);
    const BipartiteOperator q(2, 2, nlsim::testing::random_contraction_psd(4, rng));
    ASSERT_TRUE(validate_measurement_element(q, 1e-9));
    for (std::size_t f = 1; f <= 3; ++f) {
        EXPECT_TRUE(validate_measurement_element(lift_with_identity(q, f), 1e-9));
    }
}
