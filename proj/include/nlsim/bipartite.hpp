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

// Bipartite operators Q on N_A (x) N_B, their product decompositions
// Q = sum_t A_t (x) B_t^dagger, and the realignment that identifies Q with the
// superoperator X -> sum_t A_t X B_t^dagger.
//
// Index conventions (fixed, used everywhere):
//   Q row (i,k) = i*dimB + k with i on N_A, k on N_B.
//   realign(Q)[(i,j),(k,l)] = Q[(i,k),(j,l)], so realign(A (x) B^dagger) = vec(A) vec(B^dagger)^T
//   with vec row-major.

#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "nlsim/matcore.hpp"

namespace nlsim {

inline constexpr double kDecompositionTolerance = 1e-8;

class BipartiteOperator {
  public:
    BipartiteOperator(std::size_t dim_a, std::size_t dim_b, ComplexMatrix matrix)
        : dim_a_(dim_a), dim_b_(dim_b), matrix_(std::move(matrix)) {
        if (dim_a == 0 || dim_b == 0) {
            fail(ErrorCode::ShapeMismatch, "bipartite dimensions must be positive");
        }
        const auto side = static_cast<Eigen::Index>(dim_a * dim_b);
        if (matrix_.rows() != side || matrix_.cols() != side) {
            fail(ErrorCode::ShapeMismatch, "operator must be square with side dimA*dimB = " +
                                               std::to_string(side));
        }
        require_finite(matrix_, "bipartite operator");
    }

    std::size_t dim_a() const noexcept {
        return dim_a_;
    }
    std::size_t dim_b() const noexcept {
        return dim_b_;
    }
    std::size_t side() const noexcept {
        return dim_a_ * dim_b_;
    }
    const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }

  private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    ComplexMatrix matrix_;
};

struct DecompositionTerm {
    ComplexMatrix a;  // on N_A
    ComplexMatrix b;  // on N_B; enters the sum as b^dagger
};

/// Q = sum_t A_t (x) B_t^dagger. Shapes are always checked; the reconstruction
/// is checked against a source operator when one is supplied.
class OperatorDecomposition {
  public:
    OperatorDecomposition(std::size_t dim_a, std::size_t dim_b, std::vector<DecompositionTerm> terms)
        : dim_a_(dim_a), dim_b_(dim_b), terms_(std::move(terms)) {
        const auto da = static_cast<Eigen::Index>(dim_a);
        const auto db = static_cast<Eigen::Index>(dim_b);
        for (const DecompositionTerm &t : terms_) {
            if (t.a.rows() != da || t.a.cols() != da || t.b.rows() != db || t.b.cols() != db) {
                fail(ErrorCode::InvalidDecomposition, "term shape does not match (dimA, dimB)");
            }
            if (!all_finite(t.a) || !all_finite(t.b)) {
                fail(ErrorCode::InvalidDecomposition, "term has non-finite entries");
            }
        }
    }

    OperatorDecomposition(const BipartiteOperator &source, std::vector<DecompositionTerm> terms)
        : OperatorDecomposition(source.dim_a(), source.dim_b(), std::move(terms)) {
        const double residual = (reconstruct() - source.matrix()).norm();
        if (residual >= kDecompositionTolerance) {
            fail(ErrorCode::InvalidDecomposition,
                 "terms do not reproduce the operator (residual " + std::to_string(residual) + ")");
        }
    }

    std::size_t dim_a() const noexcept {
        return dim_a_;
    }
    std::size_t dim_b() const noexcept {
        return dim_b_;
    }
    std::size_t size() const noexcept {
        return terms_.size();
    }
    bool empty() const noexcept {
        return terms_.empty();
    }
    const std::vector<DecompositionTerm> &terms() const noexcept {
        return terms_;
    }
    const DecompositionTerm &operator[](std::size_t t) const {
        return terms_[t];
    }

    ComplexMatrix reconstruct() const {
        const auto side = static_cast<Eigen::Index>(dim_a_ * dim_b_);
        ComplexMatrix q = ComplexMatrix::Zero(side, side);
        for (const DecompositionTerm &t : terms_) {
            q += kron(t.a, t.b.adjoint());
        }
        return q;
    }

    /// sum_t A_t^dagger A_t
    ComplexMatrix gram_a() const {
        ComplexMatrix g = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_a_), static_cast<Eigen::Index>(dim_a_));
        for (const DecompositionTerm &t : terms_) {
            g.noalias() += t.a.adjoint() * t.a;
        }
        return g;
    }

    /// sum_t B_t^dagger B_t
    ComplexMatrix gram_b() const {
        ComplexMatrix g = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_b_), static_cast<Eigen::Index>(dim_b_));
        for (const DecompositionTerm &t : terms_) {
            g.noalias() += t.b.adjoint() * t.b;
        }
        return g;
    }

  private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    std::vector<DecompositionTerm> terms_;
};

/// R[(i,j),(k,l)] = Q[(i,k),(j,l)]; R is dimA^2 x dimB^2.
inline ComplexMatrix realign(const BipartiteOperator &q) {
    const auto da = static_cast<Eigen::Index>(q.dim_a());
    const auto db = static_cast<Eigen::Index>(q.dim_b());
    const ComplexMatrix &m = q.matrix();
    ComplexMatrix r(da * da, db * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            for (Eigen::Index k = 0; k < db; ++k) {
                for (Eigen::Index l = 0; l < db; ++l) {
                    r(i * da + j, k * db + l) = m(i * db + k, j * db + l);
                }
            }
        }
    }
    return r;
}

inline bool validate_measurement_element(const BipartiteOperator &q, double tol) {
    if (!is_hermitian(q.matrix(), tol)) {
        return false;
    }
    ComplexMatrix h = 0.5 * (q.matrix() + q.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -tol && eig.eigenvalues().maxCoeff() <= 1.0 + tol;
}

namespace detail {

inline ComplexMatrix unvec(const ComplexVector &v, Eigen::Index d) {
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = v(i * d + j);
        }
    }
    return m;
}

}  // namespace detail

/// Canonical decomposition from the SVD of the realigned matrix. Each term is
/// split so that ||A_t||_F = ||B_t||_F = sqrt(sigma_t), and the entry of A_t with
/// the largest modulus is made real positive.
inline OperatorDecomposition operator_schmidt(const BipartiteOperator &q) {
    const auto da = static_cast<Eigen::Index>(q.dim_a());
    const auto db = static_cast<Eigen::Index>(q.dim_b());
    Eigen::BDCSVD<ComplexMatrix> svd(realign(q), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &s = svd.singularValues();
    const double cutoff = s.size() > 0 ? s(0) * kSvdTolerance : 0.0;
    std::vector<DecompositionTerm> terms;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (k > 0 && s(k) <= cutoff) {
            break;
        }
        const double root = std::sqrt(s(k));
        ComplexVector u = root * svd.matrixU().col(k);
        ComplexVector w = root * svd.matrixV().col(k).conjugate();  // vec(B^dagger)
        Eigen::Index pivot = 0;
        u.cwiseAbs().maxCoeff(&pivot);
        if (std::abs(u(pivot)) > 0.0) {
            const Complex phase = u(pivot) / std::abs(u(pivot));
            u *= std::conj(phase);
            w *= phase;
        }
        terms.push_back({detail::unvec(u, da), detail::unvec(w, db).adjoint()});
    }
    return OperatorDecomposition(q, std::move(terms));
}

inline constexpr unsigned kMaxIpBits = 6;

/// IP_n = sum_{x.y = 1 mod 2} |x><x| (x) |y><y| on (C^2)^n (x) (C^2)^n.
inline BipartiteOperator ip_operator(unsigned n) {
    if (n == 0) {
        fail(ErrorCode::InvalidParameter, "IP_n needs n >= 1");
    }
    if (n > kMaxIpBits) {
        fail(ErrorCode::SizeLimit, "IP_n with n > " + std::to_string(kMaxIpBits));
    }
    const std::size_t d = std::size_t{1} << n;
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t y = 0; y < d; ++y) {
            if (std::popcount(static_cast<std::uint64_t>(x & y)) % 2 == 1) {
                const auto idx = static_cast<Eigen::Index>(x * d + y);
                m(idx, idx) = 1.0;
            }
        }
    }
    return BipartiteOperator(d, d, std::move(m));
}

/// Permutation taking (N_A, N_B, F_A, F_B) ordering to (N_A, F_A, N_B, F_B).
inline ComplexMatrix lift_permutation(std::size_t dim_a, std::size_t dim_b, std::size_t dim_f) {
    const std::vector<std::size_t> dims{dim_a, dim_b, dim_f, dim_f};
    const std::vector<std::size_t> order{0, 2, 1, 3};
    return permutation_matrix(dims, order);
}

/// Q (x) I_{F_A (x) F_B}, regrouped as the bipartite operator on (N_A F_A, N_B F_B).
inline BipartiteOperator lift_with_identity(const BipartiteOperator &q, std::size_t dim_f) {
    if (dim_f == 0) {
        fail(ErrorCode::InvalidParameter, "lift dimension must be positive");
    }
    if (dim_f == 1) {
        return q;
    }
    const auto f2 = static_cast<Eigen::Index>(dim_f * dim_f);
    ComplexMatrix natural = kron(q.matrix(), ComplexMatrix::Identity(f2, f2));
    ComplexMatrix p = lift_permutation(q.dim_a(), q.dim_b(), dim_f);
    return BipartiteOperator(q.dim_a() * dim_f, q.dim_b() * dim_f, p * natural * p.adjoint());
}

/// Term-wise lift (A_t (x) I_F, B_t (x) I_F); represents lift_with_identity(Q).
inline OperatorDecomposition lift_decomposition(const OperatorDecomposition &d, std::size_t dim_f) {
    if (dim_f == 0) {
        fail(ErrorCode::InvalidParameter, "lift dimension must be positive");
    }
    const auto f = static_cast<Eigen::Index>(dim_f);
    const ComplexMatrix id = ComplexMatrix::Identity(f, f);
    std::vector<DecompositionTerm> lifted;
    lifted.reserve(d.size());
    for (const DecompositionTerm &t : d.terms()) {
        lifted.push_back({kron(t.a, id), kron(t.b, id)});
    }
    return OperatorDecomposition(d.dim_a() * dim_f, d.dim_b() * dim_f, std::move(lifted));
}

}  // namespace nlsim
