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

// Dense complex linear algebra shared by every other module.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nlsim/error.hpp"

namespace nlsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kSvdTolerance = 1e-12;
inline constexpr double kSchmidtPruneThreshold = 1e-12;
inline constexpr double kStateTolerance = 1e-9;

inline bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex z = m.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

inline void require_finite(const ComplexMatrix &m, const char *what) {
    if (m.size() == 0) {
        fail(ErrorCode::InvalidMatrix, std::string(what) + " is empty");
    }
    if (!all_finite(m)) {
        fail(ErrorCode::InvalidMatrix, std::string(what) + " has non-finite entries");
    }
}

inline void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        fail(ErrorCode::ShapeMismatch,
             std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                 std::to_string(m.cols()));
    }
}

/// Singular values in descending order.
inline RealVector singular_values(const ComplexMatrix &m) {
    require_finite(m, "matrix");
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

inline double spectral_norm(const ComplexMatrix &m) {
    RealVector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(0);
}

inline double trace_norm(const ComplexMatrix &m) {
    require_square(m, "trace_norm argument");
    return singular_values(m).sum();
}

/// Largest |eigenvalue| of a Hermitian matrix. Cheaper than an SVD and exact for
/// the Gram sums (A^dagger A) that the norm code evaluates in its inner loop.
inline double hermitian_spectral_norm(const ComplexMatrix &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_isometry(const ComplexMatrix &u, double tol = kStateTolerance) {
    if (u.rows() < u.cols() || !all_finite(u)) {
        return false;
    }
    ComplexMatrix gram = u.adjoint() * u;
    return (gram - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const ComplexMatrix &u, double tol = kStateTolerance) {
    return u.rows() == u.cols() && is_isometry(u, tol);
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) {
        fail(ErrorCode::ShapeMismatch, "tensor of an empty list");
    }
    ComplexMatrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        out = kron(out, factors[k]);
    }
    return out;
}

inline ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
    std::vector<ComplexMatrix> list(factors);
    return tensor(std::span<const ComplexMatrix>(list));
}

namespace detail {

inline std::size_t checked_product(std::span<const std::size_t> dims) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) {
            fail(ErrorCode::ShapeMismatch, "subsystem dimension 0");
        }
        total *= d;
    }
    return total;
}

// Mixed-radix digits of `index`, most significant subsystem first.
inline void split_index(std::size_t index, std::span<const std::size_t> dims, std::span<std::size_t> digits) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

}  // namespace detail

/// Permutation matrix P with P |i_0 ... i_{n-1}> = |i_{order[0]} ... i_{order[n-1]}>.
/// Subsystem 0 is the most significant tensor factor.
inline ComplexMatrix permutation_matrix(std::span<const std::size_t> dims, std::span<const std::size_t> order) {
    if (order.size() != dims.size()) {
        fail(ErrorCode::ShapeMismatch, "permutation order length differs from subsystem count");
    }
    std::vector<std::size_t> seen(order.begin(), order.end());
    std::sort(seen.begin(), seen.end());
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (seen[k] != k) {
            fail(ErrorCode::ShapeMismatch, "subsystem order is not a permutation");
        }
    }
    const std::size_t total = detail::checked_product(dims);
    std::vector<std::size_t> digits(dims.size());
    ComplexMatrix p = ComplexMatrix::Zero(total, total);
    for (std::size_t in = 0; in < total; ++in) {
        detail::split_index(in, dims, digits);
        std::size_t out = 0;
        for (std::size_t s = 0; s < order.size(); ++s) {
            out = out * dims[order[s]] + digits[order[s]];
        }
        p(out, in) = 1.0;
    }
    return p;
}

/// Trace out every subsystem not listed in `keep`. Kept subsystems retain their order.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
    const std::size_t total = detail::checked_product(dims);
    if (static_cast<std::size_t>(m.rows()) != total || static_cast<std::size_t>(m.cols()) != total) {
        fail(ErrorCode::ShapeMismatch, "partial_trace: dims product " + std::to_string(total) +
                                           " does not match matrix " + std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()));
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size() || kept[k]) {
            fail(ErrorCode::ShapeMismatch, "partial_trace: bad keep index");
        }
        kept[k] = true;
    }
    std::size_t out_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept[k]) {
            out_dim *= dims[k];
        }
    }
    std::vector<std::size_t> row_digits(dims.size()), col_digits(dims.size());
    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (std::size_t r = 0; r < total; ++r) {
        detail::split_index(r, dims, row_digits);
        for (std::size_t c = 0; c < total; ++c) {
            detail::split_index(c, dims, col_digits);
            bool traced_match = true;
            std::size_t out_r = 0;
            std::size_t out_c = 0;
            for (std::size_t k = 0; k < dims.size(); ++k) {
                if (kept[k]) {
                    out_r = out_r * dims[k] + row_digits[k];
                    out_c = out_c * dims[k] + col_digits[k];
                } else if (row_digits[k] != col_digits[k]) {
                    traced_match = false;
                    break;
                }
            }
            if (traced_match) {
                out(out_r, out_c) += m(r, c);
            }
        }
    }
    return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix &m, std::initializer_list<std::size_t> dims,
                                   std::initializer_list<std::size_t> keep) {
    std::vector<std::size_t> d(dims), k(keep);
    return partial_trace(m, d, k);
}

/// |E> = sum_i sqrt(p_i) |a_i> (x) |b_i>, coefficients descending, zeros pruned.
class SchmidtState {
  public:
    SchmidtState(std::vector<double> coefficients, ComplexMatrix basis_a, ComplexMatrix basis_b)
        : coefficients_(std::move(coefficients)), basis_a_(std::move(basis_a)), basis_b_(std::move(basis_b)) {
        validate();
    }

    static SchmidtState product(const ComplexVector &a, const ComplexVector &b) {
        return SchmidtState({1.0}, a, b);
    }

    /// (1/sqrt d) sum_i |i>|i>
    static SchmidtState maximally_entangled(std::size_t d) {
        ComplexMatrix id = ComplexMatrix::Identity(d, d);
        return SchmidtState(std::vector<double>(d, 1.0 / static_cast<double>(d)), id, id);
    }

    const std::vector<double> &coefficients() const noexcept {
        return coefficients_;
    }
    const ComplexMatrix &basis_a() const noexcept {
        return basis_a_;
    }
    const ComplexMatrix &basis_b() const noexcept {
        return basis_b_;
    }
    std::size_t rank() const noexcept {
        return coefficients_.size();
    }
    std::size_t dim_a() const noexcept {
        return static_cast<std::size_t>(basis_a_.rows());
    }
    std::size_t dim_b() const noexcept {
        return static_cast<std::size_t>(basis_b_.rows());
    }

    /// Coefficient matrix C with |E> = sum_{a,b} C(a,b) |a>|b>.
    ComplexMatrix coefficient_matrix() const {
        ComplexMatrix c = ComplexMatrix::Zero(basis_a_.rows(), basis_b_.rows());
        for (std::size_t i = 0; i < rank(); ++i) {
            const Eigen::Index col = static_cast<Eigen::Index>(i);
            c += std::sqrt(coefficients_[i]) * basis_a_.col(col) * basis_b_.col(col).transpose();
        }
        return c;
    }

    ComplexVector state_vector() const {
        ComplexMatrix c = coefficient_matrix();
        ComplexVector v(c.size());
        for (Eigen::Index a = 0; a < c.rows(); ++a) {
            for (Eigen::Index b = 0; b < c.cols(); ++b) {
                v(a * c.cols() + b) = c(a, b);
            }
        }
        return v;
    }

  private:
    void validate() const {
        if (coefficients_.empty()) {
            fail(ErrorCode::InvalidParameter, "Schmidt state without terms");
        }
        const auto r = static_cast<Eigen::Index>(coefficients_.size());
        if (basis_a_.cols() != r || basis_b_.cols() != r) {
            fail(ErrorCode::ShapeMismatch, "Schmidt bases must have one column per coefficient");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < coefficients_.size(); ++i) {
            const double p = coefficients_[i];
            if (!(p > 0.0) || !std::isfinite(p)) {
                fail(ErrorCode::InvalidParameter, "Schmidt coefficients must be positive");
            }
            if (i > 0 && p > coefficients_[i - 1]) {
                fail(ErrorCode::InvalidParameter, "Schmidt coefficients must be sorted descending");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > kStateTolerance) {
            fail(ErrorCode::NotNormalized, "Schmidt coefficients sum to " + std::to_string(total));
        }
        if (!is_isometry(basis_a_) || !is_isometry(basis_b_)) {
            fail(ErrorCode::NotIsometry, "Schmidt bases must be orthonormal");
        }
    }

    std::vector<double> coefficients_;
    ComplexMatrix basis_a_;
    ComplexMatrix basis_b_;
};

namespace detail {

// Rotate column k of `a` so its first non-negligible entry is real and >= 0;
// the inverse phase goes to column k of `b` so a_k (x) b_k is unchanged.
inline void fix_pair_phase(ComplexMatrix &a, ComplexMatrix &b, Eigen::Index k) {
    for (Eigen::Index row = 0; row < a.rows(); ++row) {
        const Complex z = a(row, k);
        if (std::abs(z) > kSvdTolerance) {
            const Complex phase = z / std::abs(z);
            a.col(k) *= std::conj(phase);
            b.col(k) *= phase;
            a(row, k) = std::abs(a(row, k));
            return;
        }
    }
}

}  // namespace detail

inline SchmidtState schmidt_decompose(const ComplexVector &state, std::size_t dim_a, std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0 || static_cast<std::size_t>(state.size()) != dim_a * dim_b) {
        fail(ErrorCode::ShapeMismatch, "state length " + std::to_string(state.size()) + " != " +
                                           std::to_string(dim_a) + "*" + std::to_string(dim_b));
    }
    require_finite(state, "state");
    if (std::abs(state.norm() - 1.0) > kStateTolerance) {
        fail(ErrorCode::NotNormalized, "state norm " + std::to_string(state.norm()));
    }
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    ComplexMatrix c(da, db);
    for (Eigen::Index a = 0; a < da; ++a) {
        for (Eigen::Index b = 0; b < db; ++b) {
            c(a, b) = state(a * db + b);
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &s = svd.singularValues();
    std::vector<double> coefficients;
    Eigen::Index kept = 0;
    while (kept < s.size() && s(kept) * s(kept) >= kSchmidtPruneThreshold) {
        coefficients.push_back(s(kept) * s(kept));
        ++kept;
    }
    ComplexMatrix basis_a = svd.matrixU().leftCols(kept);
    ComplexMatrix basis_b = svd.matrixV().leftCols(kept).conjugate();
    for (Eigen::Index k = 0; k < kept; ++k) {
        detail::fix_pair_phase(basis_a, basis_b, k);
    }
    // Pruning removes at most rank * 1e-12 of weight; restore the exact sum.
    const double total = std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
    for (double &p : coefficients) {
        p /= total;
    }
    return SchmidtState(std::move(coefficients), std::move(basis_a), std::move(basis_b));
}

/// Basis vector |index> of dimension `dim`.
inline ComplexVector basis_vector(std::size_t dim, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

}  // namespace nlsim
