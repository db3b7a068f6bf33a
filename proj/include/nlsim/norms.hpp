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

// Bounds on the diamond norm of a bipartite operator.
//
// Upper bounds come from explicit decompositions Q = sum_t A_t (x) B_t^dagger,
// each certifying ||Q||_diamond <= sqrt(||sum A^dagger A||) * sqrt(||sum B^dagger B||).
// Lower bounds come from the dual form sup_rho ||(T (x) id)(rho)||_tr / ||rho||_tr
// with T = realignment of Q. Neither side claims to be the norm itself.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nlsim/bipartite.hpp"
#include "nlsim/reduction.hpp"
#include "nlsim/shared_coins.hpp"

namespace nlsim {

inline constexpr double kNormIdentityTolerance = 1e-6;

struct NormBound {
    double upper = 0.0;
    double lower = 0.0;
    OperatorDecomposition witness_decomposition;
    ComplexMatrix witness_rho;
};

struct GramFactors {
    double alice = 0.0;  // ||sum A^dagger A||
    double bob = 0.0;    // ||sum B^dagger B||
};

inline GramFactors gram_factors(const OperatorDecomposition &decomp) {
    return {hermitian_spectral_norm(decomp.gram_a()), hermitian_spectral_norm(decomp.gram_b())};
}

/// Rescales every term by one scalar c so that both Gram norms equal their
/// geometric mean. Q is unchanged (A -> cA, B -> B/c with c real).
inline OperatorDecomposition balance(const OperatorDecomposition &decomp) {
    if (decomp.empty()) {
        fail(ErrorCode::InvalidDecomposition, "empty decomposition");
    }
    const GramFactors g = gram_factors(decomp);
    if (g.alice <= 0.0 || g.bob <= 0.0) {
        return decomp;
    }
    const double c = std::pow(g.bob / g.alice, 0.25);
    std::vector<DecompositionTerm> terms;
    terms.reserve(decomp.size());
    for (const DecompositionTerm &t : decomp.terms()) {
        terms.push_back({c * t.a, t.b / c});
    }
    return OperatorDecomposition(decomp.dim_a(), decomp.dim_b(), std::move(terms));
}

inline double diamond_upper_from(const OperatorDecomposition &decomp) {
    if (decomp.empty()) {
        fail(ErrorCode::InvalidDecomposition, "empty decomposition");
    }
    const GramFactors g = gram_factors(decomp);
    return std::sqrt(g.alice) * std::sqrt(g.bob);
}

namespace detail {

// Coordinate descent over invertible mixings of the terms. Only elementary
// moves are used, each of which keeps sum A_s (x) B_s^dagger fixed:
//   row move (s != t):  A_s += d A_t,   B_t -= conj(d) B_s
//   scale move (s == t): A_s *= (1+d),  B_s /= (1+d)       (d real)
class MixingSearch {
  public:
    MixingSearch(std::vector<ComplexMatrix> a, std::vector<ComplexMatrix> b) : a_(std::move(a)), b_(std::move(b)) {
        refresh();
    }

    double objective() const {
        return fa_ * fb_;
    }

    void run(int max_sweeps) {
        double step = 0.5;
        const std::size_t n = a_.size();
        for (int sweep = 0; sweep < max_sweeps && step > 1e-7; ++sweep) {
            bool improved = false;
            for (std::size_t s = 0; s < n; ++s) {
                for (std::size_t t = 0; t < n; ++t) {
                    improved |= try_coordinate(s, t, step);
                }
            }
            refresh();
            if (!improved) {
                step *= 0.5;
            }
        }
    }

    std::vector<DecompositionTerm> terms() const {
        std::vector<DecompositionTerm> out;
        out.reserve(a_.size());
        for (std::size_t k = 0; k < a_.size(); ++k) {
            out.push_back({a_[k], b_[k]});
        }
        return out;
    }

  private:
    void refresh() {
        ga_ = ComplexMatrix::Zero(a_.front().rows(), a_.front().cols());
        gb_ = ComplexMatrix::Zero(b_.front().rows(), b_.front().cols());
        for (std::size_t k = 0; k < a_.size(); ++k) {
            ga_.noalias() += a_[k].adjoint() * a_[k];
            gb_.noalias() += b_[k].adjoint() * b_[k];
        }
        fa_ = hermitian_spectral_norm(ga_);
        fb_ = hermitian_spectral_norm(gb_);
    }

    bool try_coordinate(std::size_t s, std::size_t t, double step) {
        const double current = objective();
        if (s == t) {
            for (double d : {step, -step}) {
                const double scale_a = (1.0 + d) * (1.0 + d);
                ComplexMatrix ga = ga_ + (scale_a - 1.0) * (a_[s].adjoint() * a_[s]);
                ComplexMatrix gb = gb_ + (1.0 / scale_a - 1.0) * (b_[s].adjoint() * b_[s]);
                const double fa = hermitian_spectral_norm(ga);
                const double fb = hermitian_spectral_norm(gb);
                if (fa * fb < current * (1.0 - 1e-12)) {
                    a_[s] *= (1.0 + d);
                    b_[s] /= (1.0 + d);
                    ga_ = std::move(ga);
                    gb_ = std::move(gb);
                    fa_ = fa;
                    fb_ = fb;
                    return true;
                }
            }
            return false;
        }
        const Complex candidates[] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
        for (Complex d : candidates) {
            ComplexMatrix new_a = a_[s] + d * a_[t];
            ComplexMatrix new_b = b_[t] - std::conj(d) * b_[s];
            ComplexMatrix ga = ga_ - a_[s].adjoint() * a_[s] + new_a.adjoint() * new_a;
            ComplexMatrix gb = gb_ - b_[t].adjoint() * b_[t] + new_b.adjoint() * new_b;
            const double fa = hermitian_spectral_norm(ga);
            const double fb = hermitian_spectral_norm(gb);
            if (fa * fb < current * (1.0 - 1e-12)) {
                a_[s] = std::move(new_a);
                b_[t] = std::move(new_b);
                ga_ = std::move(ga);
                gb_ = std::move(gb);
                fa_ = fa;
                fb_ = fb;
                return true;
            }
        }
        return false;
    }

    std::vector<ComplexMatrix> a_;
    std::vector<ComplexMatrix> b_;
    ComplexMatrix ga_;
    ComplexMatrix gb_;
    double fa_ = 0.0;
    double fb_ = 0.0;
};

// A'_s = sum_t M_st A_t, B'_s = sum_t (M^{-dagger})_st B_t.
inline void apply_mixing(const ComplexMatrix &mixing, const std::vector<DecompositionTerm> &terms,
                         std::vector<ComplexMatrix> &a, std::vector<ComplexMatrix> &b) {
    const ComplexMatrix inv_dag = mixing.inverse().adjoint();
    const std::size_t n = terms.size();
    a.assign(n, ComplexMatrix::Zero(terms.front().a.rows(), terms.front().a.cols()));
    b.assign(n, ComplexMatrix::Zero(terms.front().b.rows(), terms.front().b.cols()));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            const auto si = static_cast<Eigen::Index>(s);
            const auto ti = static_cast<Eigen::Index>(t);
            a[s] += mixing(si, ti) * terms[t].a;
            b[s] += inv_dag(si, ti) * terms[t].b;
        }
    }
}

inline constexpr int kMixingSweeps = 60;

}  // namespace detail

/// Best decomposition found by mixing-matrix descent from the operator-Schmidt
/// decomposition, plus `budget` random restarts. Only `upper` and
/// `witness_decomposition` are populated. Deterministic in `seed`.
inline NormBound diamond_upper_optimize(const BipartiteOperator &q, int budget, std::uint64_t seed) {
    const OperatorDecomposition start = operator_schmidt(q);
    NormBound best{diamond_upper_from(start), 0.0, balance(start), ComplexMatrix()};

    const std::size_t n = start.size();
    for (int restart = 0; restart <= budget; ++restart) {
        std::vector<ComplexMatrix> a;
        std::vector<ComplexMatrix> b;
        if (restart == 0) {
            for (const DecompositionTerm &t : start.terms()) {
                a.push_back(t.a);
                b.push_back(t.b);
            }
        } else {
            std::mt19937_64 rng(derive_key(seed, 0x6d6978, static_cast<std::uint64_t>(restart)));
            std::normal_distribution<double> gauss(0.0, 0.5 / std::sqrt(static_cast<double>(n)));
            ComplexMatrix mixing = ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (Eigen::Index k = 0; k < mixing.size(); ++k) {
                mixing.data()[k] += Complex(gauss(rng), gauss(rng));
            }
            if (std::abs(mixing.determinant()) < 1e-6) {
                continue;
            }
            detail::apply_mixing(mixing, start.terms(), a, b);
        }
        detail::MixingSearch search(std::move(a), std::move(b));
        search.run(detail::kMixingSweeps);
        OperatorDecomposition found(q.dim_a(), q.dim_b(), search.terms());
        if ((found.reconstruct() - q.matrix()).norm() >= kDecompositionTolerance) {
            continue;
        }
        const double value = diamond_upper_from(found);
        if (value < best.upper) {
            best.upper = value;
            best.witness_decomposition = balance(found);
        }
    }
    return best;
}

namespace detail {

struct SparseEntry {
    Eigen::Index i, k, j, l;  // Q[(i,k),(j,l)]
    Complex value;
};

inline std::vector<SparseEntry> nonzero_entries(const BipartiteOperator &q) {
    const auto db = static_cast<Eigen::Index>(q.dim_b());
    std::vector<SparseEntry> out;
    const ComplexMatrix &m = q.matrix();
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        for (Eigen::Index row = 0; row < m.rows(); ++row) {
            if (m(row, col) != Complex(0.0, 0.0)) {
                out.push_back({row / db, row % db, col / db, col % db, m(row, col)});
            }
        }
    }
    return out;
}

inline void require_square_parties(const BipartiteOperator &q) {
    if (q.dim_a() != q.dim_b()) {
        fail(ErrorCode::ShapeMismatch, "dual bound needs dimA == dimB");
    }
}

}  // namespace detail

/// (T (x) id_G)(rho) with T(X)[i,l] = sum_{j,k} Q[(i,k),(j,l)] X[j,k], rho on N (x) G.
inline ComplexMatrix apply_lifted_superoperator(const BipartiteOperator &q, const ComplexMatrix &rho) {
    detail::require_square_parties(q);
    const auto d = static_cast<Eigen::Index>(q.dim_a());
    if (rho.rows() != d * d || rho.cols() != d * d) {
        fail(ErrorCode::ShapeMismatch, "witness must act on N (x) G with dim G = dim N");
    }
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (const detail::SparseEntry &e : detail::nonzero_entries(q)) {
        out.block(e.i * d, e.l * d, d, d) += e.value * rho.block(e.j * d, e.k * d, d, d);
    }
    return out;
}

/// Adjoint of apply_lifted_superoperator under the Hilbert-Schmidt inner product.
inline ComplexMatrix apply_lifted_adjoint(const BipartiteOperator &q, const ComplexMatrix &y) {
    detail::require_square_parties(q);
    const auto d = static_cast<Eigen::Index>(q.dim_a());
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (const detail::SparseEntry &e : detail::nonzero_entries(q)) {
        out.block(e.j * d, e.k * d, d, d) += std::conj(e.value) * y.block(e.i * d, e.l * d, d, d);
    }
    return out;
}

struct LowerBound {
    double value = 0.0;
    std::size_t witness_index = 0;
};

inline LowerBound diamond_lower_witness(const BipartiteOperator &q, const std::vector<ComplexMatrix> &witnesses) {
    if (witnesses.empty()) {
        fail(ErrorCode::InvalidWitness, "no witnesses supplied");
    }
    LowerBound best;
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
        const double denom = trace_norm(witnesses[w]);
        if (!(denom > 0.0)) {
            fail(ErrorCode::InvalidWitness, "witness " + std::to_string(w) + " is zero");
        }
        const double ratio = trace_norm(apply_lifted_superoperator(q, witnesses[w])) / denom;
        if (w == 0 || ratio > best.value) {
            best = {ratio, w};
        }
    }
    return best;
}

inline double diamond_lower(const BipartiteOperator &q, const std::vector<ComplexMatrix> &witnesses) {
    return diamond_lower_witness(q, witnesses).value;
}

/// sum_{x,y} |x><y| (x) I_G
inline ComplexMatrix flat_witness(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return kron(ComplexMatrix::Ones(n, n), ComplexMatrix::Identity(n, n));
}

/// |Omega><Omega| with |Omega> = d^{-1/2} sum_i |i>|i>
inline ComplexMatrix maximally_entangled_witness(std::size_t d) {
    const ComplexVector omega = SchmidtState::maximally_entangled(d).state_vector();
    return omega * omega.adjoint();
}

/// Random pure state |v><v| improved by one eigenvector-ascent step: with W the
/// polar part of (T (x) id)(|v><v|), v moves to the top eigenvector of the
/// Hermitian part of the adjoint map applied to W. The step never decreases the ratio.
inline ComplexMatrix ascent_witness(const BipartiteOperator &q, std::uint64_t seed, std::uint64_t index) {
    const auto n = static_cast<Eigen::Index>(q.dim_a() * q.dim_a());
    std::mt19937_64 rng(derive_key(seed, 0x7769746e, index));
    std::normal_distribution<double> gauss;
    ComplexVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        v(k) = Complex(gauss(rng), gauss(rng));
    }
    v.normalize();
    const ComplexMatrix image = apply_lifted_superoperator(q, v * v.adjoint());
    Eigen::BDCSVD<ComplexMatrix> svd(image, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const ComplexMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
    const ComplexMatrix z = apply_lifted_adjoint(q, polar);
    const ComplexMatrix h = 0.5 * (z + z.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const ComplexVector top = eig.eigenvectors().col(n - 1);
    return top * top.adjoint();
}

/// Flat, maximally entangled, then `budget` ascent witnesses.
inline std::vector<ComplexMatrix> standard_witnesses(const BipartiteOperator &q, int budget, std::uint64_t seed) {
    detail::require_square_parties(q);
    std::vector<ComplexMatrix> out{flat_witness(q.dim_a()), maximally_entangled_witness(q.dim_a())};
    for (int k = 0; k < budget; ++k) {
        out.push_back(ascent_witness(q, seed, static_cast<std::uint64_t>(k)));
    }
    return out;
}

/// Both sides at once; witness_rho is the best lower-bound witness.
inline NormBound diamond_bounds(const BipartiteOperator &q, int budget, std::uint64_t seed) {
    NormBound bound = diamond_upper_optimize(q, budget, seed);
    const std::vector<ComplexMatrix> witnesses = standard_witnesses(q, budget, seed);
    const LowerBound lower = diamond_lower_witness(q, witnesses);
    bound.lower = lower.value;
    bound.witness_rho = witnesses[lower.witness_index];
    return bound;
}

/// ||psi_A|| * ||psi_B|| for the product-state vectors built from this decomposition.
inline double otimes_norm_upper(const OperatorDecomposition &decomp, const ComplexVector &phi_a,
                                const ComplexVector &phi_b) {
    const PsiPair pair = build_psi_product(decomp, phi_a, phi_b);
    return pair.norm_a * pair.norm_b;
}

/// ||sum A_t (x) B_t^dagger|| <= sqrt(||sum A^dagger A||) sqrt(||sum B^dagger B||) + 1e-8
inline bool jocic_check(const OperatorDecomposition &decomp) {
    return spectral_norm(decomp.reconstruct()) <= diamond_upper_from(decomp) + 1e-8;
}

}  // namespace nlsim
