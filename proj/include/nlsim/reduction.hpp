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

// psi-vectors whose inner product is the acceptance probability <E'|Q|E'>.
//
// Both parties index their vectors by (i, j, t) flattened as i*(r*T) + j*T + t,
// r the Schmidt rank and T the term count, so neither needs to talk to the
// other to agree on coordinates.

#pragma once

#include <cmath>

#include "nlsim/bipartite.hpp"

namespace nlsim {

struct PsiPair {
    ComplexVector psi_a;
    ComplexVector psi_b;
    double norm_a = 0.0;
    double norm_b = 0.0;

    Complex inner() const {
        return psi_a.dot(psi_b);
    }
};

namespace detail {

inline void require_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        fail(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
    }
}

inline void require_embedding(const ComplexMatrix &u, std::size_t target_dim, std::size_t source_dim,
                              const char *who) {
    if (static_cast<std::size_t>(u.rows()) != target_dim || static_cast<std::size_t>(u.cols()) != source_dim) {
        fail(ErrorCode::ShapeMismatch, std::string(who) + " embedding must be " + std::to_string(target_dim) +
                                           "x" + std::to_string(source_dim));
    }
    if (!is_isometry(u)) {
        fail(ErrorCode::NotIsometry, std::string(who) + " embedding is not an isometry");
    }
}

inline void require_unit(const ComplexVector &phi, std::size_t dim, const char *who) {
    if (static_cast<std::size_t>(phi.size()) != dim) {
        fail(ErrorCode::ShapeMismatch, std::string(who) + " state has wrong dimension");
    }
    if (std::abs(phi.norm() - 1.0) > kStateTolerance) {
        fail(ErrorCode::NotNormalized, std::string(who) + " state is not a unit vector");
    }
}

}  // namespace detail

/// Alice's half: psi_A[(i,j,t)] = sqrt(p_i^alpha p_j^(1-alpha)) <j_A| A_t^dagger |i_A>, |i_A> = U|a_i>.
inline ComplexVector build_psi_alice(const OperatorDecomposition &decomp, const SchmidtState &state,
                                     const ComplexMatrix &u, double alpha = 0.0) {
    detail::require_alpha(alpha);
    detail::require_embedding(u, decomp.dim_a(), state.dim_a(), "Alice");
    const ComplexMatrix frame = u * state.basis_a();
    const auto r = static_cast<Eigen::Index>(state.rank());
    const auto terms = static_cast<Eigen::Index>(decomp.size());
    const auto &p = state.coefficients();
    ComplexVector psi(r * r * terms);
    for (Eigen::Index t = 0; t < terms; ++t) {
        // m(j, i) = <j_A| A_t^dagger |i_A>
        const ComplexMatrix m = frame.adjoint() * decomp[static_cast<std::size_t>(t)].a.adjoint() * frame;
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < r; ++j) {
                const double w = std::sqrt(std::pow(p[i], alpha) * std::pow(p[j], 1.0 - alpha));
                psi(i * r * terms + j * terms + t) = w * m(j, i);
            }
        }
    }
    return psi;
}

/// Bob's half: psi_B[(i,j,t)] = sqrt(p_i^(1-alpha) p_j^alpha) <i_B| B_t^dagger |j_B>, |i_B> = V|b_i>.
inline ComplexVector build_psi_bob(const OperatorDecomposition &decomp, const SchmidtState &state,
                                   const ComplexMatrix &v, double alpha = 0.0) {
    detail::require_alpha(alpha);
    detail::require_embedding(v, decomp.dim_b(), state.dim_b(), "Bob");
    const ComplexMatrix frame = v * state.basis_b();
    const auto r = static_cast<Eigen::Index>(state.rank());
    const auto terms = static_cast<Eigen::Index>(decomp.size());
    const auto &p = state.coefficients();
    ComplexVector psi(r * r * terms);
    for (Eigen::Index t = 0; t < terms; ++t) {
        const ComplexMatrix m = frame.adjoint() * decomp[static_cast<std::size_t>(t)].b.adjoint() * frame;
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < r; ++j) {
                const double w = std::sqrt(std::pow(p[i], 1.0 - alpha) * std::pow(p[j], alpha));
                psi(i * r * terms + j * terms + t) = w * m(i, j);
            }
        }
    }
    return psi;
}

inline PsiPair build_psi(const OperatorDecomposition &decomp, const SchmidtState &state, const ComplexMatrix &u,
                         const ComplexMatrix &v, double alpha = 0.0) {
    PsiPair pair;
    pair.psi_a = build_psi_alice(decomp, state, u, alpha);
    pair.psi_b = build_psi_bob(decomp, state, v, alpha);
    pair.norm_a = pair.psi_a.norm();
    pair.norm_b = pair.psi_b.norm();
    return pair;
}

/// Unentangled case: psi[t] = <phi| X_t^dagger |phi> for X = A on Alice's side, B on Bob's.
inline ComplexVector build_psi_product_alice(const OperatorDecomposition &decomp, const ComplexVector &phi_a) {
    detail::require_unit(phi_a, decomp.dim_a(), "Alice");
    ComplexVector psi(static_cast<Eigen::Index>(decomp.size()));
    for (std::size_t t = 0; t < decomp.size(); ++t) {
        psi(static_cast<Eigen::Index>(t)) = phi_a.dot(decomp[t].a.adjoint() * phi_a);
    }
    return psi;
}

inline ComplexVector build_psi_product_bob(const OperatorDecomposition &decomp, const ComplexVector &phi_b) {
    detail::require_unit(phi_b, decomp.dim_b(), "Bob");
    ComplexVector psi(static_cast<Eigen::Index>(decomp.size()));
    for (std::size_t t = 0; t < decomp.size(); ++t) {
        psi(static_cast<Eigen::Index>(t)) = phi_b.dot(decomp[t].b.adjoint() * phi_b);
    }
    return psi;
}

inline PsiPair build_psi_product(const OperatorDecomposition &decomp, const ComplexVector &phi_a,
                                 const ComplexVector &phi_b) {
    PsiPair pair;
    pair.psi_a = build_psi_product_alice(decomp, phi_a);
    pair.psi_b = build_psi_product_bob(decomp, phi_b);
    pair.norm_a = pair.psi_a.norm();
    pair.norm_b = pair.psi_b.norm();
    return pair;
}

/// [Re psi; Im psi]. dot(embed(x), embed(y)) = Re <x|y>.
inline RealVector embed_real(const ComplexVector &psi) {
    const Eigen::Index n = psi.size();
    RealVector out(2 * n);
    out.head(n) = psi.real();
    out.tail(n) = psi.imag();
    return out;
}

}  // namespace nlsim
