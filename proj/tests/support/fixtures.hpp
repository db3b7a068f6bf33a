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

// Random instances for tests. Every generator takes the engine explicitly so
// each test owns a fixed seed.

#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "nlsim/nlsim.hpp"

namespace nlsim::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        m.data()[k] = Complex(g(rng), g(rng));
    }
    return m;
}

inline ComplexVector random_unit_vector(Eigen::Index d, Rng &rng) {
    ComplexVector v = random_matrix(d, 1, rng);
    return v / v.norm();
}

inline ComplexMatrix random_unitary(Eigen::Index d, Rng &rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d, d, rng));
    return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

inline ComplexMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    return random_unitary(rows, rng).leftCols(cols);
}

/// Hermitian with eigenvalues uniform in [0, 1].
inline ComplexMatrix random_contraction_psd(Eigen::Index d, Rng &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ComplexMatrix w = random_unitary(d, rng);
    RealVector eig(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        eig(k) = u(rng);
    }
    return w * eig.cast<Complex>().asDiagonal() * w.adjoint();
}

inline std::size_t uniform_int(std::size_t lo, std::size_t hi, Rng &rng) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline SchmidtState random_entangled_state(std::size_t dim_a, std::size_t dim_b, Rng &rng) {
    return schmidt_decompose(random_unit_vector(static_cast<Eigen::Index>(dim_a * dim_b), rng), dim_a, dim_b);
}

/// Random measurement element on N_A (x) N_B, entangled E on E_A (x) E_B with
/// dim E <= dim N, and random isometries between them.
inline Scenario random_scenario(Rng &rng, std::size_t min_dim = 2, std::size_t max_dim = 4) {
    const std::size_t da = uniform_int(min_dim, max_dim, rng);
    const std::size_t db = uniform_int(min_dim, max_dim, rng);
    const std::size_t ea = uniform_int(std::min<std::size_t>(2, da), da, rng);
    const std::size_t eb = uniform_int(std::min<std::size_t>(2, db), db, rng);
    BipartiteOperator q(da, db, random_contraction_psd(static_cast<Eigen::Index>(da * db), rng));
    SchmidtState e = random_entangled_state(ea, eb, rng);
    ComplexMatrix u = random_isometry(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(ea), rng);
    ComplexMatrix v = random_isometry(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(eb), rng);
    return Scenario{std::move(q), std::move(e), std::move(u), std::move(v)};
}

inline OperatorDecomposition random_decomposition(std::size_t da, std::size_t db, std::size_t terms, Rng &rng) {
    std::vector<DecompositionTerm> t;
    for (std::size_t k = 0; k < terms; ++k) {
        t.push_back({random_matrix(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da), rng),
                     random_matrix(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db), rng)});
    }
    return OperatorDecomposition(da, db, std::move(t));
}

inline BipartiteOperator random_operator(std::size_t da, std::size_t db, Rng &rng) {
    return BipartiteOperator(da, db, random_matrix(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db), rng));
}

/// Random protocol with the given qubit count; Alice holds nx inputs, Bob ny,
/// both sides carry `carrier` dimensions of entanglement.
inline EntangledProtocol random_protocol(std::size_t qubits, std::size_t nx, std::size_t ny, SchmidtState e,
                                         Rng &rng) {
    std::vector<ProtocolRound> rounds;
    for (std::size_t k = 0; k < qubits; ++k) {
        const Party p = k % 2 == 0 ? Party::Alice : Party::Bob;
        const std::size_t reg = p == Party::Alice ? nx * e.dim_a() : ny * e.dim_b();
        rounds.push_back({p, random_unitary(static_cast<Eigen::Index>(2 * reg), rng)});
    }
    return make_entangled_protocol(std::move(rounds), std::move(e), nx, ny);
}

/// Rank-r state on d (x) d with random Schmidt bases.
inline SchmidtState random_rank_state(std::size_t d, std::size_t r, Rng &rng) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<double> p(r);
    double total = 0.0;
    for (double &x : p) {
        x = u(rng);
        total += x;
    }
    for (double &x : p) {
        x /= total;
    }
    std::sort(p.begin(), p.end(), std::greater<>());
    const auto dd = static_cast<Eigen::Index>(d);
    const auto rr = static_cast<Eigen::Index>(r);
    return SchmidtState(p, random_isometry(dd, rr, rng), random_isometry(dd, rr, rng));
}

}  // namespace nlsim::testing
