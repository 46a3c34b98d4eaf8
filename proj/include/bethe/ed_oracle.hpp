// Copyright 2026 The bethe-lab Authors
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

#ifndef BETHE_ED_ORACLE_HPP
#define BETHE_ED_ORACLE_HPP

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bethe/combinatorics.hpp"
#include "bethe/errors.hpp"
#include "bethe/state_factory.hpp"

namespace bethe {

/// H = (1/2) sum_n (σ_n · σ_{n+1} - 1) with periodic wrap, restricted to the M-magnon sector.
struct SectorHamiltonian {
    int L = 0;
    int M = 0;
    std::shared_ptr<const SectorBasis> basis;
    /// Basis ordered by colex rank, shared with SparseMagnonState.
    Eigen::MatrixXd matrix;
};

inline constexpr std::size_t kDefaultOracleDimension = 200000;

/// In the occupation basis every anti-aligned bond contributes -1 on the diagonal and
/// +1 to the state with the two spins exchanged.
inline SectorHamiltonian build_hamiltonian(int L, int M, std::size_t max_dimension = kDefaultOracleDimension) {
    if (L < 2) {
        throw std::invalid_argument("Hamiltonian needs L >= 2");
    }
    if (binomial(L, M) > max_dimension) {
        throw BudgetExceeded("sector dimension C(" + std::to_string(L) + "," + std::to_string(M) + ") = " +
                             std::to_string(binomial(L, M)) + " exceeds oracle budget");
    }
    SectorHamiltonian h;
    h.L = L;
    h.M = M;
    h.basis = std::make_shared<const SectorBasis>(L, M);
    const auto dim = static_cast<Eigen::Index>(h.basis->size());
    h.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const Occupation s = h.basis->occupation(static_cast<std::size_t>(r));
        for (int n = 0; n < L; ++n) {
            const int m = (n + 1) % L;
            const bool a = ((s >> n) & 1U) != 0;
            const bool b = ((s >> m) & 1U) != 0;
            if (a == b) {
                continue;
            }
            h.matrix(r, r) -= 1.0;
            const Occupation flipped = s ^ (Occupation{1} << n) ^ (Occupation{1} << m);
            h.matrix(static_cast<Eigen::Index>(h.basis->rank(flipped)), r) += 1.0;
        }
    }
    return h;
}

/// Ascending eigenvalues of the sector block.
inline Eigen::VectorXd spectrum(const SectorHamiltonian &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error("dense eigensolver failed");
    }
    return es.eigenvalues();
}

struct EigenPair {
    double energy;
    SparseMagnonState state;
};

/// Lowest eigenpair; the eigenvector is normalized with its largest-modulus entry positive
/// (first such entry on ties).
inline EigenPair ground_eigenpair(const SectorHamiltonian &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success) {
        throw Error("dense eigensolver failed");
    }
    Eigen::VectorXd v = es.eigenvectors().col(0);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[arg]) + 1e-12) {
            arg = i;
        }
    }
    if (v[arg] < 0) {
        v = -v;
    }
    std::vector<Complex> amps(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        amps[static_cast<std::size_t>(i)] = Complex(v[i], 0.0);
    }
    return {es.eigenvalues()[0], SparseMagnonState(h.basis, std::move(amps))};
}

inline SparseMagnonState apply(const SectorHamiltonian &h, const SparseMagnonState &psi) {
    if (psi.chain_length() != h.L || psi.magnons() != h.M) {
        throw SectorMismatch("state and Hamiltonian sectors differ");
    }
    const auto dim = static_cast<Eigen::Index>(psi.size());
    Eigen::VectorXcd in(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        in[i] = psi.amplitude(static_cast<std::size_t>(i));
    }
    const Eigen::VectorXcd out = h.matrix.cast<Complex>() * in;
    return SparseMagnonState(h.basis, std::vector<Complex>(out.data(), out.data() + out.size()));
}

/// ||H psi - E psi|| / ||psi||.
inline double eigen_residual(const SectorHamiltonian &h, const SparseMagnonState &psi, double energy) {
    const SparseMagnonState hpsi = apply(h, psi);
    double r2 = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        r2 += std::norm(hpsi.amplitude(i) - energy * psi.amplitude(i));
    }
    return std::sqrt(r2 / psi.norm_squared());
}

/// z_i(x) = -1 if site i is occupied, +1 otherwise.
inline int sigma_z(Occupation x, int site) {
    return ((x >> site) & 1U) != 0 ? -1 : 1;
}

/// <σ^z_m σ^z_n> for a normalized state.
inline double zz_expectation(const SparseMagnonState &state, int m, int n) {
    if (std::abs(state.norm_squared() - 1.0) > 1e-8) {
        throw NormalizationError("correlator requires a normalized state (norm^2 = " +
                                 std::to_string(state.norm_squared()) + ")");
    }
    const int L = state.chain_length();
    if (m < 0 || n < 0 || m >= L || n >= L) {
        throw std::out_of_range("site index out of range");
    }
    double s = 0.0;
    for (std::size_t r = 0; r < state.size(); ++r) {
        const Occupation x = state.occupation(r);
        s += std::norm(state.amplitude(r)) * sigma_z(x, m) * sigma_z(x, n);
    }
    return s;
}

/// <σ^z_0 σ^z_l>.
inline double exact_correlator(const SparseMagnonState &state, int l) {
    return zz_expectation(state, 0, l);
}

}  // namespace bethe

#endif  // BETHE_ED_ORACLE_HPP
