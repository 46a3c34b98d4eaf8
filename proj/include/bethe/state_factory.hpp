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

#ifndef BETHE_STATE_FACTORY_HPP
#define BETHE_STATE_FACTORY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bethe/bethe_solver.hpp"
#include "bethe/combinatorics.hpp"
#include "bethe/errors.hpp"

namespace bethe {

using Complex = std::complex<double>;

/// Arrangement P of {0..M-1}; P[j] is the image of j.
using Permutation = std::vector<int>;

/// Index of a permutation in lexicographic order (Lehmer code).
inline std::size_t lehmer_rank(const Permutation &p) {
    const std::size_t n = p.size();
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p[j] < p[i]) {
                ++smaller;
            }
        }
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

/// All permutations of {0..M-1} in Steinhaus-Johnson-Trotter order.
///
/// Consecutive entries differ by one adjacent transposition; `swap_position[i]` is the
/// index l such that entry i is entry i-1 with positions l and l+1 exchanged
/// (swap_position[0] is unused). The first entry is the identity.
struct AdjacentTranspositionWalk {
    std::vector<Permutation> permutations;
    std::vector<int> swap_position;
};

inline AdjacentTranspositionWalk steinhaus_johnson_trotter(int M) {
    AdjacentTranspositionWalk walk;
    Permutation p(static_cast<std::size_t>(M));
    std::vector<int> dir(static_cast<std::size_t>(M), -1);
    for (int j = 0; j < M; ++j) {
        p[j] = j;
    }
    walk.permutations.push_back(p);
    walk.swap_position.push_back(-1);
    while (true) {
        // Largest mobile element: points at a smaller neighbour.
        int mobile = -1;
        int pos = -1;
        for (int i = 0; i < M; ++i) {
            const int next = i + dir[p[i]];
            if (next >= 0 && next < M && p[next] < p[i] && p[i] > mobile) {
                mobile = p[i];
                pos = i;
            }
        }
        if (mobile < 0) {
            break;
        }
        const int next = pos + dir[mobile];
        std::swap(p[pos], p[next]);
        walk.permutations.push_back(p);
        walk.swap_position.push_back(std::min(pos, next));
        for (int v = mobile + 1; v < M; ++v) {
            dir[v] = -dir[v];
        }
    }
    return walk;
}

/// The M! coefficients eps_P A_P of the coordinate Bethe wavefunction.
class PermutationAmplitudes {
   public:
    /// Loop-closure tolerance for the adjacent-transposition recursion.
    static constexpr double kClosureTolerance = 1e-10;

    explicit PermutationAmplitudes(const BetheRootSet &roots) : M_(roots.magnons()) {
        if (M_ < 1) {
            throw std::invalid_argument("permutation amplitudes need M >= 1");
        }
        const auto &k = roots.momenta();
        AdjacentTranspositionWalk walk = steinhaus_johnson_trotter(M_);
        perms_ = std::move(walk.permutations);
        entries_.resize(perms_.size());
        entries_[0] = Complex(1.0, 0.0);
        // A_P / A_P' = -S(k_P(l), k_P(l+1)) and eps_P = -eps_P', so eps*A picks up +S.
        for (std::size_t i = 1; i < perms_.size(); ++i) {
            const int l = walk.swap_position[i];
            const Permutation &p = perms_[i];
            entries_[i] = entries_[i - 1] * s_matrix(k[p[l]], k[p[l + 1]]);
        }
        if (M_ >= 2) {
            // The SJT sequence is a Hamiltonian cycle: the last entry is one swap of
            // positions (0,1) away from the identity.
            const Permutation &last = perms_.back();
            Permutation closing = last;
            std::swap(closing[0], closing[1]);
            bool is_identity = true;
            for (int j = 0; j < M_; ++j) {
                is_identity = is_identity && closing[j] == j;
            }
            if (is_identity) {
                const Complex back = entries_.back() * s_matrix(k[closing[0]], k[closing[1]]);
                if (std::abs(back - Complex(1.0, 0.0)) > kClosureTolerance) {
                    throw ConsistencyError("permutation amplitudes fail loop closure by " +
                                           std::to_string(std::abs(back - 1.0)));
                }
            }
        }
        index_by_lehmer_.assign(perms_.size(), 0);
        for (std::size_t i = 0; i < perms_.size(); ++i) {
            index_by_lehmer_[lehmer_rank(perms_[i])] = i;
        }
    }

    int size() const {
        return M_;
    }
    std::size_t count() const {
        return perms_.size();
    }
    /// Permutations in SJT order, identity first.
    const std::vector<Permutation> &permutations() const {
        return perms_;
    }
    /// eps_P A_P in the same order as permutations().
    const std::vector<Complex> &entries() const {
        return entries_;
    }
    Complex at(const Permutation &p) const {
        return entries_[index_by_lehmer_.at(lehmer_rank(p))];
    }
    std::size_t index_of(const Permutation &p) const {
        return index_by_lehmer_.at(lehmer_rank(p));
    }

   private:
    int M_;
    std::vector<Permutation> perms_;
    std::vector<Complex> entries_;
    std::vector<std::size_t> index_by_lehmer_;
};

inline PermutationAmplitudes build_permutation_amplitudes(const BetheRootSet &roots) {
    return PermutationAmplitudes(roots);
}

/// Complex amplitudes over the full M-magnon sector, indexed by colex rank of the
/// position tuple. Immutable; the squared norm is cached at construction.
class SparseMagnonState {
   public:
    SparseMagnonState(int L, int M, std::vector<Complex> amplitudes)
        : basis_(std::make_shared<const SectorBasis>(L, M)), amps_(std::move(amplitudes)) {
        if (amps_.size() != basis_->size()) {
            throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) +
                                        " does not match sector dimension " + std::to_string(basis_->size()));
        }
        norm2_ = 0.0;
        for (const auto &a : amps_) {
            norm2_ += std::norm(a);
        }
    }
    SparseMagnonState(std::shared_ptr<const SectorBasis> basis, std::vector<Complex> amplitudes)
        : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
        if (amps_.size() != basis_->size()) {
            throw std::invalid_argument("amplitude count does not match sector dimension");
        }
        for (const auto &a : amps_) {
            norm2_ += std::norm(a);
        }
    }

    int chain_length() const {
        return basis_->chain_length();
    }
    int magnons() const {
        return basis_->magnons();
    }
    std::size_t size() const {
        return amps_.size();
    }
    const SectorBasis &basis() const {
        return *basis_;
    }
    const std::shared_ptr<const SectorBasis> &shared_basis() const {
        return basis_;
    }
    std::span<const Complex> amplitudes() const {
        return amps_;
    }
    Complex amplitude(std::size_t rank) const {
        return amps_[rank];
    }
    Complex amplitude(const Positions &x) const {
        return amps_[basis_->rank(x)];
    }
    Positions positions(std::size_t rank) const {
        return basis_->positions(rank);
    }
    Occupation occupation(std::size_t rank) const {
        return basis_->occupation(rank);
    }
    double norm_squared() const {
        return norm2_;
    }

    /// Applies a global complex factor.
    SparseMagnonState scaled(Complex factor) const {
        std::vector<Complex> out(amps_);
        for (auto &a : out) {
            a *= factor;
        }
        return SparseMagnonState(basis_, std::move(out));
    }

   private:
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<Complex> amps_;
    double norm2_ = 0.0;
};

/// |psi> = sum_x f(x) |x>, f(x) = sum_P eps_P A_P exp(i sum_j k_P(j) x_j); unnormalized.
inline SparseMagnonState build_bethe_state(const BetheRootSet &roots) {
    const int L = roots.chain_length();
    const int M = roots.magnons();
    auto basis = std::make_shared<const SectorBasis>(L, M);
    if (M == 0) {
        return SparseMagnonState(basis, {Complex(1.0, 0.0)});
    }
    const PermutationAmplitudes perm(roots);
    const auto &k = roots.momenta();

    // plane[m * L + x] = exp(i k_m x)
    std::vector<Complex> plane(static_cast<std::size_t>(M * L));
    for (int m = 0; m < M; ++m) {
        for (int x = 0; x < L; ++x) {
            plane[m * L + x] = std::polar(1.0, k[m] * x);
        }
    }
    std::vector<Complex> amps(basis->size());
    for (std::size_t r = 0; r < basis->size(); ++r) {
        const Positions x = basis->positions(r);
        Complex f(0.0, 0.0);
        for (std::size_t i = 0; i < perm.count(); ++i) {
            const Permutation &p = perm.permutations()[i];
            Complex phase(1.0, 0.0);
            for (int j = 0; j < M; ++j) {
                phase *= plane[p[j] * L + x[j]];
            }
            f += perm.entries()[i] * phase;
        }
        amps[r] = f;
    }
    return SparseMagnonState(basis, std::move(amps));
}

/// (j,l) = 2 - exp(-i k_j) - exp(i k_l).
inline Complex bracket(const BetheRootSet &roots, int j, int l) {
    const auto &k = roots.momenta();
    if (j < 0 || l < 0 || j >= roots.magnons() || l >= roots.magnons()) {
        throw std::out_of_range("bracket index out of range");
    }
    return 2.0 - std::polar(1.0, -k[j]) - std::polar(1.0, k[l]);
}

/// prod_{j<l} (j,l).
inline Complex bracket_product(const BetheRootSet &roots) {
    Complex p(1.0, 0.0);
    for (int j = 0; j < roots.magnons(); ++j) {
        for (int l = j + 1; l < roots.magnons(); ++l) {
            const Complex b = bracket(roots, j, l);
            if (b == Complex(0.0, 0.0)) {
                throw SingularBracket("bracket (" + std::to_string(j) + "," + std::to_string(l) + ") vanishes");
            }
            p *= b;
        }
    }
    return p;
}

/// |phi> = [prod_{j<l} (j,l)] |psi>.
inline SparseMagnonState build_rescaled_state(const BetheRootSet &roots) {
    return build_bethe_state(roots).scaled(bracket_product(roots));
}

/// Uniform superposition of all C(L,M) basis states.
inline SparseMagnonState build_dicke_state(int L, int M) {
    auto basis = std::make_shared<const SectorBasis>(L, M);
    const double a = 1.0 / std::sqrt(static_cast<double>(basis->size()));
    return SparseMagnonState(basis, std::vector<Complex>(basis->size(), Complex(a, 0.0)));
}

/// <a|b> = sum_x conj(a_x) b_x.
inline Complex inner_product(const SparseMagnonState &a, const SparseMagnonState &b) {
    if (a.chain_length() != b.chain_length() || a.magnons() != b.magnons()) {
        throw SectorMismatch("inner product between sectors (" + std::to_string(a.chain_length()) + "," +
                             std::to_string(a.magnons()) + ") and (" + std::to_string(b.chain_length()) + "," +
                             std::to_string(b.magnons()) + ")");
    }
    Complex s(0.0, 0.0);
    for (std::size_t r = 0; r < a.size(); ++r) {
        s += std::conj(a.amplitude(r)) * b.amplitude(r);
    }
    return s;
}

inline SparseMagnonState normalize(const SparseMagnonState &a) {
    if (!(a.norm_squared() > 0.0)) {
        throw NormalizationError("cannot normalize the zero state");
    }
    return a.scaled(Complex(1.0 / std::sqrt(a.norm_squared()), 0.0));
}

/// Translates every position by `shift` sites (mod L).
inline SparseMagnonState translated(const SparseMagnonState &a, int shift) {
    const int L = a.chain_length();
    std::vector<Complex> out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        Positions x = a.positions(r);
        for (int &p : x) {
            p = ((p + shift) % L + L) % L;
        }
        std::sort(x.begin(), x.end());
        out[a.basis().rank(x)] = a.amplitude(r);
    }
    return SparseMagnonState(a.shared_basis(), std::move(out));
}

/// |<a|b>|^2 / (<a|a><b|b>).
inline double overlap_fidelity(const SparseMagnonState &a, const SparseMagnonState &b) {
    const double n = a.norm_squared() * b.norm_squared();
    if (!(n > 0.0)) {
        throw NormalizationError("overlap with the zero state");
    }
    return std::norm(inner_product(a, b)) / n;
}

}  // namespace bethe

#endif  // BETHE_STATE_FACTORY_HPP
