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

#ifndef BETHE_EMULATOR_HPP
#define BETHE_EMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "bethe/bethe_solver.hpp"
#include "bethe/errors.hpp"
#include "bethe/gaudin.hpp"
#include "bethe/rng.hpp"
#include "bethe/state_factory.hpp"

namespace bethe {

/// How a unitary is completed from its prescribed first column.
enum class Completion {
    Householder,
    GramSchmidt,
};

struct EmulatorOptions {
    /// Upper bound on C(L,M) * M! composite amplitudes (and on (M!)^2 label-unitary entries).
    std::size_t memory_budget = std::size_t{1} << 22;
    Completion completion = Completion::Householder;
    std::uint64_t completion_seed = 0;
};

/// ||U^† U - 1||_max.
inline double unitarity_defect(const Eigen::MatrixXcd &u) {
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols());
    return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

/// A unitary whose first column is the unit vector `column`.
inline Eigen::MatrixXcd complete_unitary(const Eigen::VectorXcd &column, Completion how, std::uint64_t seed = 0) {
    const Eigen::Index n = column.size();
    if (std::abs(column.norm() - 1.0) > 1e-12) {
        throw ConsistencyError("first column is not a unit vector");
    }
    if (how == Completion::Householder) {
        // Reflect e0 onto exp(-iθ) column (first entry real >= 0), then restore the phase.
        const double theta = std::abs(column[0]) > 0.0 ? std::arg(column[0]) : 0.0;
        const Complex phase = std::polar(1.0, theta);
        const Eigen::VectorXcd y = column / phase;
        Eigen::VectorXcd w = -y;
        w[0] += 1.0;
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(n, n);
        const double ww = w.squaredNorm();
        if (ww > 1e-30) {
            h -= (2.0 / ww) * (w * w.adjoint());
        }
        return phase * h;
    }

    Eigen::MatrixXcd q(n, n);
    q.col(0) = column;
    CounterRng rng(seed, 0x6A09E667F3BCC909ULL);
    for (Eigen::Index c = 1; c < n; ++c) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index p = 0; p < c; ++p) {
                v -= q.col(p) * q.col(p).dot(v);
            }
        }
        const double nv = v.norm();
        if (nv < 1e-10) {
            throw ConsistencyError("Gram-Schmidt breakdown while completing label unitary");
        }
        q.col(c) = v / nv;
    }
    return q;
}

/// System sector (rows, colex rank) ⊗ permutation-label space (columns, SJT order).
struct CompositeState {
    int L = 0;
    int M = 0;
    std::size_t system_dim = 0;
    std::size_t label_dim = 0;
    Eigen::MatrixXcd amplitudes;

    double norm_squared() const {
        return amplitudes.squaredNorm();
    }
};

struct EmulationResult {
    /// Squared norm of the label-0 block.
    double accept_probability = 0.0;
    /// Label-0 block, unnormalized.
    SparseMagnonState projected_state;
    /// |<normalized projected | normalized Bethe state>|^2.
    double overlap_with_target = 0.0;
    /// Composite norm after steps 1..4.
    std::vector<double> step_norms;
    double label_unitary_defect = 0.0;
    double uniform_unitary_defect = 0.0;
};

/// Register-level emulation of the five-step probabilistic Bethe-state preparation.
///
/// The one-hot label qubits are replaced by an M!-dimensional label index and the
/// faucet qubits, which end every step in |0>, are not represented. Steps can be
/// driven one at a time; run() performs all five in order.
class BetheCircuitEmulator {
   public:
    explicit BetheCircuitEmulator(const BetheRootSet &roots, const EmulatorOptions &options = {})
        : roots_(roots), perms_(roots) {
        const int L = roots.chain_length();
        const int M = roots.magnons();
        state_.L = L;
        state_.M = M;
        state_.system_dim = binomial(L, M);
        state_.label_dim = perms_.count();
        if (state_.system_dim > options.memory_budget / state_.label_dim ||
            state_.label_dim > options.memory_budget / state_.label_dim) {
            throw BudgetExceeded("composite state C(L,M)*M! = " + std::to_string(state_.system_dim) + "*" +
                                 std::to_string(state_.label_dim) + " exceeds memory budget");
        }
        basis_ = std::make_shared<const SectorBasis>(L, M);

        const double inv = 1.0 / std::sqrt(static_cast<double>(state_.label_dim));
        Eigen::VectorXcd labelled(static_cast<Eigen::Index>(state_.label_dim));
        Eigen::VectorXcd uniform(static_cast<Eigen::Index>(state_.label_dim));
        for (std::size_t i = 0; i < state_.label_dim; ++i) {
            labelled[static_cast<Eigen::Index>(i)] = perms_.entries()[i] * inv;
            uniform[static_cast<Eigen::Index>(i)] = Complex(inv, 0.0);
        }
        w_labelled_ = complete_unitary(labelled, options.completion, options.completion_seed);
        w_uniform_ = complete_unitary(uniform, options.completion, options.completion_seed + 1);
        label_defect_ = unitarity_defect(w_labelled_);
        uniform_defect_ = unitarity_defect(w_uniform_);
        if (label_defect_ > 1e-12 || uniform_defect_ > 1e-12) {
            throw ConsistencyError("label unitary completion is not unitary to 1e-12");
        }
    }

    const CompositeState &state() const {
        return state_;
    }
    const Eigen::MatrixXcd &labelled_unitary() const {
        return w_labelled_;
    }
    const Eigen::MatrixXcd &uniform_unitary() const {
        return w_uniform_;
    }

    /// Step 1: Dicke state on the system, label register at index 0.
    void prepare_dicke() {
        state_.amplitudes = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(state_.system_dim),
                                                   static_cast<Eigen::Index>(state_.label_dim));
        const double a = 1.0 / std::sqrt(static_cast<double>(state_.system_dim));
        state_.amplitudes.col(0).setConstant(Complex(a, 0.0));
    }

    /// Step 2: W_A on the label factor; W_A |0> = sum_P eps_P A_P |P> / sqrt(M!).
    void prepare_labels() {
        state_.amplitudes = state_.amplitudes * w_labelled_.transpose();
    }

    /// Step 3: multiply (x, P) by exp(sign * i sum_j k_P(j) x_j).
    void apply_phases(double sign = 1.0) {
        const auto &k = roots_.momenta();
        for (std::size_t r = 0; r < state_.system_dim; ++r) {
            const Positions x = basis_->positions(r);
            for (std::size_t p = 0; p < state_.label_dim; ++p) {
                const Permutation &perm = perms_.permutations()[p];
                double phase = 0.0;
                for (int j = 0; j < state_.M; ++j) {
                    phase += k[perm[j]] * x[j];
                }
                state_.amplitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) *=
                    std::polar(1.0, sign * phase);
            }
        }
    }

    /// Step 4: W^† on the label factor, with W |0> the uniform superposition.
    void unprepare_labels() {
        state_.amplitudes = state_.amplitudes * w_uniform_.conjugate();
    }

    /// Step 5: project the label register onto index 0.
    EmulationResult measure() const {
        EmulationResult out{0.0, SparseMagnonState(basis_, std::vector<Complex>(state_.system_dim)), 0.0, {}, 0, 0};
        std::vector<Complex> block(state_.system_dim);
        for (std::size_t r = 0; r < state_.system_dim; ++r) {
            block[r] = state_.amplitudes(static_cast<Eigen::Index>(r), 0);
        }
        out.projected_state = SparseMagnonState(basis_, std::move(block));
        out.accept_probability = out.projected_state.norm_squared();
        if (out.accept_probability > 0.0) {
            out.overlap_with_target = overlap_fidelity(out.projected_state, build_bethe_state(roots_));
        }
        out.label_unitary_defect = label_defect_;
        out.uniform_unitary_defect = uniform_defect_;
        return out;
    }

    EmulationResult run() {
        std::vector<double> norms;
        prepare_dicke();
        norms.push_back(state_.norm_squared());
        prepare_labels();
        norms.push_back(state_.norm_squared());
        apply_phases();
        norms.push_back(state_.norm_squared());
        unprepare_labels();
        norms.push_back(state_.norm_squared());
        for (double n : norms) {
            if (std::abs(n - 1.0) > 1e-10) {
                throw ConsistencyError("composite norm drifted to " + std::to_string(n));
            }
        }
        EmulationResult r = measure();
        r.step_norms = std::move(norms);
        return r;
    }

   private:
    BetheRootSet roots_;
    PermutationAmplitudes perms_;
    std::shared_ptr<const SectorBasis> basis_;
    CompositeState state_;
    Eigen::MatrixXcd w_labelled_;
    Eigen::MatrixXcd w_uniform_;
    double label_defect_ = 0.0;
    double uniform_defect_ = 0.0;
};

inline EmulationResult run_algorithm(const BetheRootSet &roots, const EmulatorOptions &options = {}) {
    if (roots.magnons() < 1) {
        throw std::invalid_argument("emulation needs M >= 1");
    }
    BetheCircuitEmulator emu(roots, options);
    return emu.run();
}

/// max_x |block(x) - f(x) / (M! sqrt(C(L,M)))|.
inline double projected_amplitude_check(const BetheRootSet &roots, const EmulatorOptions &options = {}) {
    const EmulationResult r = run_algorithm(roots, options);
    const SparseMagnonState psi = build_bethe_state(roots);
    const double scale = 1.0 / (static_cast<double>(factorial(roots.magnons())) *
                                std::sqrt(static_cast<double>(psi.size())));
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        worst = std::max(worst, std::abs(r.projected_state.amplitude(i) - scale * psi.amplitude(i)));
    }
    return worst;
}

/// Shot outcomes: rejects (label register != 0) and accepted system patterns by colex rank.
struct ShotCounts {
    int L = 0;
    int M = 0;
    std::uint64_t shots = 0;
    std::uint64_t rejects = 0;
    std::shared_ptr<const SectorBasis> basis;
    std::vector<std::uint64_t> accepted;

    std::uint64_t accepted_total() const {
        std::uint64_t s = 0;
        for (auto c : accepted) {
            s += c;
        }
        return s;
    }
};

/// Two-stage sampler: Bernoulli(|alpha|^2) accept, then a categorical draw from |<x|target>|^2.
///
/// Shots are cut into fixed blocks of kBlockShots; block b draws from CounterRng(seed, b).
/// Counts therefore depend only on (seed, shots), never on the thread count.
class ShotSampler {
   public:
    static constexpr std::uint64_t kBlockShots = std::uint64_t{1} << 16;

    ShotSampler(double accept_probability, const SparseMagnonState &target)
        : accept_(accept_probability), basis_(target.shared_basis()), cumulative_(target.size()) {
        if (!(accept_ >= 0.0 && accept_ <= 1.0)) {
            throw std::invalid_argument("accept probability outside [0, 1]");
        }
        if (!(target.norm_squared() > 0.0)) {
            throw NormalizationError("target distribution of the zero state");
        }
        double run = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i) {
            run += std::norm(target.amplitude(i)) / target.norm_squared();
            cumulative_[i] = run;
        }
        cumulative_.back() = 1.0;
    }

    explicit ShotSampler(const BetheRootSet &roots)
        : ShotSampler(success_probability(roots).success_probability, build_bethe_state(roots)) {
    }

    double accept_probability() const {
        return accept_;
    }
    /// Probability of each accepted pattern, by colex rank.
    std::vector<double> distribution() const {
        std::vector<double> p(cumulative_.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = cumulative_[i] - prev;
            prev = cumulative_[i];
        }
        return p;
    }

    ShotCounts sample(std::uint64_t shots, std::uint64_t seed, unsigned threads = 1) const {
        ShotCounts out;
        out.L = basis_->chain_length();
        out.M = basis_->magnons();
        out.shots = shots;
        out.basis = basis_;
        out.accepted.assign(basis_->size(), 0);
        const std::uint64_t blocks = (shots + kBlockShots - 1) / kBlockShots;
        threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));

        std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(basis_->size(), 0));
        std::vector<std::uint64_t> partial_rejects(threads, 0);
        auto work = [&](unsigned t) {
            for (std::uint64_t b = t; b < blocks; b += threads) {
                CounterRng rng(seed, b);
                const std::uint64_t begin = b * kBlockShots;
                const std::uint64_t end = std::min(shots, begin + kBlockShots);
                for (std::uint64_t s = begin; s < end; ++s) {
                    if (!(rng.uniform() < accept_)) {
                        ++partial_rejects[t];
                        continue;
                    }
                    const double u = rng.uniform();
                    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
                    idx = std::min(idx, cumulative_.size() - 1);
                    ++partial[t][idx];
                }
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back(work, t);
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        for (unsigned t = 0; t < threads; ++t) {
            out.rejects += partial_rejects[t];
            for (std::size_t i = 0; i < out.accepted.size(); ++i) {
                out.accepted[i] += partial[t][i];
            }
        }
        return out;
    }

   private:
    double accept_;
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<double> cumulative_;
};

inline ShotCounts sample_shots(const BetheRootSet &roots, std::uint64_t shots, std::uint64_t seed,
                               unsigned threads = 1) {
    return ShotSampler(roots).sample(shots, seed, threads);
}

}  // namespace bethe

#endif  // BETHE_EMULATOR_HPP
