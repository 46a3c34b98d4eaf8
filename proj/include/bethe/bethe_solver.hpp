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

#ifndef BETHE_BETHE_SOLVER_HPP
#define BETHE_BETHE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bethe/combinatorics.hpp"
#include "bethe/errors.hpp"

namespace bethe {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// u(k) = cot(k/2) / 2.
inline double rapidity_of(double k) {
    return 0.5 / std::tan(0.5 * k);
}

/// Inverse of rapidity_of on the branch (0, 2π).
inline double momentum_of(double u) {
    return kPi - 2.0 * std::atan(2.0 * u);
}

/// Maps any real angle into [0, 2π).
inline double wrap_momentum(double k) {
    double r = std::fmod(k, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r;
}

namespace detail {
inline void require_distinct(double kj, double kl) {
    double d = wrap_momentum(kj - kl);
    if (d < 1e-14 || kTwoPi - d < 1e-14) {
        throw DegenerateRootError("coincident momenta " + std::to_string(kj) + " and " + std::to_string(kl));
    }
}
}  // namespace detail

/// Two-magnon scattering amplitude S(kj, kl) = (u_j - u_l + i) / (u_j - u_l - i).
inline std::complex<double> s_matrix(double kj, double kl) {
    detail::require_distinct(kj, kl);
    const std::complex<double> du(rapidity_of(kj) - rapidity_of(kl), 0.0);
    const std::complex<double> i(0.0, 1.0);
    return (du + i) / (du - i);
}

/// Real scattering phase with S(kj, kl) = -exp(i Θ(kj, kl)).
inline double theta_phase(double kj, double kl) {
    const double num = std::sin(0.5 * (kj - kl));
    const double den = std::cos(0.5 * (kj - kl)) - std::cos(0.5 * (kj + kl));
    if (num == 0.0 && den == 0.0) {
        throw DegenerateRootError("theta_phase: 0/0 at coincident momenta");
    }
    return 2.0 * std::atan(num / den);
}

/// max_j |exp(i k_j L) - prod_{l != j} S(k_j, k_l)|.
inline double product_form_residual(int L, std::span<const double> k) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        std::complex<double> rhs(1.0, 0.0);
        for (std::size_t l = 0; l < k.size(); ++l) {
            if (l != j) {
                rhs *= s_matrix(k[j], k[l]);
            }
        }
        const std::complex<double> lhs = std::polar(1.0, k[j] * L);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// An on-shell set of M real Bethe roots for a periodic chain of length L.
///
/// Only constructible through from_momenta (or the solvers), which enforce:
/// L even, M <= L/2, momenta in (0, 2π) and pairwise distinct, product-form
/// residual <= 1e-10. Roots are ordered by strictly increasing counting number.
class BetheRootSet {
   public:
    static constexpr double kMaxResidual = 1e-10;
    static constexpr double kMinGap = 1e-9;

    /// Validates and completes a root set. Counting numbers are recomputed from the
    /// logarithmic equations; if `expected` is non-empty it must match them.
    static BetheRootSet from_momenta(int L, std::vector<double> momenta,
                                     std::span<const CountingNumber> expected = {}) {
        if (L < 2 || L % 2 != 0) {
            throw std::invalid_argument("chain length must be even and >= 2, got " + std::to_string(L));
        }
        const int M = static_cast<int>(momenta.size());
        if (M > L / 2) {
            throw std::invalid_argument("magnon number " + std::to_string(M) + " exceeds L/2");
        }
        BetheRootSet r;
        r.L_ = L;
        r.M_ = M;
        for (double &k : momenta) {
            if (!std::isfinite(k)) {
                throw NotRealSolution("non-finite momentum");
            }
            k = wrap_momentum(k);
            if (k == 0.0) {
                throw NotRealSolution("momentum k = 0 has infinite rapidity");
            }
        }
        for (int j = 0; j < M; ++j) {
            for (int l = j + 1; l < M; ++l) {
                double d = std::abs(momenta[j] - momenta[l]);
                if (std::min(d, kTwoPi - d) <= kMinGap) {
                    throw NotRealSolution("momenta not pairwise distinct");
                }
            }
        }
        std::vector<double> u(momenta.size());
        std::transform(momenta.begin(), momenta.end(), u.begin(), rapidity_of);

        std::vector<CountingNumber> counting(momenta.size());
        for (int j = 0; j < M; ++j) {
            double phase = 2.0 * L * std::atan(2.0 * u[j]);
            for (int l = 0; l < M; ++l) {
                if (l != j) {
                    phase -= 2.0 * std::atan(u[j] - u[l]);
                }
            }
            const double value = phase / kTwoPi;
            const double twice = std::round(2.0 * value);
            if (std::abs(2.0 * value - twice) > 1e-6) {
                throw NotRealSolution("logarithmic Bethe equation not satisfied (counting number " +
                                      std::to_string(value) + ")");
            }
            counting[j] = CountingNumber::from_twice(static_cast<int>(twice));
            if (counting[j].is_half_integer() != (M % 2 == 0)) {
                throw NotRealSolution("counting number parity inconsistent with M");
            }
        }

        std::vector<std::size_t> order(momenta.size());
        for (std::size_t j = 0; j < order.size(); ++j) {
            order[j] = j;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counting[a] < counting[b]; });
        for (std::size_t j = 0; j < order.size(); ++j) {
            r.momenta_.push_back(momenta[order[j]]);
            r.rapidities_.push_back(u[order[j]]);
            r.counting_.push_back(counting[order[j]]);
        }
        for (std::size_t j = 1; j < r.counting_.size(); ++j) {
            if (!(r.counting_[j - 1] < r.counting_[j])) {
                throw NotRealSolution("counting numbers not strictly increasing");
            }
        }
        if (!expected.empty()) {
            std::vector<CountingNumber> want(expected.begin(), expected.end());
            std::sort(want.begin(), want.end());
            if (want != r.counting_) {
                throw NotRealSolution("roots belong to a different counting-number set");
            }
        }
        r.residual_ = product_form_residual(L, r.momenta_);
        if (!(r.residual_ <= kMaxResidual)) {
            throw NotRealSolution("product-form residual " + std::to_string(r.residual_) + " exceeds 1e-10");
        }
        return r;
    }

    int chain_length() const {
        return L_;
    }
    int magnons() const {
        return M_;
    }
    const std::vector<double> &momenta() const {
        return momenta_;
    }
    const std::vector<double> &rapidities() const {
        return rapidities_;
    }
    const std::vector<CountingNumber> &counting_numbers() const {
        return counting_;
    }
    double residual() const {
        return residual_;
    }
    /// E = -sum_j 4 sin^2(k_j / 2).
    double energy() const {
        double e = 0.0;
        for (double k : momenta_) {
            const double s = std::sin(0.5 * k);
            e -= 4.0 * s * s;
        }
        return e;
    }
    std::vector<double> sorted_momenta() const {
        std::vector<double> k = momenta_;
        std::sort(k.begin(), k.end());
        return k;
    }

   private:
    BetheRootSet() = default;

    int L_ = 0;
    int M_ = 0;
    std::vector<double> momenta_;
    std::vector<double> rapidities_;
    std::vector<CountingNumber> counting_;
    double residual_ = 0.0;
};

inline double energy_of(const BetheRootSet &roots) {
    return roots.energy();
}

struct NewtonOptions {
    int max_iterations = 200;
    int max_halvings = 30;
    /// Converged when every |Δu_j| <= tolerance * max(1, |u_j|).
    double tolerance = 1e-13;
};

namespace detail {

// F_j(u) = 2L atan(2u_j) - sum_{l != j} 2 atan(u_j - u_l) - 2π I_j
inline Eigen::VectorXd log_bethe_residual(int L, const Eigen::VectorXd &u, const Eigen::VectorXd &I) {
    const Eigen::Index M = u.size();
    Eigen::VectorXd f(M);
    for (Eigen::Index j = 0; j < M; ++j) {
        double v = 2.0 * L * std::atan(2.0 * u[j]) - kTwoPi * I[j];
        for (Eigen::Index l = 0; l < M; ++l) {
            if (l != j) {
                v -= 2.0 * std::atan(u[j] - u[l]);
            }
        }
        f[j] = v;
    }
    return f;
}

inline Eigen::MatrixXd log_bethe_jacobian(int L, const Eigen::VectorXd &u) {
    const Eigen::Index M = u.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M, M);
    for (Eigen::Index j = 0; j < M; ++j) {
        double diag = 4.0 * L / (1.0 + 4.0 * u[j] * u[j]);
        for (Eigen::Index l = 0; l < M; ++l) {
            if (l == j) {
                continue;
            }
            const double d = u[j] - u[l];
            const double w = 2.0 / (1.0 + d * d);
            diag -= w;
            J(j, l) = w;
        }
        J(j, j) = diag;
    }
    return J;
}

inline std::vector<double> to_std(const Eigen::VectorXd &v) {
    return {v.data(), v.data() + v.size()};
}

}  // namespace detail

/// Solves the logarithmic rapidity equations
///     2L atan(2u_j) = 2π I_j + sum_{l != j} 2 atan(u_j - u_l)
/// by damped Newton from the decoupled seed u_j = tan(π I_j / L) / 2, then
/// validates the result against the product-form Bethe equations.
inline BetheRootSet solve_by_counting_numbers(int L, std::span<const CountingNumber> counting,
                                              const NewtonOptions &options = {}) {
    const int M = static_cast<int>(counting.size());
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("chain length must be even and >= 2");
    }
    if (M > L / 2) {
        throw std::invalid_argument("magnon number exceeds L/2");
    }
    for (int j = 0; j < M; ++j) {
        if (counting[j].is_half_integer() != (M % 2 == 0)) {
            throw std::invalid_argument("counting numbers must be half-integers for even M, integers for odd M");
        }
        if (j > 0 && !(counting[j - 1] < counting[j])) {
            throw std::invalid_argument("counting numbers must be strictly increasing");
        }
        if (std::abs(counting[j].value()) >= 0.5 * L) {
            throw std::invalid_argument("counting number outside |I| < L/2");
        }
    }
    if (M == 0) {
        return BetheRootSet::from_momenta(L, {});
    }

    Eigen::VectorXd I(M);
    Eigen::VectorXd u(M);
    for (int j = 0; j < M; ++j) {
        I[j] = counting[j].value();
        u[j] = 0.5 * std::tan(kPi * I[j] / L);
    }

    Eigen::VectorXd f = detail::log_bethe_residual(L, u, I);
    bool converged = false;
    for (int it = 0; it < options.max_iterations && !converged; ++it) {
        const Eigen::MatrixXd J = detail::log_bethe_jacobian(L, u);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-15)) {
            throw SolverFailure("singular Jacobian", detail::to_std(u));
        }
        const Eigen::VectorXd step = lu.solve(-f);
        if (!step.allFinite()) {
            throw SolverFailure("non-finite Newton step", detail::to_std(u));
        }

        const double f_norm = f.lpNorm<Eigen::Infinity>();
        double t = 1.0;
        Eigen::VectorXd trial = u + step;
        Eigen::VectorXd f_trial = detail::log_bethe_residual(L, trial, I);
        int halvings = 0;
        while (!(f_trial.lpNorm<Eigen::Infinity>() <= f_norm) && halvings < options.max_halvings) {
            t *= 0.5;
            ++halvings;
            trial = u + t * step;
            f_trial = detail::log_bethe_residual(L, trial, I);
        }
        if (!(f_trial.lpNorm<Eigen::Infinity>() <= f_norm)) {
            // Stuck at round-off: accept the current iterate if it already solves the equations.
            if (f_norm <= 1e-11 * L) {
                converged = true;
                break;
            }
            throw SolverFailure("line search failed to reduce the residual", detail::to_std(u));
        }

        converged = true;
        for (int j = 0; j < M; ++j) {
            if (std::abs(trial[j] - u[j]) > options.tolerance * std::max(1.0, std::abs(trial[j]))) {
                converged = false;
            }
        }
        u = trial;
        f = f_trial;
        if (!u.allFinite()) {
            throw SolverFailure("iterate diverged", detail::to_std(u));
        }
    }
    if (!converged) {
        throw SolverFailure("Newton iteration did not converge in " + std::to_string(options.max_iterations) +
                                " iterations",
                            detail::to_std(u));
    }

    for (int j = 0; j < M; ++j) {
        for (int l = j + 1; l < M; ++l) {
            if (std::abs(u[j] - u[l]) <= BetheRootSet::kMinGap) {
                throw NotRealSolution("Newton converged to coincident rapidities");
            }
        }
    }
    std::vector<double> k(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        k[j] = momentum_of(u[j]);
    }
    return BetheRootSet::from_momenta(L, std::move(k), counting);
}

inline BetheRootSet solve_by_counting_numbers(int L, const std::vector<CountingNumber> &counting,
                                              const NewtonOptions &options = {}) {
    return solve_by_counting_numbers(L, std::span<const CountingNumber>(counting), options);
}

/// Antiferromagnetic ground state: M = L/2 with centered consecutive counting numbers.
inline BetheRootSet ground_state(int L) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("ground_state requires even L >= 2");
    }
    return solve_by_counting_numbers(L, centered_counting_numbers(L / 2));
}

/// Admissible counting numbers for (L, M): |I| <= (L-1)/2, half-integers iff M even.
inline std::vector<CountingNumber> admissible_counting_values(int L, int M) {
    std::vector<CountingNumber> values;
    const int parity = (M % 2 == 0) ? 1 : 0;
    for (int twice = -(L - 1); twice <= L - 1; ++twice) {
        if ((std::abs(twice) % 2) == parity) {
            values.push_back(CountingNumber::from_twice(twice));
        }
    }
    return values;
}

/// Visits every strictly increasing M-subset of the admissible window in lexicographic
/// order. The visitor returns false to stop early.
inline void for_each_counting_set(int L, int M,
                                  const std::function<bool(std::span<const CountingNumber>)> &visit) {
    const std::vector<CountingNumber> values = admissible_counting_values(L, M);
    const int n = static_cast<int>(values.size());
    if (M > n) {
        return;
    }
    std::vector<int> idx(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        idx[j] = j;
    }
    std::vector<CountingNumber> set(static_cast<std::size_t>(M));
    while (true) {
        for (int j = 0; j < M; ++j) {
            set[j] = values[idx[j]];
        }
        if (!visit(set)) {
            return;
        }
        int j = M - 1;
        while (j >= 0 && idx[j] == n - M + j) {
            --j;
        }
        if (j < 0) {
            return;
        }
        ++idx[j];
        for (int t = j + 1; t < M; ++t) {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

struct EnumerationStats {
    std::size_t candidates = 0;
    std::size_t solved = 0;
    std::size_t solver_failures = 0;
    std::size_t not_real = 0;
    std::size_t duplicates = 0;
    std::size_t pruned = 0;
};

namespace detail {
inline bool same_roots(const BetheRootSet &a, const BetheRootSet &b, double tol = 1e-8) {
    if (a.magnons() != b.magnons()) {
        return false;
    }
    const auto ka = a.sorted_momenta();
    const auto kb = b.sorted_momenta();
    for (std::size_t j = 0; j < ka.size(); ++j) {
        if (std::abs(ka[j] - kb[j]) > tol) {
            return false;
        }
    }
    return true;
}

/// Tries one candidate; updates stats. Returns nullopt-like flag via pointer.
inline bool try_solve(int L, std::span<const CountingNumber> set, EnumerationStats &stats, BetheRootSet *out) {
    try {
        *out = solve_by_counting_numbers(L, set);
        return true;
    } catch (const SolverFailure &) {
        ++stats.solver_failures;
    } catch (const NotRealSolution &) {
        ++stats.not_real;
    } catch (const DegenerateRootError &) {
        ++stats.not_real;
    }
    return false;
}
}  // namespace detail

/// All real solutions reachable from admissible counting-number sets, deduplicated by
/// sorted momenta (tolerance 1e-8) and returned in lexicographic counting-number order.
/// `max_sets` caps the number of candidate sets attempted (0 = no cap).
inline std::vector<BetheRootSet> enumerate_real_solutions(int L, int M, std::size_t max_sets = 0,
                                                          EnumerationStats *stats_out = nullptr) {
    if (L < 2 || L % 2 != 0 || M < 1 || M > L / 2) {
        throw std::invalid_argument("enumerate_real_solutions requires even L and 1 <= M <= L/2");
    }
    EnumerationStats stats;
    std::vector<BetheRootSet> found;
    BetheRootSet scratch = BetheRootSet::from_momenta(L, {});
    for_each_counting_set(L, M, [&](std::span<const CountingNumber> set) {
        if (max_sets != 0 && stats.candidates >= max_sets) {
            return false;
        }
        ++stats.candidates;
        if (!detail::try_solve(L, set, stats, &scratch)) {
            return true;
        }
        for (const auto &r : found) {
            if (detail::same_roots(r, scratch)) {
                ++stats.duplicates;
                return true;
            }
        }
        ++stats.solved;
        found.push_back(scratch);
        return true;
    });
    if (stats_out != nullptr) {
        *stats_out = stats;
    }
    return found;
}

/// Lower bound on the energy of any real solution with counting numbers `set`.
///
/// Each root obeys u_j = tan(π I_eff / L) / 2 with |I_eff - I_j| < (M-1)/2, so its
/// energy -4 cos^2(π I_eff / L) is bounded below using the smallest reachable |I_eff|.
inline double energy_lower_bound(int L, std::span<const CountingNumber> set) {
    const double shift = 0.5 * (static_cast<double>(set.size()) - 1.0);
    double bound = 0.0;
    for (const auto &c : set) {
        const double d = std::max(0.0, std::abs(c.value()) - shift);
        const double cs = std::cos(kPi * d / L);
        bound -= 4.0 * cs * cs;
    }
    return bound;
}

/// The enumerated real solution of minimal energy. Exhaustive over the admissible window,
/// with candidates skipped only when energy_lower_bound proves they cannot win.
/// Ties (within 1e-10) keep the first solution found; the centered set is tried first.
inline BetheRootSet lowest_energy_solution(int L, int M, EnumerationStats *stats_out = nullptr) {
    if (L < 2 || L % 2 != 0 || M < 1 || M > L / 2) {
        throw std::invalid_argument("lowest_energy_solution requires even L and 1 <= M <= L/2");
    }
    constexpr double kTie = 1e-10;
    EnumerationStats stats;
    BetheRootSet best = BetheRootSet::from_momenta(L, {});
    BetheRootSet scratch = best;
    bool have = false;

    const auto centered = centered_counting_numbers(M);
    ++stats.candidates;
    if (detail::try_solve(L, centered, stats, &scratch)) {
        best = scratch;
        have = true;
        ++stats.solved;
    }
    for_each_counting_set(L, M, [&](std::span<const CountingNumber> set) {
        if (std::equal(set.begin(), set.end(), centered.begin())) {
            return true;
        }
        ++stats.candidates;
        if (have && energy_lower_bound(L, set) >= best.energy() - kTie) {
            ++stats.pruned;
            return true;
        }
        if (!detail::try_solve(L, set, stats, &scratch)) {
            return true;
        }
        ++stats.solved;
        if (!have || scratch.energy() < best.energy() - kTie) {
            best = scratch;
            have = true;
        }
        return true;
    });
    if (stats_out != nullptr) {
        *stats_out = stats;
    }
    if (!have) {
        throw NoSolution("no real solution found for L=" + std::to_string(L) + ", M=" + std::to_string(M));
    }
    return best;
}

}  // namespace bethe

#endif  // BETHE_BETHE_SOLVER_HPP
