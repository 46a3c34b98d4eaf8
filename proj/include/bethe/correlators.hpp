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

#ifndef BETHE_CORRELATORS_HPP
#define BETHE_CORRELATORS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bethe/bethe_solver.hpp"
#include "bethe/emulator.hpp"
#include "bethe/errors.hpp"
#include "bethe/gaudin.hpp"

namespace bethe {

/// (D[n])_j = (-1)^floor(j / n).
inline int alternating_diagonal(std::uint64_t n, std::uint64_t j) {
    return ((j / n) & 1U) != 0 ? -1 : 1;
}

/// c^(l) for the measured pattern j = sum_k 2^k i_k: the j-th diagonal entry of
/// σ^z_0 σ^z_l = D[1] D[2^l].
inline int sign_coefficient(int L, int l, std::uint64_t pattern) {
    if (l < 1 || l > L - 1) {
        throw std::out_of_range("separation l must lie in [1, L-1], got " + std::to_string(l));
    }
    if (L < 64 && pattern >> L != 0) {
        throw std::out_of_range("pattern has bits beyond site L-1");
    }
    return alternating_diagonal(1, pattern) * alternating_diagonal(std::uint64_t{1} << l, pattern);
}

enum class EstimatorMode {
    /// <σ^z_0 σ^z_l> exactly as measured from site 0.
    SiteZero,
    /// Average of σ^z_m σ^z_{m+l} over all m within each shot.
    TranslationAveraged,
};

namespace detail {
inline double shot_value(int L, int l, Occupation x, EstimatorMode mode) {
    if (mode == EstimatorMode::SiteZero) {
        return sign_coefficient(L, l, x);
    }
    double s = 0.0;
    for (int m = 0; m < L; ++m) {
        const int a = ((x >> m) & 1U) != 0 ? -1 : 1;
        const int b = ((x >> ((m + l) % L)) & 1U) != 0 ? -1 : 1;
        s += a * b;
    }
    return s / L;
}
}  // namespace detail

/// sum_accepted c(x) n(x) / sum_accepted n(x); rejects enter neither sum.
inline double estimate_from_counts(const ShotCounts &counts, int l, EstimatorMode mode = EstimatorMode::SiteZero) {
    const std::uint64_t total = counts.accepted_total();
    if (total == 0) {
        throw InsufficientStatistics("no accepted shots");
    }
    double signed_sum = 0.0;
    for (std::size_t r = 0; r < counts.accepted.size(); ++r) {
        if (counts.accepted[r] != 0) {
            signed_sum += detail::shot_value(counts.L, l, counts.basis->occupation(r), mode) *
                          static_cast<double>(counts.accepted[r]);
        }
    }
    return signed_sum / static_cast<double>(total);
}

/// Unbiased sample variance of the per-shot ±1 values over accepted shots.
inline double per_shot_variance(const ShotCounts &counts, int l) {
    const auto n = static_cast<double>(counts.accepted_total());
    if (n < 2) {
        throw InsufficientStatistics("variance needs two accepted shots");
    }
    const double mean = estimate_from_counts(counts, l);
    return n / (n - 1.0) * (1.0 - mean * mean);
}

struct ShotPlan {
    std::uint64_t n_max = 0;
    std::uint64_t n_min = 0;
};

namespace detail {
/// ceil that ignores relative round-off of 1e-9 just above an integer.
inline std::uint64_t ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<std::uint64_t>(r);
    }
    return static_cast<std::uint64_t>(std::ceil(x));
}
}  // namespace detail

/// N_max = ceil(1 / (|alpha|^2 ε^2)), N_min = ceil(5/9 N_max).
inline ShotPlan plan_shots(double alpha2, double epsilon) {
    if (!(alpha2 > 0.0) || alpha2 > 1.0) {
        throw std::invalid_argument("plan_shots needs 0 < |alpha|^2 <= 1");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("plan_shots needs epsilon > 0");
    }
    const double n_max = 1.0 / (alpha2 * epsilon * epsilon);
    if (!(n_max < 1.8e19)) {
        throw std::overflow_error("N_max does not fit in 64 bits; use plan_shots_real");
    }
    ShotPlan p;
    p.n_max = detail::ceil_snapped(n_max);
    p.n_min = detail::ceil_snapped(5.0 / 9.0 * static_cast<double>(p.n_max));
    return p;
}

/// N_max as a real number, for budgets beyond 64-bit counts.
inline double plan_shots_real(double alpha2, double epsilon) {
    if (!(alpha2 > 0.0) || alpha2 > 1.0 || !(epsilon > 0.0)) {
        throw std::invalid_argument("plan_shots_real needs 0 < |alpha|^2 <= 1 and epsilon > 0");
    }
    return 1.0 / (alpha2 * epsilon * epsilon);
}

/// Var[σ^z_0 σ^z_l] = 1 - <σ^z_0 σ^z_l>^2.
inline double variance_bound(double correlator) {
    if (!(correlator >= -1.0 && correlator <= 1.0)) {
        throw std::invalid_argument("correlator must lie in [-1, 1]");
    }
    return 1.0 - correlator * correlator;
}

struct ExperimentConfig {
    double epsilon = 0.01;
    /// Shots per trial; 0 selects plan_shots(|alpha|^2, epsilon).n_max.
    std::uint64_t shots = 0;
    int trials = 100;
    std::uint64_t seed = 20220707;
    std::vector<int> separations;
    EstimatorMode mode = EstimatorMode::SiteZero;
};

struct TrialResult {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    /// One entry per separation; empty when the trial had no accepted shot.
    std::vector<std::optional<double>> estimates;
};

struct SeparationSummary {
    int l = 0;
    double mean = 0.0;
    /// Sample standard deviation (n - 1 denominator).
    double stddev = 0.0;
    std::size_t valid_trials = 0;
};

struct ShotExperiment {
    BetheRootSet roots;
    ExperimentConfig config;
    double accept_probability = 0.0;
    std::uint64_t shots = 0;
    std::vector<TrialResult> trials;
    std::vector<SeparationSummary> summary;
    double accept_mean = 0.0;
    double accept_stddev = 0.0;
};

inline void mean_and_stddev(const std::vector<double> &v, double &mean, double &sd) {
    mean = 0.0;
    sd = 0.0;
    if (v.empty()) {
        return;
    }
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) {
        return;
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Recomputes the summary block from the per-trial results.
inline void summarize(ShotExperiment &e) {
    e.summary.clear();
    for (std::size_t s = 0; s < e.config.separations.size(); ++s) {
        std::vector<double> vals;
        for (const auto &t : e.trials) {
            if (t.estimates.size() > s && t.estimates[s].has_value()) {
                vals.push_back(*t.estimates[s]);
            }
        }
        SeparationSummary sum;
        sum.l = e.config.separations[s];
        sum.valid_trials = vals.size();
        mean_and_stddev(vals, sum.mean, sum.stddev);
        e.summary.push_back(sum);
    }
    std::vector<double> acc;
    for (const auto &t : e.trials) {
        acc.push_back(static_cast<double>(t.accepted));
    }
    mean_and_stddev(acc, e.accept_mean, e.accept_stddev);
}

/// Independent trials of `shots` shots each; trial t samples with seed + t. All
/// separations are estimated from the same counts of a trial.
inline ShotExperiment run_experiment(const BetheRootSet &roots, const ExperimentConfig &config,
                                     unsigned threads = 1) {
    if (config.trials < 1) {
        throw std::invalid_argument("experiment needs at least one trial");
    }
    for (int l : config.separations) {
        if (l < 1 || l >= roots.chain_length()) {
            throw std::out_of_range("separation out of range");
        }
    }
    const ShotSampler sampler(roots);
    ShotExperiment e{roots, config, sampler.accept_probability(), config.shots, {}, {}, 0.0, 0.0};
    if (e.shots == 0) {
        e.shots = plan_shots(e.accept_probability, config.epsilon).n_max;
    }
    e.trials.resize(static_cast<std::size_t>(config.trials));

    std::atomic<int> next{0};
    auto work = [&]() {
        for (int t = next++; t < config.trials; t = next++) {
            const ShotCounts counts = sampler.sample(e.shots, config.seed + static_cast<std::uint64_t>(t));
            TrialResult &tr = e.trials[static_cast<std::size_t>(t)];
            tr.accepted = counts.accepted_total();
            tr.rejected = counts.rejects;
            tr.estimates.assign(config.separations.size(), std::nullopt);
            if (tr.accepted == 0) {
                continue;
            }
            for (std::size_t s = 0; s < config.separations.size(); ++s) {
                tr.estimates[s] = estimate_from_counts(counts, config.separations[s], config.mode);
            }
        }
    };
    threads = std::max(1U, threads);
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    summarize(e);
    return e;
}

}  // namespace bethe

#endif  // BETHE_CORRELATORS_HPP
