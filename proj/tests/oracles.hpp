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

// Independent reference computations used only by the tests. None of these call
// into the code path they are used to check.

#ifndef BETHE_TESTS_ORACLES_HPP
#define BETHE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Laplace expansion along the first row.
inline double cofactor_determinant(const std::vector<std::vector<double>> &a) {
    const std::size_t n = a.size();
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return a[0][0];
    }
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t cc = 0; cc < n; ++cc) {
                if (cc != c) {
                    row.push_back(a[r][cc]);
                }
            }
            minor.push_back(row);
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * cofactor_determinant(minor);
    }
    return det;
}

inline Complex scattering(double kj, double kl) {
    const double uj = 0.5 / std::tan(0.5 * kj);
    const double ul = 0.5 / std::tan(0.5 * kl);
    return Complex(uj - ul, 1.0) / Complex(uj - ul, -1.0);
}

/// eps_P A_P as a product over the inversions of P, accumulated along a bubble-sort
/// path from the identity (a different path than Steinhaus-Johnson-Trotter).
inline Complex permutation_amplitude(const std::vector<double> &k, const std::vector<int> &target) {
    std::vector<int> cur(target.size());
    std::iota(cur.begin(), cur.end(), 0);
    Complex a(1.0, 0.0);
    for (std::size_t i = 0; i < target.size(); ++i) {
        auto it = std::find(cur.begin(), cur.end(), target[i]);
        std::size_t j = static_cast<std::size_t>(it - cur.begin());
        while (j > i) {
            std::swap(cur[j - 1], cur[j]);
            a *= scattering(k[cur[j - 1]], k[cur[j]]);
            --j;
        }
    }
    return a;
}

/// f(x) summed over std::next_permutation order with inversion-product amplitudes.
inline Complex wavefunction(const std::vector<double> &k, const std::vector<int> &x) {
    std::vector<int> p(k.size());
    std::iota(p.begin(), p.end(), 0);
    Complex f(0.0, 0.0);
    do {
        double phase = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            phase += k[p[j]] * x[j];
        }
        f += permutation_amplitude(k, p) * std::polar(1.0, phase);
    } while (std::next_permutation(p.begin(), p.end()));
    return f;
}

/// All strictly increasing M-tuples over {0..L-1} in colex order (by bitmask value).
inline std::vector<std::vector<int>> colex_tuples(int L, int M) {
    std::vector<std::vector<int>> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << L); ++m) {
        if (__builtin_popcountll(m) != M) {
            continue;
        }
        std::vector<int> x;
        for (int n = 0; n < L; ++n) {
            if ((m >> n) & 1U) {
                x.push_back(n);
            }
        }
        out.push_back(x);
    }
    return out;
}

/// Central-difference Jacobian of a vector function.
inline std::vector<std::vector<double>> jacobian(
    const std::function<std::vector<double>(const std::vector<double> &)> &f, const std::vector<double> &x,
    double h = 1e-6) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> j(n, std::vector<double>(n));
    for (std::size_t c = 0; c < n; ++c) {
        auto xp = x;
        auto xm = x;
        xp[c] += h;
        xm[c] -= h;
        const auto fp = f(xp);
        const auto fm = f(xm);
        for (std::size_t r = 0; r < n; ++r) {
            j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    return j;
}

/// Deterministic generator for hand-rolled property tests.
inline std::mt19937_64 &rng() {
    static std::mt19937_64 g(0xB37E5EEDULL);
    return g;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace oracle

#endif  // BETHE_TESTS_ORACLES_HPP
