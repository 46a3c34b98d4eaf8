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

#ifndef BETHE_COMBINATORICS_HPP
#define BETHE_COMBINATORICS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bethe {

/// Occupied sites x_0 < x_1 < ... < x_{M-1} of an M-magnon basis state.
using Positions = std::vector<int>;

/// Occupation bitmask: bit n set <=> site n carries a lowered spin.
using Occupation = std::uint64_t;

inline constexpr int kMaxChainLength = 63;

/// Exact binomial coefficient. Throws std::overflow_error if the result does not fit.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is always an integer; divide by gcd first to delay overflow.
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        std::uint64_t den = static_cast<std::uint64_t>(i);
        std::uint64_t g = std::gcd(result, den);
        result /= g;
        den /= g;
        num /= den;
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            throw std::overflow_error("binomial(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
        }
        result *= num;
    }
    return result;
}

inline std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) {
        throw std::overflow_error("factorial(" + std::to_string(n) + ") out of 64-bit range");
    }
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= static_cast<std::uint64_t>(i);
    }
    return r;
}

/// ln(n!) as an explicit sum of logarithms.
inline double log_factorial(int n) {
    double s = 0.0;
    for (int i = 2; i <= n; ++i) {
        s += std::log(static_cast<double>(i));
    }
    return s;
}

/// ln(n! / (n-k)!) = sum_{i=n-k+1}^{n} ln i.
inline double log_falling_factorial(int n, int k) {
    double s = 0.0;
    for (int i = n - k + 1; i <= n; ++i) {
        s += std::log(static_cast<double>(i));
    }
    return s;
}

inline Occupation occupation_of(const Positions &x) {
    Occupation m = 0;
    for (int p : x) {
        m |= Occupation{1} << p;
    }
    return m;
}

inline Positions positions_of(Occupation m) {
    Positions x;
    x.reserve(static_cast<std::size_t>(std::popcount(m)));
    while (m != 0) {
        x.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return x;
}

/// The M-magnon sector of an L-site chain, ordered by colexicographic rank.
///
/// Colex order on M-subsets coincides with numeric order of the occupation bitmask,
/// and rank(x) = sum_j C(x_j, j+1) (combinatorial number system).
class SectorBasis {
   public:
    SectorBasis(int chain_length, int magnons) : L_(chain_length), M_(magnons) {
        if (L_ < 1 || L_ > kMaxChainLength) {
            throw std::invalid_argument("chain length must lie in [1, 63], got " + std::to_string(L_));
        }
        if (M_ < 0 || M_ > L_) {
            throw std::invalid_argument("magnon number must lie in [0, L], got " + std::to_string(M_));
        }
        std::uint64_t dim = binomial(L_, M_);
        states_.reserve(dim);
        if (M_ == 0) {
            states_.push_back(0);
            return;
        }
        // Gosper's hack enumerates fixed-popcount masks in increasing order.
        Occupation m = (Occupation{1} << M_) - 1;
        const Occupation limit = Occupation{1} << L_;
        while (m < limit) {
            states_.push_back(m);
            Occupation c = m & (~m + 1);
            Occupation r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }

    int chain_length() const {
        return L_;
    }
    int magnons() const {
        return M_;
    }
    std::size_t size() const {
        return states_.size();
    }
    Occupation occupation(std::size_t rank) const {
        return states_[rank];
    }
    Positions positions(std::size_t rank) const {
        return positions_of(states_[rank]);
    }
    const std::vector<Occupation> &occupations() const {
        return states_;
    }

    std::size_t rank(Occupation m) const {
        std::size_t r = 0;
        int j = 0;
        while (m != 0) {
            int x = std::countr_zero(m);
            r += static_cast<std::size_t>(binomial(x, j + 1));
            m &= m - 1;
            ++j;
        }
        return r;
    }
    std::size_t rank(const Positions &x) const {
        return rank(occupation_of(x));
    }

   private:
    int L_;
    int M_;
    std::vector<Occupation> states_;
};

/// An integer or half-integer, stored as twice its value.
class CountingNumber {
   public:
    constexpr CountingNumber() = default;
    static constexpr CountingNumber from_twice(int twice) {
        CountingNumber c;
        c.twice_ = twice;
        return c;
    }
    /// Rejects values that are not multiples of 1/2.
    static CountingNumber from_double(double v) {
        double t = 2.0 * v;
        double r = std::round(t);
        if (std::abs(t - r) > 1e-9) {
            throw std::invalid_argument("counting number must be an integer or half-integer, got " +
                                        std::to_string(v));
        }
        return from_twice(static_cast<int>(r));
    }
    /// Accepts "3", "-1/2", "1.5".
    static CountingNumber parse(const std::string &s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            return from_double(std::stod(s));
        }
        int num = std::stoi(s.substr(0, slash));
        int den = std::stoi(s.substr(slash + 1));
        if (den == 1) {
            return from_twice(2 * num);
        }
        if (den == 2) {
            return from_twice(num);
        }
        throw std::invalid_argument("counting number denominator must be 1 or 2: " + s);
    }

    constexpr int twice() const {
        return twice_;
    }
    constexpr double value() const {
        return 0.5 * twice_;
    }
    constexpr bool is_half_integer() const {
        return (twice_ & 1) != 0;
    }
    std::string to_string() const {
        if (is_half_integer()) {
            return std::to_string(twice_) + "/2";
        }
        return std::to_string(twice_ / 2);
    }

    friend constexpr auto operator<=>(CountingNumber, CountingNumber) = default;

   private:
    int twice_ = 0;
};

/// Centered consecutive set {-(M-1)/2, ..., (M-1)/2}.
inline std::vector<CountingNumber> centered_counting_numbers(int M) {
    std::vector<CountingNumber> out;
    out.reserve(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        out.push_back(CountingNumber::from_twice(-(M - 1) + 2 * j));
    }
    return out;
}

}  // namespace bethe

#endif  // BETHE_COMBINATORICS_HPP
