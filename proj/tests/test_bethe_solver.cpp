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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"

#include "bethe/bethe_solver.hpp"
#include "bethe/ed_oracle.hpp"
#include "oracles.hpp"

using namespace bethe;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<CountingNumber> halves(std::initializer_list<int> twice) {
    std::vector<CountingNumber> out;
    for (int t : twice) {
        out.push_back(CountingNumber::from_twice(t));
    }
    return out;
}

}  // namespace

TEST_CASE("scattering phase is unimodular and antisymmetric") {
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = oracle::uniform(0.05, kTwoPi - 0.05);
        const double b = oracle::uniform(0.05, kTwoPi - 0.05);
        if (std::abs(a - b) < 1e-3) {
            continue;
        }
        const auto s = s_matrix(a, b);
        CHECK_THAT(std::abs(s), WithinAbs(1.0, 1e-14));
        CHECK_THAT(std::abs(s * s_matrix(b, a) - 1.0), WithinAbs(0.0, 1e-13));
        CHECK_THAT(theta_phase(a, b) + theta_phase(b, a), WithinAbs(0.0, 1e-14));
        const auto from_theta = -std::polar(1.0, theta_phase(a, b));
        CHECK_THAT(std::abs(from_theta - s), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(oracle::scattering(a, b) - s), WithinAbs(0.0, 1e-12));
    }
    CHECK_THROWS_AS(s_matrix(1.0, 1.0), DegenerateRootError);
    CHECK_THROWS_AS(s_matrix(1.0, 1.0 + kTwoPi), DegenerateRootError);
}

TEST_CASE("closed-form two-magnon solution on L = 4") {
    const auto roots = solve_by_counting_numbers(4, halves({-1, 1}));
    const auto k = roots.sorted_momenta();
    REQUIRE(k.size() == 2);
    CHECK_THAT(k[0], WithinAbs(2.0 * kPi / 3.0, 1e-12));
    CHECK_THAT(k[1], WithinAbs(4.0 * kPi / 3.0, 1e-12));
    const auto &u = roots.rapidities();
    CHECK_THAT(std::abs(u[0]), WithinAbs(0.5 / std::sqrt(3.0), 1e-12));
    CHECK_THAT(u[0] + u[1], WithinAbs(0.0, 1e-12));
    CHECK(roots.residual() <= 1e-12);
    // Each root contributes -2(1 - cos k).
    CHECK_THAT(roots.energy(), WithinAbs(-6.0, 1e-12));
}

TEST_CASE("three-magnon ground state on L = 6") {
    const auto roots = ground_state(6);
    const auto k = roots.sorted_momenta();
    REQUIRE(k.size() == 3);
    CHECK_THAT(k[0], WithinAbs(1.72277, 1e-5));
    CHECK_THAT(k[1], WithinAbs(kPi, 1e-10));
    CHECK_THAT(k[2], WithinAbs(kTwoPi - 1.72277, 1e-5));
}

TEST_CASE("single magnon momenta are exact lattice momenta") {
    for (int L = 2; L <= 64; L += 2) {
        for (int n = -(L / 2 - 1); n <= L / 2 - 1; ++n) {
            const auto roots = solve_by_counting_numbers(L, std::vector{CountingNumber::from_twice(2 * n)});
            const double expected = wrap_momentum(kPi - kTwoPi * n / L);
            CHECK_THAT(roots.momenta()[0], WithinAbs(expected, 1e-12));
            CHECK(roots.residual() <= 1e-12);
        }
    }
}

TEST_CASE("total momentum is quantised for every enumerated solution") {
    for (int L = 2; L <= 10; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            for (const auto &roots : enumerate_real_solutions(L, M)) {
                double total = 0.0;
                for (double k : roots.momenta()) {
                    total += k;
                }
                const auto phase = std::polar(1.0, L * total);
                CHECK_THAT(std::abs(phase - 1.0), WithinAbs(0.0, 1e-9));
                CHECK(roots.residual() <= 1e-10);
            }
        }
    }
}

TEST_CASE("solver satisfies the logarithmic equations it claims to solve") {
    // The logarithmic equation checked with an independent formula on the momenta.
    for (int L = 4; L <= 12; L += 2) {
        for (const auto &roots : enumerate_real_solutions(L, 2)) {
            const auto &k = roots.momenta();
            const auto &I = roots.counting_numbers();
            for (int j = 0; j < 2; ++j) {
                const double uj = 0.5 / std::tan(0.5 * k[j]);
                const double ul = 0.5 / std::tan(0.5 * k[1 - j]);
                const double lhs = 2.0 * L * std::atan(2.0 * uj);
                const double rhs = kTwoPi * I[j].value() + 2.0 * std::atan(uj - ul);
                CHECK_THAT(lhs - rhs, WithinAbs(0.0, 1e-9));
            }
        }
    }
}

TEST_CASE("enumeration counts") {
    CHECK(enumerate_real_solutions(4, 1).size() == 3);
    for (int L = 2; L <= 16; L += 2) {
        CHECK(enumerate_real_solutions(L, 1).size() == static_cast<std::size_t>(L - 1));
    }
    EnumerationStats stats;
    const auto sols = enumerate_real_solutions(6, 2, 0, &stats);
    CHECK(sols.size() == 6);
    CHECK(stats.candidates == 15);

    bool found = false;
    for (const auto &s : sols) {
        const auto k = s.sorted_momenta();
        found = found || (std::abs(k[0] - 1.41951) < 1e-4 && std::abs(k[1] - 2.76928) < 1e-4);
    }
    CHECK(found);

    const auto capped = enumerate_real_solutions(6, 2, 3);
    CHECK(capped.size() <= 3);
}

TEST_CASE("lowest energy search matches exhaustive minimum and exact diagonalisation") {
    for (int L = 2; L <= 12; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            const auto all = enumerate_real_solutions(L, M);
            double best = 0.0;
            for (const auto &s : all) {
                best = std::min(best, s.energy());
            }
            EnumerationStats stats;
            const auto low = lowest_energy_solution(L, M, &stats);
            CHECK_THAT(low.energy(), WithinAbs(best, 1e-10));
            if (M == L / 2) {
                const double ed = spectrum(build_hamiltonian(L, M))[0];
                CHECK_THAT(low.energy(), WithinAbs(ed, 1e-9));
            }
        }
    }
    const auto low62 = lowest_energy_solution(6, 2);
    CHECK_THAT(low62.energy(), WithinAbs(-5.0 - std::sqrt(5.0), 1e-10));
    const auto low1 = lowest_energy_solution(10, 1);
    CHECK_THAT(low1.momenta()[0], WithinAbs(kPi, 1e-12));
}

TEST_CASE("printed table roots reproduce the exact ground energy to their precision") {
    // Roots are printed to six significant digits, so each carries an error of up to
    // 5e-6; propagate that through dE/dk = -2 sin k.
    const std::vector<double> k{1.52200, 2.63483, kTwoPi - 1.52200, kTwoPi - 2.63483};
    double e = 0.0;
    double bound = 0.0;
    for (double q : k) {
        e += -2.0 * (1.0 - std::cos(q));
        bound += 2.0 * std::abs(std::sin(q)) * 5e-6;
    }
    const double ed = spectrum(build_hamiltonian(8, 4))[0];
    CHECK_THAT(e, WithinAbs(ed, bound));
    CHECK_THAT(ground_state(8).energy(), WithinAbs(ed, 1e-10));
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(solve_by_counting_numbers(5, halves({-1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(solve_by_counting_numbers(6, halves({0, 2})), std::invalid_argument);
    CHECK_THROWS_AS(solve_by_counting_numbers(6, halves({1, -1})), std::invalid_argument);
    CHECK_THROWS_AS(solve_by_counting_numbers(6, halves({-1, 1, 3, 5})), std::invalid_argument);
    CHECK_THROWS_AS(BetheRootSet::from_momenta(6, {1.0, 2.0}), NotRealSolution);
    CHECK_THROWS_AS(BetheRootSet::from_momenta(6, {1.0, 1.0}), NotRealSolution);
}

TEST_CASE("from_momenta reconstructs counting numbers") {
    const auto g = ground_state(8);
    const auto again = BetheRootSet::from_momenta(8, g.momenta(), g.counting_numbers());
    CHECK(again.counting_numbers() == g.counting_numbers());
    CHECK_THAT(again.energy(), WithinAbs(g.energy(), 1e-12));
}
