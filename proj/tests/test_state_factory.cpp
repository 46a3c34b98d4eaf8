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
#include <numeric>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"

#include "bethe/ed_oracle.hpp"
#include "bethe/gaudin.hpp"
#include "bethe/state_factory.hpp"
#include "oracles.hpp"

using namespace bethe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd &m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rows[r].push_back(m(r, c));
        }
    }
    return rows;
}

}  // namespace

TEST_CASE("Steinhaus-Johnson-Trotter walk covers every permutation by adjacent swaps") {
    for (int M = 1; M <= 7; ++M) {
        const auto walk = steinhaus_johnson_trotter(M);
        REQUIRE(walk.permutations.size() == factorial(M));
        std::set<Permutation> seen(walk.permutations.begin(), walk.permutations.end());
        CHECK(seen.size() == walk.permutations.size());
        Permutation id(static_cast<std::size_t>(M));
        std::iota(id.begin(), id.end(), 0);
        CHECK(walk.permutations.front() == id);
        for (std::size_t i = 1; i < walk.permutations.size(); ++i) {
            Permutation p = walk.permutations[i - 1];
            const int l = walk.swap_position[i];
            REQUIRE(l >= 0);
            REQUIRE(l + 1 < M);
            std::swap(p[l], p[l + 1]);
            CHECK(p == walk.permutations[i]);
        }
        if (M >= 2) {
            Permutation last = walk.permutations.back();
            std::swap(last[0], last[1]);
            CHECK(last == id);
        }
    }
    std::vector<std::size_t> ranks;
    for (const auto &p : steinhaus_johnson_trotter(4).permutations) {
        ranks.push_back(lehmer_rank(p));
    }
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        CHECK(ranks[i] == i);
    }
}

TEST_CASE("permutation amplitudes agree with an inversion-product oracle") {
    for (int L = 4; L <= 10; L += 2) {
        for (int M = 1; M <= std::min(4, L / 2); ++M) {
            for (const auto &roots : enumerate_real_solutions(L, M)) {
                const PermutationAmplitudes amps(roots);
                REQUIRE(amps.count() == factorial(M));
                CHECK(amps.entries()[0] == Complex(1.0, 0.0));
                for (std::size_t i = 0; i < amps.count(); ++i) {
                    const auto &p = amps.permutations()[i];
                    const Complex ref = oracle::permutation_amplitude(roots.momenta(), p);
                    CHECK_THAT(std::abs(amps.entries()[i] - ref), WithinAbs(0.0, 1e-10));
                    CHECK_THAT(std::abs(amps.entries()[i]), WithinAbs(1.0, 1e-12));
                    CHECK(amps.index_of(p) == i);
                }
            }
        }
    }
}

TEST_CASE("two-magnon swap entry is the scattering phase") {
    const auto roots = ground_state(4);
    const PermutationAmplitudes amps(roots);
    REQUIRE(amps.count() == 2);
    const auto &k = roots.momenta();
    CHECK_THAT(std::abs(amps.at({1, 0}) - s_matrix(k[1], k[0])), WithinAbs(0.0, 1e-15));
}

TEST_CASE("adjacent-swap updates close around three-cycles") {
    // s1 s2 s1 = s2 s1 s2: walking both words from the identity must give the same entry.
    for (const auto &roots : enumerate_real_solutions(10, 3)) {
        const auto &k = roots.momenta();
        auto walk = [&](std::initializer_list<int> word) {
            Permutation p{0, 1, 2};
            Complex a(1.0, 0.0);
            for (int l : word) {
                std::swap(p[l], p[l + 1]);
                a *= s_matrix(k[p[l]], k[p[l + 1]]);
            }
            return a;
        };
        CHECK_THAT(std::abs(walk({0, 1, 0}) - walk({1, 0, 1})), WithinAbs(0.0, 1e-10));
        const PermutationAmplitudes amps(roots);
        CHECK_THAT(std::abs(walk({0, 1, 0}) - amps.at({2, 1, 0})), WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("Bethe state amplitudes match the wavefunction oracle") {
    for (int L = 4; L <= 8; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            for (const auto &roots : enumerate_real_solutions(L, M)) {
                const auto psi = build_bethe_state(roots);
                REQUIRE(psi.size() == binomial(L, M));
                for (std::size_t r = 0; r < psi.size(); ++r) {
                    const Complex ref = oracle::wavefunction(roots.momenta(), psi.positions(r));
                    CHECK_THAT(std::abs(psi.amplitude(r) - ref), WithinAbs(0.0, 1e-10));
                }
            }
        }
    }
}

TEST_CASE("plane wave and reference state") {
    const auto vacuum = build_bethe_state(BetheRootSet::from_momenta(6, {}));
    REQUIRE(vacuum.size() == 1);
    CHECK(vacuum.amplitude(0) == Complex(1.0, 0.0));
    const auto one = solve_by_counting_numbers(8, std::vector{CountingNumber::from_twice(2)});
    const auto psi = build_bethe_state(one);
    CHECK_THAT(psi.norm_squared(), WithinRel(8.0, 1e-12));
    for (std::size_t r = 0; r < psi.size(); ++r) {
        CHECK_THAT(std::abs(psi.amplitude(r)), WithinAbs(1.0, 1e-12));
    }
    const auto n = normalize(psi);
    for (std::size_t r = 0; r < n.size(); ++r) {
        CHECK_THAT(std::abs(n.amplitude(r)), WithinAbs(1.0 / std::sqrt(8.0), 1e-12));
    }
    const auto nn = normalize(n);
    for (std::size_t r = 0; r < n.size(); ++r) {
        CHECK_THAT(std::abs(nn.amplitude(r) - n.amplitude(r)), WithinAbs(0.0, 1e-14));
    }
    CHECK(build_rescaled_state(one).amplitude(0) == psi.amplitude(0));
}

TEST_CASE("Bethe states are eigenvectors of the sector Hamiltonian") {
    for (int L = 2; L <= 10; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            const auto h = build_hamiltonian(L, M);
            for (const auto &roots : enumerate_real_solutions(L, M)) {
                const auto psi = build_bethe_state(roots);
                CHECK(eigen_residual(h, psi, roots.energy()) <= 1e-9);
            }
        }
    }
    const auto g = ground_state(4);
    CHECK(eigen_residual(build_hamiltonian(4, 2), build_bethe_state(g), -6.0) <= 1e-10);
}

TEST_CASE("normalised ground state overlaps the exact ground eigenvector") {
    for (int L = 4; L <= 10; L += 2) {
        const auto ed = ground_eigenpair(build_hamiltonian(L, L / 2));
        const auto bethe = normalize(build_bethe_state(ground_state(L)));
        CHECK(overlap_fidelity(ed.state, bethe) >= 1.0 - 1e-10);
    }
}

TEST_CASE("rescaling brackets on the four-site ground state") {
    const auto g = ground_state(4);
    const Complex b = bracket(g, 0, 1);
    CHECK_THAT(std::norm(b), WithinRel(12.0, 1e-12));
    CHECK_THAT(b.real(), WithinAbs(3.0, 1e-12));
    CHECK_THAT(std::abs(b.imag()), WithinAbs(std::sqrt(3.0), 1e-12));
    const auto phi = build_rescaled_state(g);
    CHECK_THAT(phi.norm_squared(), WithinRel(144.0, 1e-12));
    CHECK_THAT(phi.norm_squared(), WithinRel(std::norm(b) * build_bethe_state(g).norm_squared(), 1e-12));
    CHECK_THROWS_AS(bracket(g, 0, 2), std::out_of_range);
}

TEST_CASE("squared norm equals bracket product times Gaudin determinant") {
    for (int L = 2; L <= 10; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            for (const auto &roots : enumerate_real_solutions(L, M)) {
                const auto phi = build_rescaled_state(roots);
                double brackets = 1.0;
                for (int j = 0; j < M; ++j) {
                    for (int l = j + 1; l < M; ++l) {
                        brackets *= std::norm(bracket(roots, j, l));
                    }
                }
                const double det = oracle::cofactor_determinant(to_rows(gaudin_matrix(roots)));
                CHECK_THAT(phi.norm_squared(), WithinRel(brackets * det, 1e-10));
            }
        }
    }
}

TEST_CASE("translation multiplies the state by the total momentum phase") {
    for (const auto &roots : enumerate_real_solutions(8, 3)) {
        const auto psi = build_bethe_state(roots);
        const auto shifted = translated(psi, 1);
        double total = 0.0;
        for (double k : roots.momenta()) {
            total += k;
        }
        CHECK(overlap_fidelity(psi, shifted) >= 1.0 - 1e-10);
        const Complex ratio = inner_product(psi, shifted) / psi.norm_squared();
        const Complex expected = std::polar(1.0, total);
        // shifted(x) = psi(x - 1) so the ratio is either e^{-iK} or e^{iK}; both have |.| = 1.
        CHECK((std::abs(ratio - expected) < 1e-9 || std::abs(ratio - std::conj(expected)) < 1e-9));
    }
}

TEST_CASE("Dicke state and inner products") {
    const auto d = build_dicke_state(4, 2);
    REQUIRE(d.size() == 6);
    for (std::size_t r = 0; r < d.size(); ++r) {
        CHECK_THAT(d.amplitude(r).real(), WithinAbs(1.0 / std::sqrt(6.0), 1e-15));
    }
    CHECK_THAT(std::abs(inner_product(d, d)), WithinAbs(1.0, 1e-12));
    CHECK(build_dicke_state(6, 0).size() == 1);
    CHECK(build_dicke_state(6, 3).size() == 20);
    const auto psi = build_bethe_state(ground_state(4));
    CHECK_THAT(std::abs(inner_product(psi, psi) - psi.norm_squared()), WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(inner_product(d, build_dicke_state(4, 1)), SectorMismatch);
    CHECK_THROWS_AS(normalize(SparseMagnonState(4, 2, std::vector<Complex>(6))), NormalizationError);
}
