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

#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"

#include "bethe/ed_oracle.hpp"
#include "bethe/state_factory.hpp"

using namespace bethe;
using Catch::Matchers::WithinAbs;

TEST_CASE("two-site sector matrix and spectrum") {
    const auto h = build_hamiltonian(2, 1);
    REQUIRE(h.matrix.rows() == 2);
    CHECK(h.matrix(0, 0) == -2.0);
    CHECK(h.matrix(1, 1) == -2.0);
    CHECK(h.matrix(0, 1) == 2.0);
    CHECK(h.matrix(1, 0) == 2.0);
    const auto ev = spectrum(h);
    CHECK_THAT(ev[0], WithinAbs(-4.0, 1e-14));
    CHECK_THAT(ev[1], WithinAbs(0.0, 1e-14));
    const auto g = ground_eigenpair(h);
    CHECK_THAT(g.energy, WithinAbs(-4.0, 1e-14));
    CHECK_THAT(std::abs(g.state.amplitude(0) + g.state.amplitude(1)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(g.state.amplitude(0)), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
}

TEST_CASE("reference sector and symmetry") {
    const auto h0 = build_hamiltonian(6, 0);
    REQUIRE(h0.matrix.size() == 1);
    CHECK(h0.matrix(0, 0) == 0.0);
    for (int L = 3; L <= 8; ++L) {
        for (int M = 0; M <= L; ++M) {
            const auto h = build_hamiltonian(L, M);
            CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
            // Every exchange conserves the magnon number, and each row's total is
            // zero because H annihilates the uniform superposition within a sector.
            CHECK(h.matrix.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(build_hamiltonian(20, 10, 1000), BudgetExceeded);
    CHECK_THROWS_AS(build_hamiltonian(1, 0), std::invalid_argument);
}

TEST_CASE("ground energies agree with the Bethe solver") {
    CHECK_THAT(spectrum(build_hamiltonian(4, 2))[0], WithinAbs(-6.0, 1e-12));
    for (int L = 2; L <= 12; L += 2) {
        const auto g = ground_eigenpair(build_hamiltonian(L, L / 2));
        CHECK_THAT(g.energy, WithinAbs(ground_state(L).energy(), 1e-9));
        CHECK_THAT(g.state.norm_squared(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("correlators on exact ground states") {
    const auto s4 = ground_eigenpair(build_hamiltonian(4, 2)).state;
    CHECK(exact_correlator(s4, 0) == Catch::Approx(1.0).margin(1e-14));
    CHECK_THAT(exact_correlator(s4, 1), WithinAbs(-2.0 / 3.0, 1e-12));
    CHECK_THAT(exact_correlator(s4, 2), WithinAbs(1.0 / 3.0, 1e-12));
    const auto s8 = ground_eigenpair(build_hamiltonian(8, 4)).state;
    CHECK_THAT(exact_correlator(s8, 4), WithinAbs(0.198831, 1e-6));

    for (int L = 4; L <= 10; L += 2) {
        const auto s = ground_eigenpair(build_hamiltonian(L, L / 2)).state;
        double total = 0.0;
        for (int l = 0; l < L; ++l) {
            total += exact_correlator(s, l);
            for (int m = 1; m < L; ++m) {
                CHECK_THAT(zz_expectation(s, m, (m + l) % L), WithinAbs(exact_correlator(s, l), 1e-12));
            }
            CHECK_THAT(exact_correlator(s, l), WithinAbs(exact_correlator(s, (L - l) % L), 1e-12));
        }
        CHECK_THAT(total, WithinAbs(0.0, 1e-10));
    }
    CHECK_THROWS_AS(exact_correlator(s4, 4), std::out_of_range);
    CHECK_THROWS_AS(exact_correlator(s4.scaled(2.0), 1), NormalizationError);
}

TEST_CASE("apply and residual") {
    const auto h = build_hamiltonian(6, 2);
    const auto d = build_dicke_state(6, 2);
    CHECK(eigen_residual(h, d, 0.0) <= 1e-13);
    const auto e = ground_eigenpair(h);
    CHECK(eigen_residual(h, e.state, e.energy) <= 1e-12);
    CHECK(eigen_residual(h, e.state, e.energy + 0.5) > 0.4);
    CHECK_THROWS_AS(apply(h, build_dicke_state(6, 3)), SectorMismatch);
}
