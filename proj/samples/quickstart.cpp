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

// Minimal tour: solve a Bethe state, compute its success probability, run the
// emulated preparation circuit and estimate a correlator from shots.

#include <cstdint>
#include <cstdio>

#include "bethe.hpp"

int main() {
    using namespace bethe;

    const auto roots = solve_by_counting_numbers(6, {CountingNumber::from_twice(1), CountingNumber::from_twice(3)});
    std::printf("L=6 M=2 momenta:");
    for (double k : roots.sorted_momenta()) {
        std::printf(" %.6f", k);
    }
    std::printf("  energy %.6f\n", roots.energy());

    const double alpha2 = success_probability(roots).success_probability;
    const auto run = run_algorithm(roots);
    std::printf("success probability %.9f (emulated %.9f, overlap %.12f)\n", alpha2, run.accept_probability,
                run.overlap_with_target);

    const auto ground = ground_state(8);
    const auto state = normalize(build_bethe_state(ground));
    const std::uint64_t shots = plan_shots(success_probability(ground).success_probability, 0.01).n_max;
    const auto counts = sample_shots(ground, shots, 20220707);
    std::printf("L=8 ground state: <z0 z1> exact %.6f, %llu shots -> %.6f\n", exact_correlator(state, 1),
                static_cast<unsigned long long>(shots),
                estimate_from_counts(counts, 1));
    return 0;
}
