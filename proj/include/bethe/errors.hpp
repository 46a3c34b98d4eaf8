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

#ifndef BETHE_ERRORS_HPP
#define BETHE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bethe {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two momenta coincide (mod 2π), so S and Θ are undefined.
struct DegenerateRootError : Error {
    using Error::Error;
};

/// Newton iteration did not converge. Carries the last rapidity iterate.
struct SolverFailure : Error {
    SolverFailure(const std::string &what, std::vector<double> last_iterate)
        : Error(what), last_rapidities(std::move(last_iterate)) {
    }
    std::vector<double> last_rapidities;
};

/// Newton converged, but not to pairwise distinct real roots of the product-form equations.
struct NotRealSolution : Error {
    using Error::Error;
};

struct NoSolution : Error {
    using Error::Error;
};

/// A bracket (j,l) or a product (j,l)(l,j) vanished.
struct SingularBracket : Error {
    using Error::Error;
};

struct NormalizationError : Error {
    using Error::Error;
};

/// Two states (or a state and an operator) live in different (L, M) sectors.
struct SectorMismatch : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

/// A numerical identity that must hold by construction failed.
struct ConsistencyError : Error {
    using Error::Error;
};

/// A physical bound (0 <= |alpha|^2 <= 1, det G > 0) was violated.
struct InvariantViolation : Error {
    using Error::Error;
};

struct InsufficientStatistics : Error {
    using Error::Error;
};

}  // namespace bethe

#endif  // BETHE_ERRORS_HPP
