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

#ifndef BETHE_GAUDIN_HPP
#define BETHE_GAUDIN_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bethe/bethe_solver.hpp"
#include "bethe/combinatorics.hpp"
#include "bethe/errors.hpp"
#include "bethe/state_factory.hpp"

namespace bethe {

/// Determinant as sign * exp(log_abs); survives magnitudes far outside double range.
struct LogDeterminant {
    double log_abs = 0.0;
    int sign = 1;

    double value() const {
        return sign == 0 ? 0.0 : sign * std::exp(log_abs);
    }
};

/// LU with partial pivoting; sums log|U_ii|. The 0x0 matrix has determinant 1.
inline LogDeterminant log_determinant(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("determinant of a non-square matrix");
    }
    LogDeterminant d;
    if (a.rows() == 0) {
        return d;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd &packed = lu.matrixLU();
    d.sign = static_cast<int>(lu.permutationP().determinant());
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const double u = packed(i, i);
        if (u == 0.0 || !std::isfinite(u)) {
            return {-std::numeric_limits<double>::infinity(), 0};
        }
        if (u < 0.0) {
            d.sign = -d.sign;
        }
        d.log_abs += std::log(std::abs(u));
    }
    return d;
}

inline double determinant(const Eigen::MatrixXd &a) {
    return log_determinant(a).value();
}

/// G_{m,n} = δ_{mn} [L - sum_l 4(1 - cos k_l)/((n,l)(l,n))] + 4(1 - cos k_m)/((n,m)(m,n)).
inline Eigen::MatrixXd gaudin_matrix(const BetheRootSet &roots) {
    const int M = roots.magnons();
    const int L = roots.chain_length();
    const auto &k = roots.momenta();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(M, M);
    // weight(n, l) = 4(1 - cos k_l) / |(n,l)|^2
    Eigen::MatrixXd weight(M, M);
    for (int n = 0; n < M; ++n) {
        for (int l = 0; l < M; ++l) {
            const double b2 = std::norm(bracket(roots, n, l));
            if (!(b2 > 0.0)) {
                throw SingularBracket("(n,l)(l,n) vanishes at n=" + std::to_string(n) + ", l=" + std::to_string(l));
            }
            weight(n, l) = 4.0 * (1.0 - std::cos(k[l])) / b2;
        }
    }
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < M; ++n) {
            g(m, n) = weight(n, m);
        }
        double diag = L;
        for (int l = 0; l < M; ++l) {
            if (l != m) {
                diag -= weight(m, l);
            }
        }
        // The l = m member of the sum cancels the added weight(m, m) exactly.
        g(m, m) = diag;
    }
    return g;
}

struct GaudinReport {
    int L = 0;
    int M = 0;
    Eigen::MatrixXd matrix;
    /// sign * exp(log_determinant); may be +inf when det G exceeds double range.
    double determinant = 1.0;
    double log_determinant = 0.0;
    int determinant_sign = 1;
    /// |alpha|^2 = (L-M)! / (L! M!) det G.
    double success_probability = 1.0;
    double log_success_probability = 0.0;
    /// |alpha|^2 M!.
    double ratio_to_factorial_bound = 1.0;
    /// |alpha|^2 M! - 1, computed without cancellation.
    double delta = 0.0;
    /// (j,l)(l,j) for j < l, row-major.
    std::vector<double> bracket_products;
    double residual = 0.0;
};

/// Builds the report without enforcing the physical bounds; check_conjectures uses it
/// to observe violations rather than abort on them.
inline GaudinReport gaudin_report(const BetheRootSet &roots) {
    GaudinReport r;
    r.L = roots.chain_length();
    r.M = roots.magnons();
    r.residual = roots.residual();
    r.matrix = gaudin_matrix(roots);
    const LogDeterminant det = log_determinant(r.matrix);
    r.log_determinant = det.log_abs;
    r.determinant_sign = det.sign;
    r.determinant = det.value();
    for (int j = 0; j < r.M; ++j) {
        for (int l = j + 1; l < r.M; ++l) {
            r.bracket_products.push_back(std::norm(bracket(roots, j, l)));
        }
    }
    const double log_ratio = log_falling_factorial(r.L, r.M) + log_factorial(r.M);
    r.log_success_probability = det.log_abs - log_ratio;
    r.success_probability = det.sign > 0 ? std::exp(r.log_success_probability) : 0.0;
    const double log_scaled = r.log_success_probability + log_factorial(r.M);
    r.ratio_to_factorial_bound = det.sign > 0 ? std::exp(log_scaled) : 0.0;
    r.delta = det.sign > 0 ? std::expm1(log_scaled) : -1.0;
    return r;
}

/// Exact success probability of the probabilistic preparation, with its bounds enforced.
inline GaudinReport success_probability(const BetheRootSet &roots) {
    GaudinReport r = gaudin_report(roots);
    if (r.determinant_sign <= 0) {
        throw InvariantViolation("det G <= 0 for L=" + std::to_string(r.L) + ", M=" + std::to_string(r.M));
    }
    if (r.success_probability > 1.0 + 1e-12) {
        throw InvariantViolation("|alpha|^2 = " + std::to_string(r.success_probability) + " exceeds 1");
    }
    return r;
}

/// max_{m,n} |G_{mn}/L - δ_{mn}|.
inline double identity_deviation(const Eigen::MatrixXd &g, int L) {
    if (g.size() == 0) {
        return 0.0;
    }
    const Eigen::MatrixXd d = g / static_cast<double>(L) - Eigen::MatrixXd::Identity(g.rows(), g.cols());
    return d.cwiseAbs().maxCoeff();
}

struct LargeLRow {
    int M = 0;
    int L = 0;
    bool solved = false;
    double alpha2 = 0.0;
    /// |alpha|^2 M!
    double ratio = 0.0;
    double identity_deviation = 0.0;
    double energy = 0.0;
    std::string failure;
};

/// |alpha|^2 of the lowest-energy real solution for fixed M across chain lengths.
/// Lengths with no solution are recorded with solved = false.
inline std::vector<LargeLRow> large_l_scan(int M, std::span<const int> lengths) {
    std::vector<LargeLRow> rows;
    for (int L : lengths) {
        LargeLRow row;
        row.M = M;
        row.L = L;
        try {
            const BetheRootSet roots = lowest_energy_solution(L, M);
            const GaudinReport rep = success_probability(roots);
            row.solved = true;
            row.alpha2 = rep.success_probability;
            row.ratio = rep.ratio_to_factorial_bound;
            row.identity_deviation = identity_deviation(rep.matrix, L);
            row.energy = roots.energy();
        } catch (const std::exception &e) {
            row.failure = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2 || x.size() != y.size()) {
        throw std::invalid_argument("line fit needs at least two matched points");
    }
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

struct GroundStateRow {
    int L = 0;
    double alpha2 = 0.0;
    double ln_alpha2 = 0.0;
};

struct GroundStateScan {
    std::vector<GroundStateRow> rows;
    LinearFit fit;
};

/// ln|alpha|^2 of the antiferromagnetic ground state versus L, with a straight-line fit.
inline GroundStateScan ground_state_probability_scan(std::span<const int> lengths) {
    GroundStateScan scan;
    std::vector<double> xs, ys;
    for (int L : lengths) {
        const GaudinReport rep = success_probability(ground_state(L));
        scan.rows.push_back({L, rep.success_probability, rep.log_success_probability});
        xs.push_back(L);
        ys.push_back(rep.log_success_probability);
    }
    if (xs.size() >= 2) {
        scan.fit = least_squares_line(xs, ys);
    }
    return scan;
}

struct Amplification {
    double theta = 0.0;
    std::uint64_t iterations = 0;
    /// sin^2(3 theta): success probability after one amplification round.
    double amplified_probability = 0.0;
    /// sin^2(3 theta) / sin^2(theta).
    double gain = 0.0;
};

/// m = floor(π / (4 θ)) with sin^2 θ = |alpha|^2.
inline Amplification amplification_iterations(double success) {
    if (!(success > 0.0) || success > 1.0) {
        throw std::invalid_argument("amplification needs 0 < |alpha|^2 <= 1");
    }
    Amplification a;
    a.theta = std::asin(std::sqrt(success));
    a.iterations = static_cast<std::uint64_t>(std::floor(kPi / (4.0 * a.theta)));
    const double s3 = std::sin(3.0 * a.theta);
    a.amplified_probability = s3 * s3;
    a.gain = a.amplified_probability / success;
    return a;
}

struct ConjectureRecord {
    int L = 0;
    int M = 0;
    std::vector<CountingNumber> counting_numbers;
    double alpha2 = 0.0;
    double delta = 0.0;
    /// det G <= L! M! / (L-M)!
    bool c0_holds = false;
    /// |alpha|^2 <= 1 / M!
    bool c1_holds = false;
    /// det G <= L! / (L-M)!
    bool c2_holds = false;
    bool det_positive = false;
    double residual = 0.0;
};

/// Bounds compared in log space with a relative margin of 1e-12, so exact ties count as holding.
inline ConjectureRecord check_conjectures(const BetheRootSet &roots) {
    constexpr double kMargin = 1e-12;
    const GaudinReport rep = gaudin_report(roots);
    ConjectureRecord c;
    c.L = rep.L;
    c.M = rep.M;
    c.counting_numbers = roots.counting_numbers();
    c.alpha2 = rep.success_probability;
    c.delta = rep.delta;
    c.residual = rep.residual;
    c.det_positive = rep.determinant_sign > 0;
    const double log_c2 = log_falling_factorial(c.L, c.M);
    const double log_c0 = log_c2 + log_factorial(c.M);
    const double log_c1 = -log_factorial(c.M);
    c.c0_holds = !c.det_positive || rep.log_determinant <= log_c0 + kMargin;
    c.c2_holds = !c.det_positive || rep.log_determinant <= log_c2 + kMargin;
    c.c1_holds = !c.det_positive || rep.log_success_probability <= log_c1 + kMargin;
    return c;
}

/// Equally spaced counting numbers {-(M-1)/2, ..., (M-1)/2}.
inline ConjectureRecord exceptional_state_probe(int L, int M) {
    if (M < 3) {
        throw std::invalid_argument("exceptional states have M >= 3");
    }
    return check_conjectures(solve_by_counting_numbers(L, centered_counting_numbers(M)));
}

/// Every enumerated real-root state for even L in [2, max_L] and 1 <= M <= L/2.
inline std::vector<ConjectureRecord> conjecture_scan(int max_L, EnumerationStats *total = nullptr) {
    std::vector<ConjectureRecord> out;
    EnumerationStats sum;
    for (int L = 2; L <= max_L; L += 2) {
        for (int M = 1; M <= L / 2; ++M) {
            EnumerationStats s;
            for (const auto &roots : enumerate_real_solutions(L, M, 0, &s)) {
                out.push_back(check_conjectures(roots));
            }
            sum.candidates += s.candidates;
            sum.solved += s.solved;
            sum.solver_failures += s.solver_failures;
            sum.not_real += s.not_real;
            sum.duplicates += s.duplicates;
        }
    }
    if (total != nullptr) {
        *total = sum;
    }
    return out;
}

}  // namespace bethe

#endif  // BETHE_GAUDIN_HPP
