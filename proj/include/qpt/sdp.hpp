// Copyright 2026 The qpt Authors
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

#pragma once

// Weighted least squares over a parameter vector r subject to an affine
// Hermitian matrix inequality:
//
//   minimize    t
//   subject to  Z = [[t, delta^T], [delta, V]] >= 0,   F0 + sum_k r_k F_k >= 0
//
// with delta = A r - m. Z >= 0 is equivalent to t >= delta^T V^-1 delta, so
// the variable vector y = (t, r) and the objective vector b = (1, 0, ..., 0).
// The interior-point solver follows the central path of the log-det barrier on
// both blocks; the Z block's barrier reduces to -log(t - delta^T V^-1 delta)
// and t is eliminated. The projected-gradient solver is an independent
// cross-check for problems whose PSD map is a scaled isometry.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpt/pauli.hpp"

namespace qpt {

struct SdpProblem {
    RMatrix design;               // A, n_meas x p
    RVector data;                 // m
    RVector variances;            // diagonal of V, used when `covariance` is empty
    RMatrix covariance;           // full V (optional)
    CMatrix offset;               // F0; empty means zero
    std::vector<CMatrix> blocks;  // F_1 .. F_p, Hermitian
    /// Equality constraints r_k = value.
    std::vector<std::pair<int, double>> fixed;
    /// Strictly feasible starting r; the solver tries r = 0 otherwise.
    std::optional<RVector> start;

    int num_parameters() const { return static_cast<int>(design.cols()); }
    /// b = (1, 0_p)
    RVector objective_vector() const;
};

enum class SolverStatus { optimal, max_iter, infeasible };
enum class SolverMethod { interior_point, projected_gradient };

std::string to_string(SolverStatus s);
std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& s);

struct SolverOptions {
    int max_iterations = 200;          // Newton steps for the interior-point method
    int pg_max_iterations = 100000;    // projected-gradient iterations
    double gap_tolerance = 1e-9;       // absolute, on the normalized objective
    double pg_tolerance = 1e-11;       // normalized prox-gradient residual
};

struct SolverReport {
    SolverMethod method = SolverMethod::interior_point;
    SolverStatus status = SolverStatus::infeasible;
    int iterations = 0;
    double primal_objective = 0.0;  // delta^T V^-1 delta
    double dual_objective = 0.0;    // lower bound, same units
    double min_choi_eigenvalue = 0.0;
    double kkt_residual = 0.0;
};

struct SdpSolution {
    RVector y;  // (t, r)
    SolverReport report;

    RVector parameters() const { return y.tail(y.size() - 1); }
};

/// Throws DomainError on malformed blocks or a covariance that is not
/// positive definite.
SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& options = {});
SdpSolution solve_projected_gradient(const SdpProblem& problem, const SolverOptions& options = {});

/// Minimizer of delta^T V^-1 delta under the equality constraints only. The
/// report is `optimal` when the PSD constraint happens to hold there.
SdpSolution solve_unconstrained(const SdpProblem& problem);

/// delta^T V^-1 delta at r.
double sdp_objective(const SdpProblem& problem, const RVector& r);
/// 2 A^T V^-1 (A r - m)
RVector sdp_objective_gradient(const SdpProblem& problem, const RVector& r);
/// F0 + sum_k r_k F_k
CMatrix sdp_matrix(const SdpProblem& problem, const RVector& r);

}  // namespace qpt
