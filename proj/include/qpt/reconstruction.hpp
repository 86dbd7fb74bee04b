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

#include <memory>

#include "qpt/measurement.hpp"
#include "qpt/sdp.hpp"

namespace qpt {

struct ReconstructionOptions {
    /// Adds Tr_B[rho] = I/d (first row of R fixed to (1, 0, ..., 0)).
    bool tp_constraint = false;
    SolverMethod solver = SolverMethod::interior_point;
    SolverOptions solver_options;
    /// Return the weighted least-squares point directly when it is already CP.
    bool exact_when_interior = true;
};

/// The transfer matrix W of a gate set and detector together with the
/// factorization of W^T W. Immutable, so one instance can serve many records.
class QptDesign {
  public:
    QptDesign(const GateSet& gates, const MeasurementOperator& m);

    int n_qubits() const { return n_qubits_; }
    int n_settings() const { return n_settings_; }
    const RMatrix& transfer_matrix() const { return w_; }
    /// lambda_max / lambda_min of W^T W.
    double condition_number() const { return condition_; }
    /// Eigenvalues of W^T W above lambda_max / rank_condition.
    int rank() const { return rank_; }
    /// Throws RankError when the condition number is not below the policy limit.
    void require_full_rank() const;

    /// (W^T W)^-1 W^T m
    PauliTransferMatrix linear_inversion(const RVector& data) const;

  private:
    int n_qubits_;
    int n_settings_;
    RMatrix w_;
    RMatrix gram_;
    RMatrix eigvecs_;
    RVector eigvals_;  // ascending
    double condition_;
    int rank_;
};

PauliTransferMatrix linear_inversion(const MeasurementRecord& record, const GateSet& gates,
                                     const MeasurementOperator& m);

/// The weighted least-squares SDP for a record. Rows are weighted by
/// N / v_j; an all-zero variance vector gives uniform weights.
SdpProblem build_qpt_problem(const MeasurementRecord& record, const QptDesign& design,
                             const ReconstructionOptions& options = {});

struct MleResult {
    PauliTransferMatrix ptm;
    SolverReport report;
    bool tp_constraint = false;
};

MleResult mle_reconstruct(const MeasurementRecord& record, const GateSet& gates, const MeasurementOperator& m,
                          const ReconstructionOptions& options = {});
MleResult mle_reconstruct(const MeasurementRecord& record, const QptDesign& design,
                          const ReconstructionOptions& options = {});

/// Nearest density matrix in Frobenius norm: the spectrum is projected onto
/// the probability simplex. `variances` is checked but does not enter.
Operator state_mle(const PauliVector& expectations, const RVector& variances = RVector());

}  // namespace qpt
