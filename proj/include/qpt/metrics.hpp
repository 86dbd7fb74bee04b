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

#include "qpt/channel.hpp"

namespace qpt {

/// F_p = Tr[R_ideal^T R_exp] / d^2. The ideal map should be unitary (R_ideal
/// orthogonal); `ideal_is_unitary` reports whether it was.
struct ProcessFidelity {
    double value;
    bool ideal_is_unitary;
};
ProcessFidelity process_fidelity_checked(const PauliTransferMatrix& ideal, const PauliTransferMatrix& exp);
double process_fidelity(const PauliTransferMatrix& ideal, const PauliTransferMatrix& exp);

/// Average gate fidelity (d F_p + 1) / (d + 1); d in {2, 4, 8}.
double gate_fidelity(double process_fidelity, int d);
/// Gate fidelity of a fitted map against `ideal`, without the [0, 1] check:
/// an estimate that is not trace preserving may score slightly above 1.
double gate_fidelity(const PauliTransferMatrix& ideal, const PauliTransferMatrix& fit);

struct PurifiedFidelity {
    double f_pure;
    double lambda_max;
    /// Top eigenvalue gap below 1e-10; the eigenvector phase convention of
    /// hermitian_eig picks the representative.
    bool degenerate;
};
/// Overlap of the ideal Choi with the top eigenvector of the experimental Choi.
PurifiedFidelity purified_fidelity(const ChoiMatrix& ideal, const ChoiMatrix& exp);

/// Sum of the negative eigenvalues (<= 0).
double negative_weight(const ChoiMatrix& rho);

enum class DistanceMode {
    /// sqrt(Tr|r1 - r2|)
    sqrt_trace_norm,
    /// sqrt(Tr[(r1 - r2)^2])
    frobenius,
    /// Tr|r1 - r2|
    trace_norm,
};
double two_norm_distance(const ChoiMatrix& a, const ChoiMatrix& b, DistanceMode mode = DistanceMode::sqrt_trace_norm);
double two_norm_distance(const CMatrix& a, const CMatrix& b, DistanceMode mode);

struct Distances {
    double sqrt_trace_norm;
    double frobenius;
    double trace_norm;
};
Distances all_distances(const ChoiMatrix& a, const ChoiMatrix& b);

/// <psi|rho|psi> for a pure target |psi><psi|.
double state_fidelity(const Operator& rho, const Operator& target);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Operator& rho);

/// One row of the per-gate diagnostic table.
struct GateDiagnostics {
    double f_p = 0.0;
    double f_g = 0.0;
    double delta_f_g = 0.0;  // filled in by bootstrap, 0 otherwise
    double r_ii = 0.0;
    double f_pure = 0.0;
    double lambda_max = 0.0;
    double neg_weight = 0.0;  // of the linear-inversion Choi
    Distances mle_ideal{};
    Distances mle_data{};
    Distances data_ideal{};
};

/// Everything except delta_f_g, from the ideal, MLE and linear-inversion maps.
GateDiagnostics diagnose(const PauliTransferMatrix& ideal, const PauliTransferMatrix& mle,
                         const PauliTransferMatrix& linear);

}  // namespace qpt
