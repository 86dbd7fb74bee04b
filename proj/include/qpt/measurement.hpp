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

#include <cstdint>
#include <string>
#include <vector>

#include "qpt/channel.hpp"
#include "qpt/rng.hpp"

namespace qpt {

/// Joint readout M = sum_i m_i |i><i| (microvolts) with Gaussian amplifier
/// noise of variance v per shot, averaged over `shots` repetitions.
struct MeasurementOperator {
    RVector diagonal;
    double variance = 0.0;
    long shots = 1;

    /// M = diag(0.0035, 0.0196, 0.0302, 0.0323) uV, sqrt(v) = 0.0143 uV, N = 10^4.
    static MeasurementOperator calibrated_two_qubit();

    int n_qubits() const;
    Operator observable() const;
    /// Pauli coefficients Tr[M P_k].
    RVector pauli_coefficients() const;
    /// sqrt(v / N)
    double mean_noise() const;
    void validate() const;
};

/// Preparation and analysis pulses {I, Xpi, X+-pi/2, Y+-pi/2}^n. Labels are
/// lexicographic in (qubit-1 pulse, qubit-2 pulse), e.g. "Xpi/2_Y-pi/2".
struct GateSet {
    int n_qubits = 0;
    std::vector<std::string> labels;
    std::vector<PauliTransferMatrix> prep;
    std::vector<PauliTransferMatrix> analysis;
    std::string description = "ideal";

    int size() const { return static_cast<int>(labels.size()); }
};

GateSet ideal_gateset(int n_qubits);

/// Ideal gates for labels such as "Xpi/2_Y-pi/2", one pulse name per qubit.
/// Throws DomainError on an unknown pulse or a wrong qubit count.
GateSet gateset_from_labels(int n_qubits, const std::vector<std::string>& labels);

/// Pulses {I, Xpi}^n only; not informationally complete.
GateSet truncated_gateset(int n_qubits);

/// Traceless Hermitian H with Tr[H^2]/d = 1 from the Gaussian unitary ensemble.
CMatrix random_error_hamiltonian(int d, Rng& rng);

/// Each gate followed by exp(-i eps H_rand / 2), H_rand drawn independently per
/// gate label. With independent_roles the analysis copies get their own draws.
GateSet perturb_gateset_unitary(const GateSet& ideal, double epsilon, std::uint64_t seed,
                                bool independent_roles = false);

/// Each gate followed by per-qubit amplitude damping and dephasing for its
/// duration. `qubits[0]` is qubit 1.
GateSet perturb_gateset_decoherence(const GateSet& ideal, const std::vector<Coherence>& qubits,
                                    double gate_duration_ns);

/// Average over gates of the gate fidelity of `actual` against `ideal`.
double mean_pulse_fidelity(const GateSet& ideal, const GateSet& actual, bool analysis_role = true);

/// Mean detector voltages for every (preparation i, analysis j) pair.
struct MeasurementRecord {
    int n_qubits = 0;
    std::vector<std::string> labels_prep;
    std::vector<std::string> labels_meas;
    RMatrix values;     // n_prep x n_meas, uV
    RVector variances;  // per analysis setting, uV^2 (single-shot)
    long shots = 1;
    std::uint64_t seed = 0;
    std::string scenario = "{}";  // JSON object text

    void validate() const;
};

/// Tr[M_j L(rho_i)] through the Pauli expansion (1/d) sum Tr[rho_i P_n] Tr[M_j P_m] R_mn.
double expected_value(const PauliTransferMatrix& process, int prep_index, int meas_index, const GateSet& gates,
                      const MeasurementOperator& m);

/// The same quantity computed on density matrices through Choi matrices.
double expected_value_density(const PauliTransferMatrix& process, int prep_index, int meas_index,
                              const GateSet& gates, const MeasurementOperator& m);

/// W with row i + n_prep * j and column a + d^2 b, so that values = W vec(R)
/// with both vectors column-major.
RMatrix build_transfer_matrix(const GateSet& gates, const MeasurementOperator& m);

/// values(i, j) = expected + sqrt(v_j / N) xi with xi ~ N(0, 1). Empty
/// `variances` means v_j = m.variance for all j; zero variance is noiseless.
MeasurementRecord simulate_record(const PauliTransferMatrix& process, const GateSet& gates,
                                  const MeasurementOperator& m, std::uint64_t seed,
                                  const RVector& variances = RVector());

/// Column-major vec of a record grid (i fastest).
RVector record_vector(const MeasurementRecord& r);

}  // namespace qpt
