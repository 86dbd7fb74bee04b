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
#include <vector>

#include "qpt/metrics.hpp"
#include "qpt/parallel.hpp"
#include "qpt/reconstruction.hpp"

namespace qpt {

struct BootstrapOptions {
    int replicates = 100;
    std::uint64_t seed = 0;
    int threads = 0;
    ReconstructionOptions reconstruction;
};

struct BootstrapResult {
    int replicates = 0;
    /// Gate fidelity of each successful replicate, in replicate order.
    std::vector<double> fidelities;
    /// Sample standard deviation of `fidelities`.
    double delta_fg = 0.0;
    /// mean(fidelities) - reference_fg
    double mean_offset = 0.0;
    /// Gate fidelity of the fit to the unperturbed record.
    double reference_fg = 0.0;
    int failed = 0;
};

/// Replicate k adds sqrt(v_j / N) xi_ij to the record with xi drawn from
/// derive_seed(seed, k), refits, and scores the fit against `ideal`.
BootstrapResult bootstrap(const MeasurementRecord& record, const QptDesign& design,
                          const PauliTransferMatrix& ideal, const BootstrapOptions& options = {});

struct FaultyGatesetOptions {
    int trials = 10;
    std::uint64_t seed = 0;
    /// Adds the detector's shot noise to the otherwise exact record.
    bool shot_noise = false;
    bool independent_roles = false;
    int threads = 0;
    MeasurementOperator detector = MeasurementOperator::calibrated_two_qubit();
    ReconstructionOptions reconstruction;
};

struct FaultyGatesetRow {
    double epsilon = 0.0;
    /// Mean analysis-pulse gate fidelity.
    double pulse_fg = 0.0;
    /// Gate fidelity of the reconstructed identity.
    double reconstructed_fg = 0.0;
    /// 0.5 Tr|rho_mle - rho_ideal|
    double distance = 0.0;
    Distances distances{};
    int trials = 0;
    int failed = 0;
};

/// Reconstructs a perfect identity measured with perturbed pulses, using the
/// ideal pulses in the estimator, and averages over trials.
FaultyGatesetRow faulty_gateset_point(double epsilon, const FaultyGatesetOptions& options);
std::vector<FaultyGatesetRow> faulty_gateset_study(const std::vector<double>& epsilons,
                                                   const FaultyGatesetOptions& options);
/// Mean analysis-pulse fidelity over the trial draws used at `epsilon`.
double mean_pulse_fidelity_at(double epsilon, const FaultyGatesetOptions& options);
/// Bisection for the epsilon whose mean pulse fidelity equals `target`.
double epsilon_for_pulse_fidelity(double target, const FaultyGatesetOptions& options);

/// 1 - F_g of the identity sequence under per-qubit decoherence lasting each
/// duration.
std::vector<double> decoherence_budget(const std::vector<Coherence>& qubits, const std::vector<double>& durations_ns);

struct RepeatedGatePoint {
    int n;
    Operator state;
    double state_fidelity = 0.0;
    double concurrence = 0.0;
};

/// rho_N = gate^N prep |0..0>, scored against ideal_gate^N ideal_prep |0..0>.
std::vector<RepeatedGatePoint> repeated_gate_experiment(const PauliTransferMatrix& gate,
                                                        const PauliTransferMatrix& prep, int n_max,
                                                        const PauliTransferMatrix& ideal_gate,
                                                        const PauliTransferMatrix& ideal_prep);
std::vector<RepeatedGatePoint> repeated_gate_experiment(const PauliTransferMatrix& gate,
                                                        const PauliTransferMatrix& prep, int n_max);

struct DecayFit {
    double a = 0.0;
    double b = 0.0;
    double f_g = 0.0;
    /// Sum of squared residuals.
    double residual = 0.0;
    std::vector<double> fidelities;
    int iterations = 0;
    bool converged = false;
    /// The data do not identify the decay (constant within 1e-12).
    bool degenerate = false;
};

/// Least squares fit of F_s(N) = A F_g^N + B by Levenberg-Marquardt, starting
/// from B = 0.25, A = 0.75, F_g = 0.98. The damping starts at 1e-3 times the
/// largest diagonal of J^T J, is divided by 3 after an accepted step and
/// multiplied by 4 after a rejected one. F_g is kept in (0, 1].
DecayFit fit_decay(const std::vector<int>& n, const std::vector<double>& fidelities);
/// Points at N = 0, 1, 2, ...
DecayFit fit_decay(const std::vector<double>& fidelities);

}  // namespace qpt
