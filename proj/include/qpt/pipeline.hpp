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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpt/error_analysis.hpp"
#include "qpt/io.hpp"

namespace qpt {

/// A simulation setup. Serializes to the "qpt.scenario/1" schema:
///
///   {"schema": "qpt.scenario/1",
///    "process": "CNOT" | {"name": "...", "ptm": [256 numbers, row-major]}
///               | {"ptm_file": "path relative to the scenario"},
///    "gateset": {"epsilon": 0.0, "seed": 0, "independent_roles": false,
///                "decoherence": {"t1_us": [..], "t2_us": [..], "pulse_ns": 40,
///                                "process_ns": 0}},
///    "measurement": {"diagonal": [..], "sqrt_v": 0.0143, "shots": 10000,
///                    "noiseless": false},
///    "seed": 1}
struct Scenario {
    std::string process_name = "I_I";
    /// Replaces the named process when present.
    std::optional<PauliTransferMatrix> process_ptm;
    double epsilon = 0.0;
    std::uint64_t gateset_seed = 0;
    bool independent_roles = false;
    std::vector<Coherence> coherence;  // empty: no decoherence
    double pulse_ns = 0.0;
    double process_ns = 0.0;
    MeasurementOperator detector = MeasurementOperator::calibrated_two_qubit();
    bool noiseless = false;
    std::uint64_t seed = 0;

    int n_qubits() const { return detector.n_qubits(); }
    /// Process actually simulated (including its decoherence).
    PauliTransferMatrix true_process() const;
    /// Process the estimate is scored against.
    PauliTransferMatrix ideal_process() const;
    /// Pulses actually applied.
    GateSet gateset() const;
};

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const JsonDocument& doc, const std::filesystem::path& base_dir = {});

MeasurementRecord simulate_scenario(const Scenario& s);

enum ExitCode { kExitOk = 0, kExitSchema = 2, kExitSolver = 3, kExitRank = 4, kExitOther = 1 };

/// A solver that did not report an optimal point.
class SolverFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool tp_constraint = false;
    SolverMethod solver = SolverMethod::interior_point;
    /// Bootstrap replicates. Overrides a study file; for reconstruct, fills delta_F_g.
    std::optional<int> replicates;
    bool allow_nonoptimal = false;
    bool linear_only = false;
    int threads = 0;
    /// Overrides the interior-point Newton step cap.
    std::optional<int> max_iterations;
};

/// <stem>.record.json and <stem>.record.csv
std::vector<std::filesystem::path> cmd_simulate(const std::filesystem::path& scenario_file, const CommandOptions& o,
                                                std::ostream& log);
/// <stem>.result.json and <stem>.row.csv; prints the table row.
std::vector<std::filesystem::path> cmd_reconstruct(const std::filesystem::path& record_file, const CommandOptions& o,
                                                   std::ostream& log);
/// <stem>.study.csv and <stem>.study-result.json. Kinds: bootstrap, faulty-gateset,
/// decay, decoherence.
std::vector<std::filesystem::path> cmd_study(const std::filesystem::path& study_file, const CommandOptions& o,
                                             std::ostream& log);
/// <stem>.grid.csv, <stem>.bars.csv, <stem>.svg (and _linear variants when
/// only linear inversion is present).
std::vector<std::filesystem::path> cmd_render(const std::filesystem::path& result_file, const CommandOptions& o,
                                              std::ostream& log);
/// Collects result files into report.csv and report.md.
std::vector<std::filesystem::path> cmd_report(const std::vector<std::filesystem::path>& result_files,
                                              const CommandOptions& o, std::ostream& log);

/// Maps the active exception to an exit code and writes a one-line message.
int exit_code_for_current_exception(std::ostream& err);

/// Header and row in the per-gate table layout.
std::string table_header();
std::string table_row(const std::string& gate, const GateDiagnostics& d);

}  // namespace qpt
