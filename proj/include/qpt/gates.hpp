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

#include <string>
#include <vector>

#include "qpt/pauli.hpp"

namespace qpt {

/// exp(-i theta sigma_axis / 2), axis in {'X', 'Y', 'Z'}.
CMatrix rotation(char axis, double theta);
/// Control on qubit 1 (slow index), target on qubit 2.
CMatrix cnot();

/// Tomography pulses in file-format order: I, Xpi, Xpi/2, X-pi/2, Ypi/2, Y-pi/2.
const std::vector<std::string>& pulse_labels();
const std::vector<CMatrix>& pulse_unitaries();

struct NamedGate {
    std::string name;
    int n_qubits;
    CMatrix unitary;
};

/// The twelve characterized processes: I_I, Xpi_I, Xpi/2_I, Ypi/2_I,
/// Xpi/4_I, Xpi/8_I, I_Xpi, I_Xpi/2, I_Ypi/2, I_Xpi/4, I_Xpi/8, CNOT.
const std::vector<NamedGate>& process_menu();
/// Menu entry, single-qubit rotation ("Xpi/4"), or "I". Throws DomainError.
const NamedGate& named_gate(const std::string& name);
/// Unitary of a menu entry, a single-qubit name, or a product such as
/// "X-pi/2_I" with qubit 1 first.
CMatrix gate_unitary(const std::string& name);

}  // namespace qpt
