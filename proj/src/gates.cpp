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

#include "qpt/gates.hpp"

#include <cmath>
#include <numbers>

#include "qpt/numeric_policy.hpp"

namespace qpt {

CMatrix rotation(char axis, double theta) {
    const PauliBasis& b = pauli_basis(1);
    int idx = 0;
    switch (axis) {
        case 'X': idx = 1; break;
        case 'Y': idx = 2; break;
        case 'Z': idx = 3; break;
        default: throw DomainError(std::string("rotation: unknown axis ") + axis);
    }
    const cplx i(0.0, 1.0);
    return std::cos(theta / 2) * CMatrix::Identity(2, 2) - i * std::sin(theta / 2) * b.elements[idx].matrix();
}

CMatrix cnot() {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 1) = 1.0;
    u(2, 3) = u(3, 2) = 1.0;
    return u;
}

const std::vector<std::string>& pulse_labels() {
    static const std::vector<std::string> labels{"I", "Xpi", "Xpi/2", "X-pi/2", "Ypi/2", "Y-pi/2"};
    return labels;
}

const std::vector<CMatrix>& pulse_unitaries() {
    using std::numbers::pi;
    static const std::vector<CMatrix> u{
        CMatrix::Identity(2, 2), rotation('X', pi),      rotation('X', pi / 2),
        rotation('X', -pi / 2),  rotation('Y', pi / 2), rotation('Y', -pi / 2),
    };
    return u;
}

const std::vector<NamedGate>& process_menu() {
    using std::numbers::pi;
    static const std::vector<NamedGate> menu = [] {
        const CMatrix id = CMatrix::Identity(2, 2);
        struct Local {
            const char* label;
            char axis;
            double theta;
        };
        const Local locals[] = {{"Xpi", 'X', pi}, {"Xpi/2", 'X', pi / 2}, {"Ypi/2", 'Y', pi / 2},
                                {"Xpi/4", 'X', pi / 4}, {"Xpi/8", 'X', pi / 8}};
        std::vector<NamedGate> m;
        m.push_back({"I_I", 2, CMatrix::Identity(4, 4)});
        for (const auto& l : locals) m.push_back({std::string(l.label) + "_I", 2, kron(rotation(l.axis, l.theta), id)});
        for (const auto& l : locals) m.push_back({"I_" + std::string(l.label), 2, kron(id, rotation(l.axis, l.theta))});
        m.push_back({"CNOT", 2, cnot()});
        return m;
    }();
    return menu;
}

const NamedGate& named_gate(const std::string& name) {
    using std::numbers::pi;
    for (const auto& g : process_menu()) {
        if (g.name == name) return g;
    }
    static const std::vector<NamedGate> single = [] {
        std::vector<NamedGate> s{{"I", 1, CMatrix::Identity(2, 2)}};
        for (char axis : {'X', 'Y', 'Z'}) {
            for (auto [suffix, theta] : {std::pair{"pi", pi}, {"pi/2", pi / 2}, {"-pi/2", -pi / 2},
                                         {"pi/4", pi / 4}, {"pi/8", pi / 8}}) {
                s.push_back({std::string(1, axis) + suffix, 1, rotation(axis, theta)});
            }
        }
        return s;
    }();
    for (const auto& g : single) {
        if (g.name == name) return g;
    }
    throw DomainError("unknown gate name: " + name);
}

CMatrix gate_unitary(const std::string& name) {
    for (const auto& g : process_menu()) {
        if (g.name == name) return g.unitary;
    }
    CMatrix u = CMatrix::Identity(1, 1);
    size_t start = 0;
    while (true) {
        const size_t cut = name.find('_', start);
        const std::string part = name.substr(start, cut == std::string::npos ? std::string::npos : cut - start);
        if (part.empty()) throw DomainError("unknown gate name: " + name);
        u = kron(u, named_gate(part).unitary);
        if (cut == std::string::npos) break;
        start = cut + 1;
    }
    return u;
}

}  // namespace qpt
