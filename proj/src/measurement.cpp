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

#include "qpt/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "qpt/gates.hpp"
#include "qpt/linalg.hpp"
#include "qpt/metrics.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

MeasurementOperator MeasurementOperator::calibrated_two_qubit() {
    MeasurementOperator m;
    m.diagonal = RVector(4);
    m.diagonal << 0.0035, 0.0196, 0.0302, 0.0323;
    m.variance = 0.0143 * 0.0143;
    m.shots = 10000;
    return m;
}

int MeasurementOperator::n_qubits() const { return log2_exact(diagonal.size()); }

Operator MeasurementOperator::observable() const {
    return Operator::observable(diagonal.cast<cplx>().asDiagonal().toDenseMatrix());
}

RVector MeasurementOperator::pauli_coefficients() const { return pauli_vector_of(observable()).components; }

double MeasurementOperator::mean_noise() const { return std::sqrt(variance / static_cast<double>(shots)); }

void MeasurementOperator::validate() const {
    if (diagonal.size() < 2 || !is_power_of_two(diagonal.size())) {
        throw DomainError("measurement operator needs 2^n diagonal entries");
    }
    if (!(variance >= 0.0)) throw DomainError("measurement variance must be non-negative");
    if (shots < 1) throw DomainError("shot count must be positive");
}

namespace {

GateSet gateset_from_pulses(int n_qubits, const std::vector<int>& pulse_ids) {
    if (n_qubits < 1 || n_qubits > 2) throw DomainError("gate sets support 1 or 2 qubits");
    const auto& labels = pulse_labels();
    const auto& unitaries = pulse_unitaries();
    GateSet g;
    g.n_qubits = n_qubits;
    const int k = static_cast<int>(pulse_ids.size());
    int total = 1;
    for (int q = 0; q < n_qubits; ++q) total *= k;
    for (int idx = 0; idx < total; ++idx) {
        CMatrix u = CMatrix::Identity(1, 1);
        std::string label;
        int rest = idx;
        std::vector<int> digits(n_qubits);
        for (int q = n_qubits - 1; q >= 0; --q) {
            digits[q] = pulse_ids[rest % k];
            rest /= k;
        }
        for (int q = 0; q < n_qubits; ++q) {
            u = kron(u, unitaries[digits[q]]);
            if (q > 0) label += "_";
            label += labels[digits[q]];
        }
        g.labels.push_back(label);
        g.prep.push_back(ptm_of_unitary(u));
    }
    g.analysis = g.prep;
    return g;
}

}  // namespace

GateSet ideal_gateset(int n_qubits) { return gateset_from_pulses(n_qubits, {0, 1, 2, 3, 4, 5}); }

GateSet gateset_from_labels(int n_qubits, const std::vector<std::string>& labels) {
    const auto& names = pulse_labels();
    const auto& unitaries = pulse_unitaries();
    GateSet g;
    g.n_qubits = n_qubits;
    for (const auto& label : labels) {
        CMatrix u = CMatrix::Identity(1, 1);
        int parts = 0;
        size_t start = 0;
        while (start <= label.size()) {
            const size_t end = std::min(label.find('_', start), label.size());
            const auto it = std::find(names.begin(), names.end(), label.substr(start, end - start));
            if (it == names.end()) throw DomainError("unknown tomography pulse in label \"" + label + "\"");
            u = kron(u, unitaries[static_cast<size_t>(it - names.begin())]);
            ++parts;
            start = end + 1;
        }
        if (parts != n_qubits) throw DomainError("label \"" + label + "\" does not name one pulse per qubit");
        g.labels.push_back(label);
        g.prep.push_back(ptm_of_unitary(u));
    }
    g.analysis = g.prep;
    g.description = "from labels";
    return g;
}

GateSet truncated_gateset(int n_qubits) {
    GateSet g = gateset_from_pulses(n_qubits, {0, 1});
    g.description = "truncated {I, Xpi}";
    return g;
}

CMatrix random_error_hamiltonian(int d, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix h(d, d);
    for (int a = 0; a < d; ++a) {
        h(a, a) = normal(rng);
        for (int b = a + 1; b < d; ++b) {
            const double re = normal(rng);
            const double im = normal(rng);
            h(a, b) = cplx(re, im) / std::sqrt(2.0);
            h(b, a) = std::conj(h(a, b));
        }
    }
    h -= (h.trace() / static_cast<double>(d)) * CMatrix::Identity(d, d);
    const double rms = std::sqrt((h * h).trace().real() / d);
    return h / rms;
}

GateSet perturb_gateset_unitary(const GateSet& ideal, double epsilon, std::uint64_t seed, bool independent_roles) {
    if (!(epsilon >= 0.0)) throw DomainError("perturb_gateset_unitary: epsilon must be non-negative");
    GateSet out = ideal;
    if (epsilon == 0.0) return out;
    const int d = 1 << ideal.n_qubits;
    Rng prep_rng(seed);
    Rng meas_rng(derive_seed(seed, 1));
    for (int k = 0; k < ideal.size(); ++k) {
        const CMatrix u = unitary_exp(random_error_hamiltonian(d, prep_rng), epsilon / 2.0);
        out.prep[k] = compose(ptm_of_unitary(u), ideal.prep[k]);
        if (independent_roles) {
            const CMatrix v = unitary_exp(random_error_hamiltonian(d, meas_rng), epsilon / 2.0);
            out.analysis[k] = compose(ptm_of_unitary(v), ideal.analysis[k]);
        } else {
            out.analysis[k] = compose(ptm_of_unitary(u), ideal.analysis[k]);
        }
    }
    out.description = "unitary error eps=" + std::to_string(epsilon) + " seed=" + std::to_string(seed) +
                      (independent_roles ? " independent roles" : "");
    return out;
}

GateSet perturb_gateset_decoherence(const GateSet& ideal, const std::vector<Coherence>& qubits,
                                    double gate_duration_ns) {
    if (static_cast<int>(qubits.size()) != ideal.n_qubits) {
        throw DomainError("perturb_gateset_decoherence: need one coherence pair per qubit");
    }
    const PauliTransferMatrix noise = decoherence_ptm(qubits, gate_duration_ns);
    GateSet out = ideal;
    for (int k = 0; k < ideal.size(); ++k) {
        out.prep[k] = compose(noise, ideal.prep[k]);
        out.analysis[k] = compose(noise, ideal.analysis[k]);
    }
    out.description = ideal.description + " + decoherence " + std::to_string(gate_duration_ns) + "ns";
    return out;
}

double mean_pulse_fidelity(const GateSet& ideal, const GateSet& actual, bool analysis_role) {
    if (ideal.size() != actual.size()) throw DomainError("mean_pulse_fidelity: gate sets differ in size");
    const int d = 1 << ideal.n_qubits;
    double s = 0.0;
    for (int k = 0; k < ideal.size(); ++k) {
        const auto& a = analysis_role ? actual.analysis[k] : actual.prep[k];
        const auto& i = analysis_role ? ideal.analysis[k] : ideal.prep[k];
        s += (d * process_fidelity(i, a) + 1.0) / (d + 1.0);
    }
    return s / ideal.size();
}

void MeasurementRecord::validate() const {
    const long np = static_cast<long>(labels_prep.size());
    const long nm = static_cast<long>(labels_meas.size());
    if (values.rows() != np || values.cols() != nm) throw DomainError("record: value grid does not match labels");
    if (variances.size() != nm) throw DomainError("record: need one variance per analysis setting");
    for (Eigen::Index j = 0; j < variances.size(); ++j) {
        if (!(variances(j) >= 0.0)) throw DomainError("record: negative variance");
    }
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values.data()[k])) throw DomainError("record: missing or non-finite entry");
    }
    if (shots < 1) throw DomainError("record: shot count must be positive");
}

namespace {

RVector ground_state_vector(int n_qubits) {
    const int d = 1 << n_qubits;
    CVector psi = CVector::Zero(d);
    psi(0) = 1.0;
    return pauli_vector_of(Operator::projector(psi)).components;
}

void check_indices(const GateSet& gates, int i, int j) {
    if (i < 0 || i >= gates.size() || j < 0 || j >= gates.size()) {
        throw DomainError("expected_value: index out of range");
    }
}

}  // namespace

double expected_value(const PauliTransferMatrix& process, int i, int j, const GateSet& gates,
                      const MeasurementOperator& m) {
    check_indices(gates, i, j);
    if (process.n_qubits() != gates.n_qubits || m.n_qubits() != gates.n_qubits) {
        throw DomainError("expected_value: qubit counts differ");
    }
    const RVector p = gates.prep[i].matrix() * ground_state_vector(gates.n_qubits);
    const RVector a = gates.analysis[j].matrix().transpose() * m.pauli_coefficients();
    return a.dot(process.matrix() * p) / static_cast<double>(process.dim());
}

double expected_value_density(const PauliTransferMatrix& process, int i, int j, const GateSet& gates,
                              const MeasurementOperator& m) {
    check_indices(gates, i, j);
    const int d = process.dim();
    CVector psi = CVector::Zero(d);
    psi(0) = 1.0;
    const Operator rho_i = apply_channel(choi_of_ptm(gates.prep[i]), Operator::projector(psi));
    const Operator out = apply_channel(choi_of_ptm(process), rho_i);
    const Operator analysed = apply_channel(choi_of_ptm(gates.analysis[j]), out);
    return (m.observable().matrix() * analysed.matrix()).trace().real();
}

RMatrix build_transfer_matrix(const GateSet& gates, const MeasurementOperator& m) {
    m.validate();
    if (m.n_qubits() != gates.n_qubits) throw DomainError("build_transfer_matrix: qubit counts differ");
    const int n = gates.size();
    const int n2 = 1 << (2 * gates.n_qubits);
    const double inv_d = 1.0 / static_cast<double>(1 << gates.n_qubits);
    const RVector ground = ground_state_vector(gates.n_qubits);
    const RVector mc = m.pauli_coefficients();
    RMatrix w(static_cast<long>(n) * n, static_cast<long>(n2) * n2);
    for (int j = 0; j < n; ++j) {
        const RVector a = gates.analysis[j].matrix().transpose() * mc;
        for (int i = 0; i < n; ++i) {
            const RVector p = gates.prep[i].matrix() * ground;
            const long row = i + static_cast<long>(n) * j;
            for (int b = 0; b < n2; ++b)
                for (int c = 0; c < n2; ++c) w(row, c + static_cast<long>(n2) * b) = inv_d * a(c) * p(b);
        }
    }
    return w;
}

MeasurementRecord simulate_record(const PauliTransferMatrix& process, const GateSet& gates,
                                  const MeasurementOperator& m, std::uint64_t seed, const RVector& variances) {
    m.validate();
    const int n = gates.size();
    MeasurementRecord rec;
    rec.n_qubits = gates.n_qubits;
    rec.labels_prep = gates.labels;
    rec.labels_meas = gates.labels;
    rec.shots = m.shots;
    rec.seed = seed;
    rec.variances = variances.size() == 0 ? RVector::Constant(n, m.variance) : variances;
    if (rec.variances.size() != n) throw DomainError("simulate_record: need one variance per analysis setting");

    const RMatrix w = build_transfer_matrix(gates, m);
    const RVector mean = w * process.vec();
    rec.values = Eigen::Map<const RMatrix>(mean.data(), n, n);

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xi = normal(rng);
            const double sigma = std::sqrt(rec.variances(j) / static_cast<double>(m.shots));
            rec.values(i, j) += sigma * xi;
        }
    }
    rec.validate();
    return rec;
}

RVector record_vector(const MeasurementRecord& r) { return Eigen::Map<const RVector>(r.values.data(), r.values.size()); }

}  // namespace qpt
