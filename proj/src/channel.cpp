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

#include "qpt/channel.hpp"

#include <cmath>
#include <limits>
#include <mutex>

#include "qpt/linalg.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

PauliTransferMatrix::PauliTransferMatrix(int n_qubits, RMatrix r) : n_qubits_(n_qubits), r_(std::move(r)) {
    const long expected = 1L << (2 * n_qubits);
    if (n_qubits < 1 || r_.rows() != expected || r_.cols() != expected) {
        throw DomainError("PauliTransferMatrix: expected " + std::to_string(expected) + "x" +
                          std::to_string(expected) + " matrix");
    }
}

PauliTransferMatrix PauliTransferMatrix::identity(int n_qubits) {
    const int n = 1 << (2 * n_qubits);
    return PauliTransferMatrix(n_qubits, RMatrix::Identity(n, n));
}

PauliTransferMatrix PauliTransferMatrix::from_vec(int n_qubits, const RVector& v) {
    const int n = 1 << (2 * n_qubits);
    if (v.size() != static_cast<long>(n) * n) throw DomainError("PauliTransferMatrix::from_vec: wrong length");
    return PauliTransferMatrix(n_qubits, Eigen::Map<const RMatrix>(v.data(), n, n));
}

RVector PauliTransferMatrix::vec() const { return Eigen::Map<const RVector>(r_.data(), r_.size()); }

ChoiMatrix::ChoiMatrix(int n_qubits, CMatrix m) : n_qubits_(n_qubits), m_(std::move(m)) {
    const long expected = 1L << (2 * n_qubits);
    if (n_qubits < 1 || m_.rows() != expected || m_.cols() != expected) {
        throw DomainError("ChoiMatrix: expected " + std::to_string(expected) + "x" + std::to_string(expected));
    }
    const double scale = std::max(1.0, max_abs(m_));
    if (max_abs(CMatrix(m_ - m_.adjoint())) > policy().hermiticity * scale) {
        throw DomainError("ChoiMatrix: matrix is not Hermitian");
    }
}

int KrausChannel::dim() const {
    if (operators.empty()) throw DomainError("KrausChannel: no operators");
    const auto d = operators.front().rows();
    for (const auto& k : operators) {
        if (k.rows() != d || k.cols() != d) throw DomainError("KrausChannel: operator dimensions differ");
    }
    return static_cast<int>(d);
}

double KrausChannel::completeness_defect() const {
    const int d = dim();
    CMatrix s = CMatrix::Zero(d, d);
    for (const auto& k : operators) s += k.adjoint() * k;
    return max_abs(CMatrix(s - CMatrix::Identity(d, d)));
}

namespace {

RMatrix ptm_from_action(int n_qubits, const auto& action) {
    const PauliBasis& basis = pauli_basis(n_qubits);
    const int n = basis.size();
    const double d = basis.dim();
    RMatrix r(n, n);
    for (int j = 0; j < n; ++j) {
        const CMatrix out = action(basis.elements[j].matrix());
        for (int i = 0; i < n; ++i) {
            r(i, j) = (basis.elements[i].matrix().transpose().cwiseProduct(out)).sum().real() / d;
        }
    }
    return r;
}

}  // namespace

PauliTransferMatrix ptm_of_unitary(const CMatrix& u) {
    if (u.rows() != u.cols()) throw DomainError("ptm_of_unitary: matrix is not square");
    if (max_abs(CMatrix(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()))) > policy().unitarity) {
        throw DomainError("ptm_of_unitary: matrix is not unitary");
    }
    const int n = log2_exact(u.rows());
    return PauliTransferMatrix(n, ptm_from_action(n, [&u](const CMatrix& p) -> CMatrix { return u * p * u.adjoint(); }));
}

PauliTransferMatrix ptm_of_kraus(const KrausChannel& ch) {
    const int n = log2_exact(ch.dim());
    return PauliTransferMatrix(n, ptm_from_action(n, [&ch](const CMatrix& p) -> CMatrix {
        CMatrix out = CMatrix::Zero(p.rows(), p.cols());
        for (const auto& k : ch.operators) out += k * p * k.adjoint();
        return out;
    }));
}

const std::vector<CMatrix>& choi_basis(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 3) throw DomainError("choi_basis supports 1 to 3 qubits");
    static std::once_flag flags[3];
    static std::vector<CMatrix> cache[3];
    std::call_once(flags[n_qubits - 1], [n_qubits] {
        const PauliBasis& basis = pauli_basis(n_qubits);
        const int n = basis.size();
        const double scale = 1.0 / (static_cast<double>(n));
        auto& out = cache[n_qubits - 1];
        out.reserve(static_cast<size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            const CMatrix pj_t = basis.elements[j].matrix().transpose();
            for (int i = 0; i < n; ++i) out.push_back(scale * kron(pj_t, basis.elements[i].matrix()));
        }
    });
    return cache[n_qubits - 1];
}

ChoiMatrix choi_of_ptm(const PauliTransferMatrix& r) {
    const auto& b = choi_basis(r.n_qubits());
    const int n = r.size();
    CMatrix m = CMatrix::Zero(n, n);
    const double* v = r.matrix().data();
    for (size_t k = 0; k < b.size(); ++k) {
        if (v[k] != 0.0) m += v[k] * b[k];
    }
    return ChoiMatrix(r.n_qubits(), m);
}

PauliTransferMatrix ptm_of_choi(const ChoiMatrix& rho) {
    const auto& b = choi_basis(rho.n_qubits());
    const int n = static_cast<int>(rho.matrix().rows());
    RMatrix r(n, n);
    // Tr[rho B_k] with B_k = P_j^T (x) P_i / d^2, and R_ij = Tr[rho P_j^T (x) P_i].
    const double scale = static_cast<double>(n);
    for (size_t k = 0; k < b.size(); ++k) {
        r.data()[k] = scale * (rho.matrix().cwiseProduct(b[k].transpose())).sum().real();
    }
    return PauliTransferMatrix(rho.n_qubits(), r);
}

Operator apply_channel(const ChoiMatrix& choi, const Operator& state) {
    const int d = choi.dim();
    if (state.dim() != d) throw DomainError("apply_channel: state dimension does not match channel");
    const CMatrix lhs = kron(CMatrix(state.matrix().transpose()), CMatrix::Identity(d, d));
    return Operator(static_cast<double>(d) * partial_trace(CMatrix(lhs * choi.matrix()), Subsystem::A, d, d));
}

PauliVector apply_ptm(const PauliTransferMatrix& r, const PauliVector& p) {
    if (p.n_qubits != r.n_qubits() || p.components.size() != r.size()) {
        throw DomainError("apply_ptm: shape mismatch");
    }
    return PauliVector{p.n_qubits, r.matrix() * p.components};
}

PauliTransferMatrix compose(const PauliTransferMatrix& r1, const PauliTransferMatrix& r2) {
    if (r1.n_qubits() != r2.n_qubits()) throw DomainError("compose: shape mismatch");
    return PauliTransferMatrix(r1.n_qubits(), r1.matrix() * r2.matrix());
}

PauliTransferMatrix tensor(const PauliTransferMatrix& a, const PauliTransferMatrix& b) {
    return PauliTransferMatrix(a.n_qubits() + b.n_qubits(), kron(a.matrix(), b.matrix()));
}

Operator adjoint_apply(const PauliTransferMatrix& r, const Operator& observable) {
    // Tr[A B] = (1/d) a . b for Pauli coefficient vectors, so the Heisenberg
    // image of M has coefficients R^T m.
    PauliVector m = pauli_vector_of(observable);
    m.components = r.matrix().transpose() * m.components;
    return operator_of(m);
}

PredicateResult is_trace_preserving(const ChoiMatrix& choi) {
    const int d = choi.dim();
    const CMatrix red = partial_trace(choi.matrix(), Subsystem::B, d, d);
    const double res = max_abs(CMatrix(red - CMatrix::Identity(d, d) / static_cast<double>(d)));
    return {res <= policy().tp_residual, res};
}

PredicateResult is_unital(const ChoiMatrix& choi) {
    const int d = choi.dim();
    const CMatrix red = partial_trace(choi.matrix(), Subsystem::A, d, d);
    const double res = max_abs(CMatrix(red - CMatrix::Identity(d, d) / static_cast<double>(d)));
    return {res <= policy().tp_residual, res};
}

PredicateResult is_completely_positive(const ChoiMatrix& choi, double slack) {
    const double lmin = hermitian_eig(choi.matrix()).min();
    return {lmin >= -slack, lmin};
}

KrausChannel amplitude_damping(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude_damping: gamma outside [0, 1]");
    CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    return {{k0, k1}};
}

KrausChannel dephasing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dephasing: p outside [0, 1]");
    CMatrix z = CMatrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return {{std::sqrt(1.0 - p) * CMatrix::Identity(2, 2), std::sqrt(p) * z}};
}

KrausChannel depolarizing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p outside [0, 1]");
    const PauliBasis& b = pauli_basis(1);
    KrausChannel ch;
    ch.operators.push_back(std::sqrt(1.0 - 0.75 * p) * b.elements[0].matrix());
    for (int k = 1; k < 4; ++k) ch.operators.push_back(std::sqrt(p / 4.0) * b.elements[k].matrix());
    return ch;
}

KrausChannel decoherence(const Coherence& c, double duration_ns) {
    if (!(c.t1_us > 0.0) || !(c.t2_us > 0.0) || !(duration_ns >= 0.0)) {
        throw DomainError("decoherence: T1, T2 must be positive and the duration non-negative");
    }
    const double inv_t1 = std::isinf(c.t1_us) ? 0.0 : 1.0 / c.t1_us;
    const double inv_t2 = std::isinf(c.t2_us) ? 0.0 : 1.0 / c.t2_us;
    const double inv_tphi = inv_t2 - 0.5 * inv_t1;
    if (inv_tphi < -1e-12) throw DomainError("decoherence: T2 must not exceed 2 T1");
    const double t_us = duration_ns * 1e-3;
    const double gamma = 1.0 - std::exp(-t_us * inv_t1);
    const double p = 0.5 * (1.0 - std::exp(-t_us * std::max(inv_tphi, 0.0)));
    const KrausChannel ad = amplitude_damping(gamma);
    const KrausChannel dp = dephasing(p);
    KrausChannel out;
    for (const auto& l : dp.operators)
        for (const auto& k : ad.operators) out.operators.push_back(l * k);
    return out;
}

PauliTransferMatrix decoherence_ptm(const std::vector<Coherence>& qubits, double duration_ns) {
    if (qubits.empty()) throw DomainError("decoherence_ptm: no qubits");
    PauliTransferMatrix r = ptm_of_kraus(decoherence(qubits[0], duration_ns));
    for (size_t q = 1; q < qubits.size(); ++q) r = tensor(r, ptm_of_kraus(decoherence(qubits[q], duration_ns)));
    return r;
}

PauliTransferMatrix depolarizing_ptm(int n_qubits, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing_ptm: p outside [0, 1]");
    PauliTransferMatrix r = PauliTransferMatrix::identity(n_qubits);
    RMatrix m = (1.0 - p) * r.matrix();
    m(0, 0) = 1.0;
    return PauliTransferMatrix(n_qubits, m);
}

}  // namespace qpt
