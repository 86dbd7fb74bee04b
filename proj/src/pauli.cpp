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

#include "qpt/pauli.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <sstream>

#include "qpt/numeric_policy.hpp"

namespace qpt {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long n) {
    if (!is_power_of_two(n)) throw DomainError("dimension " + std::to_string(n) + " is not a power of 2");
    int k = 0;
    while ((1L << k) < n) ++k;
    return k;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Operator::Operator(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DomainError("operator must be square");
    if (!is_power_of_two(m_.rows())) {
        throw DomainError("operator dimension " + std::to_string(m_.rows()) + " is not a power of 2");
    }
}

Operator Operator::density_matrix(CMatrix m) {
    Operator op(std::move(m));
    if (!op.is_hermitian(policy().hermiticity)) throw DomainError("density matrix is not Hermitian");
    if (std::abs(op.trace() - 1.0) > 1e-10) throw DomainError("density matrix trace is not 1");
    return op;
}

Operator Operator::observable(CMatrix m) {
    Operator op(std::move(m));
    if (!op.is_hermitian(policy().hermiticity)) throw DomainError("observable is not Hermitian");
    return op;
}

Operator Operator::projector(const CVector& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("ket is not normalized");
    return Operator(psi * psi.adjoint());
}

Operator Operator::identity(int dim) { return Operator(CMatrix::Identity(dim, dim)); }

int Operator::n_qubits() const { return log2_exact(m_.rows()); }

double Operator::hermiticity_defect() const { return max_abs(CMatrix(m_ - m_.adjoint())); }

template <class M>
static M kron_impl(const M& a, const M& b) {
    M out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) { return kron_impl(a, b); }
RMatrix kron(const RMatrix& a, const RMatrix& b) { return kron_impl(a, b); }
Operator kron(const Operator& a, const Operator& b) { return Operator(kron(a.matrix(), b.matrix())); }

namespace {

std::array<CMatrix, 4> single_qubit_paulis() {
    const cplx i(0.0, 1.0);
    CMatrix id = CMatrix::Identity(2, 2);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    return {id, x, y, z};
}

PauliBasis build_basis(int n) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    const auto single = single_qubit_paulis();
    PauliBasis basis;
    basis.n_qubits = n;
    const int count = 1 << (2 * n);
    basis.elements.reserve(count);
    basis.labels.reserve(count);
    for (int idx = 0; idx < count; ++idx) {
        CMatrix m = CMatrix::Identity(1, 1);
        std::string label;
        for (int q = 0; q < n; ++q) {
            const int letter = (idx >> (2 * (n - 1 - q))) & 3;
            m = kron(m, single[letter]);
            label.push_back(kLetters[letter]);
        }
        basis.elements.emplace_back(std::move(m));
        basis.labels.push_back(std::move(label));
    }
    return basis;
}

}  // namespace

int PauliBasis::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
        if (labels[i] == label) return i;
    }
    return -1;
}

const PauliBasis& pauli_basis(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 3) {
        throw DomainError("pauli_basis supports 1 to 3 qubits, got " + std::to_string(n_qubits));
    }
    static std::once_flag flags[3];
    static PauliBasis bases[3];
    std::call_once(flags[n_qubits - 1], [n_qubits] { bases[n_qubits - 1] = build_basis(n_qubits); });
    return bases[n_qubits - 1];
}

PauliVector pauli_vector_of(const Operator& rho) {
    if (!rho.is_hermitian(policy().hermiticity)) throw DomainError("pauli_vector_of: input is not Hermitian");
    const PauliBasis& basis = pauli_basis(rho.n_qubits());
    PauliVector p{basis.n_qubits, RVector(basis.size())};
    for (int i = 0; i < basis.size(); ++i) {
        // Tr[rho P] = sum_{ab} rho_ab P_ba
        p.components(i) = (rho.matrix().cwiseProduct(basis.elements[i].matrix().transpose())).sum().real();
    }
    return p;
}

Operator operator_of(const PauliVector& p) {
    const PauliBasis& basis = pauli_basis(p.n_qubits);
    if (p.components.size() != basis.size()) throw DomainError("operator_of: wrong vector length");
    CMatrix m = CMatrix::Zero(basis.dim(), basis.dim());
    for (int i = 0; i < basis.size(); ++i) m += p.components(i) * basis.elements[i].matrix();
    return Operator(m / static_cast<double>(basis.dim()));
}

std::vector<int> identity_last_permutation(int n_qubits) {
    const int n = 1 << (2 * n_qubits);
    std::vector<int> perm(n);
    for (int i = 0; i < n - 1; ++i) perm[i] = i + 1;
    perm[n - 1] = 0;
    return perm;
}

RMatrix to_identity_last(const RMatrix& r) {
    const int n_qubits = log2_exact(r.rows()) / 2;
    const auto perm = identity_last_permutation(n_qubits);
    RMatrix out(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.cols(); ++j) out(i, j) = r(perm[i], perm[j]);
    }
    return out;
}

CMatrix partial_trace(const CMatrix& op, Subsystem traced, int dim_a, int dim_b) {
    if (dim_a <= 0 || dim_b <= 0 || op.rows() != op.cols() || op.rows() != static_cast<long>(dim_a) * dim_b) {
        std::ostringstream msg;
        msg << "partial_trace: operator of dimension " << op.rows() << " does not match " << dim_a << "x" << dim_b;
        throw DomainError(msg.str());
    }
    if (traced == Subsystem::B) {
        CMatrix out = CMatrix::Zero(dim_a, dim_a);
        for (int a = 0; a < dim_a; ++a)
            for (int ap = 0; ap < dim_a; ++ap)
                for (int b = 0; b < dim_b; ++b) out(a, ap) += op(a * dim_b + b, ap * dim_b + b);
        return out;
    }
    CMatrix out = CMatrix::Zero(dim_b, dim_b);
    for (int b = 0; b < dim_b; ++b)
        for (int bp = 0; bp < dim_b; ++bp)
            for (int a = 0; a < dim_a; ++a) out(b, bp) += op(a * dim_b + b, a * dim_b + bp);
    return out;
}

Operator partial_trace(const Operator& op, Subsystem traced, int dim_a, int dim_b) {
    return Operator(partial_trace(op.matrix(), traced, dim_a, dim_b));
}

}  // namespace qpt
