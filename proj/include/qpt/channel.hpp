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

#include <vector>

#include "qpt/pauli.hpp"

namespace qpt {

/// Real d^2 x d^2 matrix R_ij = (1/d) Tr[P_i L(P_j)] in canonical Pauli order.
class PauliTransferMatrix {
  public:
    PauliTransferMatrix(int n_qubits, RMatrix r);
    static PauliTransferMatrix identity(int n_qubits);
    /// Column-major vec(R), the parameter vector used by the estimators.
    static PauliTransferMatrix from_vec(int n_qubits, const RVector& v);

    int n_qubits() const { return n_qubits_; }
    int dim() const { return 1 << n_qubits_; }
    int size() const { return static_cast<int>(r_.rows()); }
    const RMatrix& matrix() const { return r_; }
    double operator()(int i, int j) const { return r_(i, j); }
    RVector vec() const;

  private:
    int n_qubits_;
    RMatrix r_;
};

/// Hermitian d^2 x d^2 Choi matrix rho = (1/d) sum_ij E_ij (x) L(E_ij); unit
/// trace for trace-preserving maps.
class ChoiMatrix {
  public:
    ChoiMatrix(int n_qubits, CMatrix m);

    int n_qubits() const { return n_qubits_; }
    int dim() const { return 1 << n_qubits_; }
    const CMatrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

  private:
    int n_qubits_;
    CMatrix m_;
};

struct KrausChannel {
    std::vector<CMatrix> operators;

    int dim() const;
    /// max-entry |sum_k K_k^dagger K_k - I|
    double completeness_defect() const;
};

PauliTransferMatrix ptm_of_unitary(const CMatrix& u);
inline PauliTransferMatrix ptm_of_unitary(const Operator& u) { return ptm_of_unitary(u.matrix()); }
PauliTransferMatrix ptm_of_kraus(const KrausChannel& ch);

ChoiMatrix choi_of_ptm(const PauliTransferMatrix& r);
PauliTransferMatrix ptm_of_choi(const ChoiMatrix& rho);

/// The Hermitian matrices B_k = (1/d^2) P_j^T (x) P_i, k = i + d^2 j, with
/// Choi(R) = sum_k vec(R)_k B_k. Cached per qubit count.
const std::vector<CMatrix>& choi_basis(int n_qubits);

/// L(rho) = d Tr_A[(rho^T (x) I) rho_L]
Operator apply_channel(const ChoiMatrix& choi, const Operator& state);
/// p' = R p
PauliVector apply_ptm(const PauliTransferMatrix& r, const PauliVector& p);
/// R1 R2, i.e. R2 acts first.
PauliTransferMatrix compose(const PauliTransferMatrix& r1, const PauliTransferMatrix& r2);
/// Channel on the joint system; `a` acts on the slow (first) qubits.
PauliTransferMatrix tensor(const PauliTransferMatrix& a, const PauliTransferMatrix& b);
/// Heisenberg-picture action on an observable: Tr[M L(rho)] = Tr[L^dagger(M) rho].
Operator adjoint_apply(const PauliTransferMatrix& r, const Operator& observable);

struct PredicateResult {
    bool holds;
    double residual;
};

/// Tr_B[rho_L] = I/d; residual is the max-entry deviation.
PredicateResult is_trace_preserving(const ChoiMatrix& choi);
/// Tr_A[rho_L] = I/d.
PredicateResult is_unital(const ChoiMatrix& choi);
/// lambda_min(rho_L) >= -slack; residual is lambda_min.
PredicateResult is_completely_positive(const ChoiMatrix& choi, double slack);

// Built-in single-qubit channels.
KrausChannel amplitude_damping(double gamma);
/// rho -> (1-p) rho + p Z rho Z
KrausChannel dephasing(double p);
/// rho -> (1-p) rho + p I/2
KrausChannel depolarizing(double p);

/// Coherence parameters of one qubit in microseconds. Infinity disables a
/// process.
struct Coherence {
    double t1_us;
    double t2_us;
};

/// Amplitude damping over `duration_ns` followed by pure dephasing at rate
/// 1/T_phi = 1/T2 - 1/(2 T1). Requires T2 <= 2 T1.
KrausChannel decoherence(const Coherence& c, double duration_ns);
/// Independent per-qubit decoherence; qubits[0] is qubit 1.
PauliTransferMatrix decoherence_ptm(const std::vector<Coherence>& qubits, double duration_ns);
/// (1-p) id + p completely depolarizing on n qubits.
PauliTransferMatrix depolarizing_ptm(int n_qubits, double p);

}  // namespace qpt
