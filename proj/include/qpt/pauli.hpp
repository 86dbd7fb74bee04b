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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpt {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense operator on an n-qubit Hilbert space (d = 2^n).
class Operator {
  public:
    explicit Operator(CMatrix m);

    /// Hermitian, unit-trace matrix. PSD is not checked here.
    static Operator density_matrix(CMatrix m);
    /// Hermitian matrix.
    static Operator observable(CMatrix m);
    /// |psi><psi| for a normalized ket.
    static Operator projector(const CVector& psi);
    static Operator identity(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    int n_qubits() const;
    const CMatrix& matrix() const { return m_; }
    cplx trace() const { return m_.trace(); }

    /// max-entry |A - A^dagger|
    double hermiticity_defect() const;
    bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

  private:
    CMatrix m_;
};

Operator kron(const Operator& a, const Operator& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
RMatrix kron(const RMatrix& a, const RMatrix& b);
double max_abs(const CMatrix& m);
double max_abs(const RMatrix& m);
bool is_power_of_two(long n);
int log2_exact(long n);

/// Pauli strings over {I, X, Y, Z}^n in canonical order: identity first,
/// lexicographic in (I, X, Y, Z) per qubit, qubit 1 the slowest index.
struct PauliBasis {
    int n_qubits = 0;
    std::vector<Operator> elements;
    std::vector<std::string> labels;

    int dim() const { return 1 << n_qubits; }
    int size() const { return static_cast<int>(elements.size()); }
    /// Index of a label such as "IX" or "ZZ"; -1 when absent.
    int index_of(const std::string& label) const;
};

/// Cached basis for 1 <= n_qubits <= 3.
const PauliBasis& pauli_basis(int n_qubits);

/// Expectation values <P_i> of a state, rho = (1/d) p . P.
struct PauliVector {
    int n_qubits = 0;
    RVector components;
};

/// components[i] = Tr[rho P_i]
PauliVector pauli_vector_of(const Operator& rho);
/// (1/d) sum_i p_i P_i
Operator operator_of(const PauliVector& p);

/// Permutation taking identity-first order to identity-last order, for output
/// that follows the "P_{d^2} = I" row/column convention.
std::vector<int> identity_last_permutation(int n_qubits);
RMatrix to_identity_last(const RMatrix& r);

enum class Subsystem { A, B };

/// Traces out `traced` from an operator on H_A (x) H_B, A the slow index.
CMatrix partial_trace(const CMatrix& op, Subsystem traced, int dim_a, int dim_b);
Operator partial_trace(const Operator& op, Subsystem traced, int dim_a, int dim_b);

}  // namespace qpt
