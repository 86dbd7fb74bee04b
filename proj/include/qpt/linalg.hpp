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

#include "qpt/pauli.hpp"

namespace qpt {

/// Spectrum of a Hermitian matrix: eigenvalues descending, eigenvectors as
/// orthonormal columns. Each eigenvector's first entry with magnitude above
/// 1e-12 is made real and positive, so results are reproducible.
struct HermitianEig {
    RVector values;
    CMatrix vectors;

    double min() const { return values(values.size() - 1); }
    double max() const { return values(0); }
    CMatrix reconstruct() const;
};

/// Cyclic Jacobi eigensolver. Throws DomainError on non-Hermitian input and
/// ConvergenceError after 100 sweeps without convergence.
HermitianEig hermitian_eig(const CMatrix& a, double hermiticity_tol);
HermitianEig hermitian_eig(const CMatrix& a);
inline HermitianEig hermitian_eig(const Operator& op) { return hermitian_eig(op.matrix()); }

/// f(A) = V diag(f(lambda)) V^dagger for Hermitian A.
template <class F>
CMatrix hermitian_apply(const HermitianEig& e, F&& f) {
    CVector fv(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
    return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped to zero).
CMatrix psd_projection(const CMatrix& a);

/// exp(-i theta H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& h, double theta);

}  // namespace qpt
