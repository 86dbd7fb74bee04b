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

#include "qpt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qpt/linalg.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

ProcessFidelity process_fidelity_checked(const PauliTransferMatrix& ideal, const PauliTransferMatrix& exp) {
    if (ideal.n_qubits() != exp.n_qubits()) throw DomainError("process_fidelity: shape mismatch");
    const RMatrix& ri = ideal.matrix();
    const double n = ri.rows();
    const bool orthogonal = max_abs(RMatrix(ri.transpose() * ri - RMatrix::Identity(ri.rows(), ri.cols()))) <= 1e-8;
    return {(ri.transpose() * exp.matrix()).trace() / n, orthogonal};
}

double process_fidelity(const PauliTransferMatrix& ideal, const PauliTransferMatrix& exp) {
    return process_fidelity_checked(ideal, exp).value;
}

double gate_fidelity(double fp, int d) {
    if (d != 2 && d != 4 && d != 8) throw DomainError("gate_fidelity: d must be 2, 4 or 8");
    // Linear inversions are unconstrained and can land slightly outside [0, 1].
    if (!(fp >= -1e-6 && fp <= 1.0 + 1e-6)) throw DomainError("gate_fidelity: F_p outside [0, 1]");
    return (d * fp + 1.0) / (d + 1.0);
}

double gate_fidelity(const PauliTransferMatrix& ideal, const PauliTransferMatrix& fit) {
    const double d = ideal.dim();
    return (d * process_fidelity(ideal, fit) + 1.0) / (d + 1.0);
}

PurifiedFidelity purified_fidelity(const ChoiMatrix& ideal, const ChoiMatrix& exp) {
    if (ideal.n_qubits() != exp.n_qubits()) throw DomainError("purified_fidelity: shape mismatch");
    const HermitianEig e = hermitian_eig(exp.matrix());
    const CVector v = e.vectors.col(0);
    const double f = (v.adjoint() * ideal.matrix() * v)(0, 0).real();
    const bool degenerate = e.values.size() > 1 && (e.values(0) - e.values(1)) < 1e-10;
    return {f, e.values(0), degenerate};
}

double negative_weight(const ChoiMatrix& rho) {
    const HermitianEig e = hermitian_eig(rho.matrix());
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) s += std::min(e.values(i), 0.0);
    return s;
}

double two_norm_distance(const CMatrix& a, const CMatrix& b, DistanceMode mode) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("two_norm_distance: shape mismatch");
    const RVector ev = hermitian_eig(CMatrix(a - b)).values;
    switch (mode) {
        case DistanceMode::sqrt_trace_norm:
            return std::sqrt(ev.cwiseAbs().sum());
        case DistanceMode::frobenius:
            return std::sqrt(ev.squaredNorm());
        case DistanceMode::trace_norm:
            return ev.cwiseAbs().sum();
    }
    return 0.0;
}

double two_norm_distance(const ChoiMatrix& a, const ChoiMatrix& b, DistanceMode mode) {
    return two_norm_distance(a.matrix(), b.matrix(), mode);
}

Distances all_distances(const ChoiMatrix& a, const ChoiMatrix& b) {
    if (a.n_qubits() != b.n_qubits()) throw DomainError("two_norm_distance: shape mismatch");
    const RVector ev = hermitian_eig(CMatrix(a.matrix() - b.matrix())).values;
    const double tn = ev.cwiseAbs().sum();
    return {std::sqrt(tn), std::sqrt(ev.squaredNorm()), tn};
}

double state_fidelity(const Operator& rho, const Operator& target) {
    if (rho.dim() != target.dim()) throw DomainError("state_fidelity: dimension mismatch");
    const cplx tr = target.trace();
    const cplx purity = (target.matrix() * target.matrix()).trace();
    if (std::abs(tr - 1.0) > 1e-8 || std::abs(purity - 1.0) > 1e-8) {
        throw DomainError("state_fidelity: target is not a pure state");
    }
    return (rho.matrix() * target.matrix()).trace().real();
}

double concurrence(const Operator& rho) {
    if (rho.dim() != 4) throw DomainError("concurrence: expected a 4x4 density matrix");
    const PauliBasis& b = pauli_basis(2);
    const CMatrix& yy = b.elements[b.index_of("YY")].matrix();
    // lambda_i are the singular values of sqrt(rho) sqrt(rho~), with
    // sqrt(rho~) = YY sqrt(rho)* YY.
    const HermitianEig er = hermitian_eig(rho.matrix(), 1e-10);
    const CMatrix sq = hermitian_apply(er, [](double x) { return std::sqrt(std::max(x, 0.0)); });
    const CMatrix prod = sq * yy * sq.conjugate() * yy;
    const RVector sv = Eigen::JacobiSVD<CMatrix>(prod).singularValues();
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[i] = sv(i);
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

GateDiagnostics diagnose(const PauliTransferMatrix& ideal, const PauliTransferMatrix& mle,
                         const PauliTransferMatrix& linear) {
    GateDiagnostics g;
    const ChoiMatrix c_ideal = choi_of_ptm(ideal);
    const ChoiMatrix c_mle = choi_of_ptm(mle);
    const ChoiMatrix c_lin = choi_of_ptm(linear);
    g.f_p = process_fidelity(ideal, mle);
    g.f_g = gate_fidelity(ideal, mle);
    g.r_ii = mle(0, 0);
    const PurifiedFidelity pf = purified_fidelity(c_ideal, c_mle);
    g.f_pure = pf.f_pure;
    g.lambda_max = pf.lambda_max;
    g.neg_weight = negative_weight(c_lin);
    g.mle_ideal = all_distances(c_mle, c_ideal);
    g.mle_data = all_distances(c_mle, c_lin);
    g.data_ideal = all_distances(c_lin, c_ideal);
    return g;
}

}  // namespace qpt
