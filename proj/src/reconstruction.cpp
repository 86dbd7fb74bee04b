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

#include "qpt/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qpt/linalg.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

QptDesign::QptDesign(const GateSet& gates, const MeasurementOperator& m)
    : n_qubits_(gates.n_qubits), n_settings_(gates.size()), w_(build_transfer_matrix(gates, m)) {
    if (gates.size() < 1) throw DomainError("QptDesign: empty gate set");
    gram_ = w_.transpose() * w_;
    Eigen::SelfAdjointEigenSolver<RMatrix> es(gram_);
    if (es.info() != Eigen::Success) throw ConvergenceError("QptDesign: eigendecomposition failed");
    eigvals_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
    const double top = eigvals_(eigvals_.size() - 1);
    const double bottom = eigvals_(0);
    condition_ = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
    rank_ = 0;
    for (Eigen::Index i = 0; i < eigvals_.size(); ++i) {
        if (eigvals_(i) > top / policy().rank_condition) ++rank_;
    }
}

void QptDesign::require_full_rank() const {
    if (condition_ < policy().rank_condition) return;
    const int n2 = 1 << (2 * n_qubits_);
    const auto& labels = pauli_basis(n_qubits_).labels;
    const int deficient = static_cast<int>(eigvals_.size()) - rank_;
    std::ostringstream msg;
    msg << "design is rank deficient: rank " << rank_ << " of " << eigvals_.size() << ", condition number "
        << condition_ << "; unidentified directions include";
    const int shown = std::min(std::max(deficient, 1), 4);
    for (int d = 0; d < shown; ++d) {
        const RVector v = eigvecs_.col(d);
        std::vector<int> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                          [&](int a, int b) { return std::abs(v(a)) > std::abs(v(b)); });
        msg << (d == 0 ? " " : "; ");
        for (int t = 0; t < 3; ++t) {
            const int k = order[t];
            if (t > 0) msg << (v(k) >= 0 ? " + " : " - ");
            else if (v(k) < 0) msg << "-";
            msg << std::abs(v(k)) << " R[" << labels[k % n2] << "," << labels[k / n2] << "]";
        }
    }
    if (deficient > shown) msg << "; and " << deficient - shown << " more";
    throw RankError(msg.str());
}

PauliTransferMatrix QptDesign::linear_inversion(const RVector& data) const {
    require_full_rank();
    if (data.size() != w_.rows()) throw DomainError("linear_inversion: data length does not match the design");
    const RVector rhs = w_.transpose() * data;
    const RVector r = eigvecs_ * (eigvecs_.transpose() * rhs).cwiseQuotient(eigvals_);
    return PauliTransferMatrix::from_vec(n_qubits_, r);
}

namespace {

void check_compatible(const MeasurementRecord& record, const QptDesign& design) {
    record.validate();
    if (record.n_qubits != design.n_qubits()) throw DomainError("record and gate set have different qubit counts");
    if (static_cast<int>(record.labels_prep.size()) != design.n_settings() ||
        static_cast<int>(record.labels_meas.size()) != design.n_settings()) {
        throw DomainError("record and gate set have different numbers of settings");
    }
}

}  // namespace

PauliTransferMatrix linear_inversion(const MeasurementRecord& record, const GateSet& gates,
                                     const MeasurementOperator& m) {
    const QptDesign design(gates, m);
    check_compatible(record, design);
    return design.linear_inversion(record_vector(record));
}

SdpProblem build_qpt_problem(const MeasurementRecord& record, const QptDesign& design,
                             const ReconstructionOptions& options) {
    check_compatible(record, design);
    const int n = design.n_settings();
    SdpProblem prob;
    prob.design = design.transfer_matrix();
    prob.data = record_vector(record);
    prob.variances = RVector(static_cast<long>(n) * n);
    const bool noiseless = (record.variances.array() == 0.0).all();
    for (int j = 0; j < n; ++j) {
        const double v = noiseless ? 1.0 : record.variances(j) / static_cast<double>(record.shots);
        prob.variances.segment(static_cast<long>(n) * j, n).setConstant(v);
    }
    prob.blocks = choi_basis(design.n_qubits());
    if (options.tp_constraint) {
        const int n2 = 1 << (2 * design.n_qubits());
        for (int j = 0; j < n2; ++j) prob.fixed.emplace_back(n2 * j, j == 0 ? 1.0 : 0.0);
    }
    return prob;
}

namespace {

RVector warm_start(const MeasurementRecord& record, const QptDesign& design, bool tp) {
    const int nq = design.n_qubits();
    const int n2 = 1 << (2 * nq);
    RVector depol = RVector::Zero(static_cast<long>(n2) * n2);
    depol(0) = 1.0;
    const PauliTransferMatrix li = design.linear_inversion(record_vector(record));
    const ChoiMatrix projected(nq, psd_projection(choi_of_ptm(li).matrix()));
    RVector start = 0.5 * (depol + ptm_of_choi(projected).vec());
    if (tp) {
        for (int j = 0; j < n2; ++j) start(static_cast<long>(n2) * j) = j == 0 ? 1.0 : 0.0;
        Eigen::LLT<CMatrix> llt(choi_of_ptm(PauliTransferMatrix::from_vec(nq, start)).matrix());
        if (llt.info() != Eigen::Success) return depol;
    }
    return start;
}

}  // namespace

MleResult mle_reconstruct(const MeasurementRecord& record, const QptDesign& design,
                          const ReconstructionOptions& options) {
    design.require_full_rank();
    SdpProblem prob = build_qpt_problem(record, design, options);
    const int nq = design.n_qubits();

    if (options.exact_when_interior) {
        SdpSolution ls = solve_unconstrained(prob);
        if (ls.report.min_choi_eigenvalue >= -1e-10 && ls.report.status == SolverStatus::optimal) {
            ls.report.method = options.solver;
            return {PauliTransferMatrix::from_vec(nq, ls.parameters()), ls.report, options.tp_constraint};
        }
    }
    prob.start = warm_start(record, design, options.tp_constraint);
    const SdpSolution sol = options.solver == SolverMethod::interior_point
                                ? solve_sdp(prob, options.solver_options)
                                : solve_projected_gradient(prob, options.solver_options);
    return {PauliTransferMatrix::from_vec(nq, sol.parameters()), sol.report, options.tp_constraint};
}

MleResult mle_reconstruct(const MeasurementRecord& record, const GateSet& gates, const MeasurementOperator& m,
                          const ReconstructionOptions& options) {
    const QptDesign design(gates, m);
    return mle_reconstruct(record, design, options);
}

namespace {

// Euclidean projection onto {x >= 0, sum x = 1}.
RVector simplex_projection(const RVector& v) {
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (size_t k = 0; k < u.size(); ++k) {
        cumulative += u[k];
        const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    return (v.array() - theta).cwiseMax(0.0);
}

}  // namespace

Operator state_mle(const PauliVector& expectations, const RVector& variances) {
    const int n2 = 1 << (2 * expectations.n_qubits);
    if (expectations.n_qubits < 1 || expectations.components.size() != n2) {
        throw DomainError("state_mle: need a complete set of Pauli expectations");
    }
    if (variances.size() != 0) {
        if (variances.size() != n2) throw DomainError("state_mle: need one variance per Pauli expectation");
        if (!(variances.array() >= 0.0).all()) throw DomainError("state_mle: variances must be non-negative");
    }
    const Operator raw = operator_of(expectations);
    const HermitianEig e = hermitian_eig(raw);
    const RVector lambda = simplex_projection(e.values);
    CMatrix rho = e.vectors * lambda.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return Operator::density_matrix(rho);
}

}  // namespace qpt
