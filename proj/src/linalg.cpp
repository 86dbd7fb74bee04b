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

#include "qpt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpt/numeric_policy.hpp"

namespace qpt {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm2(const CMatrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

// One complex Jacobi rotation annihilating a(p, q). The phase of a(p, q) is
// absorbed into column q so the remaining 2x2 problem is real symmetric.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    const cplx phase = apq / mag;  // e^{i phi}
    const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx ph_conj = std::conj(phase);
    const Eigen::Index n = a.rows();
    // A <- A J with J = D G, D = diag(.., 1@p, e^{-i phi}@q, ..)
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q) * ph_conj;
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    // A <- J^dagger A
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k) * phase;
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q) * ph_conj;
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace

CMatrix HermitianEig::reconstruct() const {
    return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

HermitianEig hermitian_eig(const CMatrix& input, double hermiticity_tol) {
    if (input.rows() != input.cols()) throw DomainError("hermitian_eig: matrix is not square");
    const double scale = std::max(1.0, max_abs(input));
    if (max_abs(CMatrix(input - input.adjoint())) > hermiticity_tol * scale) {
        throw DomainError("hermitian_eig: matrix is not Hermitian");
    }
    const Eigen::Index n = input.rows();
    CMatrix a = 0.5 * (input + input.adjoint());
    CMatrix v = CMatrix::Identity(n, n);
    const double total = a.squaredNorm();
    const double target = total * static_cast<double>(n * n) * 1e-30;

    const double floor2 = total * 1e-36;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm2(a);
        if (off <= target || off == 0.0) break;
        int rotations = 0;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                // Entries below rounding level of their diagonal neighbours.
                const double geo = std::sqrt(std::abs(a(p, p).real()) * std::abs(a(q, q).real()));
                if (mag <= 1e-17 * geo || mag * mag <= floor2) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
                ++rotations;
            }
        }
        if (rotations == 0) break;
    }
    if (sweep == kMaxSweeps) throw ConvergenceError("hermitian_eig: Jacobi sweeps did not converge");

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
    HermitianEig out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]).real();
        CVector col = v.col(order[k]);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > 1e-12) {
                col *= std::conj(col(i)) / std::abs(col(i));
                col(i) = std::abs(col(i));
                break;
            }
        }
        out.vectors.col(k) = col;
    }
    return out;
}

HermitianEig hermitian_eig(const CMatrix& a) { return hermitian_eig(a, policy().hermiticity); }

CMatrix psd_projection(const CMatrix& a) {
    return hermitian_apply(hermitian_eig(a), [](double x) { return std::max(x, 0.0); });
}

CMatrix unitary_exp(const CMatrix& h, double theta) {
    const HermitianEig e = hermitian_eig(h);
    CVector phases(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) phases(i) = std::polar(1.0, -theta * e.values(i));
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

}  // namespace qpt
