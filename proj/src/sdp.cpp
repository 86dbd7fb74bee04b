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

#include "qpt/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpt/kernels.hpp"
#include "qpt/linalg.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RVector SdpProblem::objective_vector() const {
    RVector b = RVector::Zero(num_parameters() + 1);
    b(0) = 1.0;
    return b;
}

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::optimal: return "optimal";
        case SolverStatus::max_iter: return "max_iter";
        case SolverStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

std::string to_string(SolverMethod m) {
    return m == SolverMethod::interior_point ? "interior-point" : "projected-gradient";
}

SolverMethod solver_method_from_string(const std::string& s) {
    if (s == "interior-point") return SolverMethod::interior_point;
    if (s == "projected-gradient") return SolverMethod::projected_gradient;
    throw DomainError("unknown solver: " + s);
}

namespace {

// The problem after whitening by V^{-1/2} and flattening the PSD blocks.
struct Prepared {
    int p = 0;
    int k = 0;                 // PSD block dimension
    RMatrix a_white;           // V^{-1/2} A (column-major: columns are contiguous)
    RowMatrix a_rows;          // same, row-major for the gemv kernel
    RVector m_white;           // V^{-1/2} m
    RMatrix q;                 // A~^T A~
    RVector c;                 // A~^T m~
    double scale = 1.0;        // objective normalization p / Tr Q
    RowMatrix fflat;           // p x 2k^2: [Re F_k | Im F_k], column-major flattening
    CMatrix offset;            // F0
    std::vector<int> free_idx;
    std::vector<int> fixed_idx;
    RVector fixed_full;        // fixed values in place, zeros elsewhere

    RVector residual(const RVector& r) const {
        RVector out(a_rows.rows());
        kernels::active().gemv(a_rows.data(), a_rows.rows(), a_rows.cols(), r.data(), out.data());
        return out - m_white;
    }
    double raw_objective(const RVector& r) const {
        const RVector res = residual(r);
        return kernels::dot({res.data(), static_cast<size_t>(res.size())}, {res.data(), static_cast<size_t>(res.size())});
    }
    double objective(const RVector& r) const { return scale * raw_objective(r); }
    RVector full_gradient(const RVector& r) const {
        RVector qr(p);
        kernels::active().gemv(q.data(), p, p, r.data(), qr.data());  // Q is symmetric
        return 2.0 * scale * (qr - c);
    }
    CMatrix matrix_of(const RVector& r) const {
        const RVector v = fflat.transpose() * r;
        const long kk = static_cast<long>(k) * k;
        CMatrix x(k, k);
        for (long e = 0; e < kk; ++e) x.data()[e] = cplx(v(e), v(e + kk));
        return offset + x;
    }
    // (Re Tr[S F_j])_j
    RVector adjoint_of(const CMatrix& s) const {
        const long kk = static_cast<long>(k) * k;
        RVector flat(2 * kk);
        for (long e = 0; e < kk; ++e) {
            flat(e) = s.data()[e].real();
            flat(e + kk) = s.data()[e].imag();
        }
        RVector out(p);
        kernels::active().gemv(fflat.data(), p, fflat.cols(), flat.data(), out.data());
        return out;
    }
    RVector assemble(const RVector& z) const {
        RVector r = fixed_full;
        for (size_t i = 0; i < free_idx.size(); ++i) r(free_idx[i]) = z(static_cast<long>(i));
        return r;
    }
    RVector restrict_free(const RVector& r) const {
        RVector z(static_cast<long>(free_idx.size()));
        for (size_t i = 0; i < free_idx.size(); ++i) z(static_cast<long>(i)) = r(free_idx[i]);
        return z;
    }
};

Prepared prepare(const SdpProblem& prob) {
    Prepared P;
    P.p = prob.num_parameters();
    const long n = prob.design.rows();
    if (P.p < 1 || n < 1) throw DomainError("sdp: empty design");
    if (prob.data.size() != n) throw DomainError("sdp: data length does not match design rows");
    if (static_cast<int>(prob.blocks.size()) != P.p) throw DomainError("sdp: need one constraint block per parameter");
    P.k = static_cast<int>(prob.blocks.front().rows());
    for (const auto& b : prob.blocks) {
        if (b.rows() != P.k || b.cols() != P.k) throw DomainError("sdp: constraint blocks differ in shape");
        if (max_abs(CMatrix(b - b.adjoint())) > 1e-12) throw DomainError("sdp: constraint block is not Hermitian");
    }
    P.offset = prob.offset.size() == 0 ? CMatrix::Zero(P.k, P.k) : prob.offset;
    if (P.offset.rows() != P.k || P.offset.cols() != P.k) throw DomainError("sdp: offset block has the wrong shape");

    if (prob.covariance.size() != 0) {
        if (prob.covariance.rows() != n || prob.covariance.cols() != n) throw DomainError("sdp: covariance shape");
        if (max_abs(RMatrix(prob.covariance - prob.covariance.transpose())) > 1e-12 * max_abs(prob.covariance)) {
            throw DomainError("sdp: covariance is not symmetric");
        }
        Eigen::LLT<RMatrix> llt(prob.covariance);
        if (llt.info() != Eigen::Success) throw DomainError("sdp: covariance is not positive definite");
        P.a_white = llt.matrixL().solve(prob.design);
        P.m_white = llt.matrixL().solve(prob.data);
    } else {
        if (prob.variances.size() != n) throw DomainError("sdp: need one variance per measurement");
        P.a_white = prob.design;
        P.m_white = prob.data;
        for (long i = 0; i < n; ++i) {
            const double v = prob.variances(i);
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("sdp: covariance is not positive definite");
            const double w = 1.0 / std::sqrt(v);
            P.a_white.row(i) *= w;
            P.m_white(i) *= w;
        }
    }
    P.a_rows = P.a_white;
    P.q = RMatrix(P.p, P.p);
    kernels::active().gram(P.a_white.data(), P.p, n, P.q.data());
    P.c = P.a_white.transpose() * P.m_white;
    const double tr = P.q.trace();
    if (!(tr > 0.0)) throw DomainError("sdp: design has no information");
    P.scale = P.p / tr;

    const long kk = static_cast<long>(P.k) * P.k;
    P.fflat = RowMatrix(P.p, 2 * kk);
    for (int j = 0; j < P.p; ++j) {
        for (long e = 0; e < kk; ++e) {
            P.fflat(j, e) = prob.blocks[j].data()[e].real();
            P.fflat(j, e + kk) = prob.blocks[j].data()[e].imag();
        }
    }

    std::vector<bool> is_fixed(P.p, false);
    P.fixed_full = RVector::Zero(P.p);
    for (const auto& [idx, val] : prob.fixed) {
        if (idx < 0 || idx >= P.p) throw DomainError("sdp: fixed index out of range");
        is_fixed[idx] = true;
        P.fixed_full(idx) = val;
    }
    for (int j = 0; j < P.p; ++j) (is_fixed[j] ? P.fixed_idx : P.free_idx).push_back(j);
    if (P.free_idx.empty()) throw DomainError("sdp: every parameter is fixed");
    return P;
}

bool positive_definite(const CMatrix& x) {
    Eigen::LLT<CMatrix> llt(x);
    return llt.info() == Eigen::Success;
}

double log_det_pd(const CMatrix& x) {
    Eigen::LLT<CMatrix> llt(x);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) s += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * s;
}

SolverReport finish_report(const Prepared& P, const RVector& r, SolverMethod method) {
    SolverReport rep;
    rep.method = method;
    rep.primal_objective = P.raw_objective(r);
    rep.min_choi_eigenvalue = hermitian_eig(P.matrix_of(r), 1e-9).min();
    return rep;
}

}  // namespace

double sdp_objective(const SdpProblem& problem, const RVector& r) { return prepare(problem).raw_objective(r); }

RVector sdp_objective_gradient(const SdpProblem& problem, const RVector& r) {
    const Prepared P = prepare(problem);
    return P.full_gradient(r) / P.scale;
}

CMatrix sdp_matrix(const SdpProblem& problem, const RVector& r) { return prepare(problem).matrix_of(r); }

SdpSolution solve_unconstrained(const SdpProblem& problem) {
    const Prepared P = prepare(problem);
    const RMatrix qff = P.q(P.free_idx, P.free_idx);
    RVector cf = P.c(P.free_idx);
    if (!P.fixed_idx.empty()) cf -= P.q(P.free_idx, P.fixed_idx) * P.fixed_full(P.fixed_idx);
    Eigen::LLT<RMatrix> llt(qff);
    if (llt.info() != Eigen::Success) throw RankError("sdp: design does not determine the free parameters");
    const RVector z = llt.solve(cf);
    const RVector r = P.assemble(z);
    SdpSolution sol;
    sol.report = finish_report(P, r, SolverMethod::interior_point);
    sol.report.dual_objective = sol.report.primal_objective;
    sol.report.kkt_residual = RVector(2.0 * P.scale * (qff * z - cf)).cwiseAbs().maxCoeff();
    sol.report.status = sol.report.min_choi_eigenvalue >= -policy().psd_slack &&
                                sol.report.kkt_residual <= policy().kkt_residual
                            ? SolverStatus::optimal
                            : SolverStatus::infeasible;
    sol.y = RVector(P.p + 1);
    sol.y << sol.report.primal_objective, r;
    return sol;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& opts) {
    const Prepared P = prepare(problem);
    const int pf = static_cast<int>(P.free_idx.size());
    const long kk = static_cast<long>(P.k) * P.k;

    RVector r0 = problem.start.value_or(RVector::Zero(P.p));
    if (r0.size() != P.p) throw DomainError("sdp: start has the wrong length");
    for (int j : P.fixed_idx) r0(j) = P.fixed_full(j);

    SdpSolution sol;
    if (!positive_definite(P.matrix_of(r0))) {
        sol.report = finish_report(P, r0, SolverMethod::interior_point);
        sol.report.status = SolverStatus::infeasible;
        sol.y = RVector(P.p + 1);
        sol.y << sol.report.primal_objective, r0;
        return sol;
    }

    // Reduced quadratic model over the free coordinates:
    // f(z) = s (z^T Qff z - 2 cf^T z + const)
    const RMatrix qff = P.q(P.free_idx, P.free_idx);
    RVector cf = P.c(P.free_idx);
    if (!P.fixed_idx.empty()) {
        cf -= P.q(P.free_idx, P.fixed_idx) * P.fixed_full(P.fixed_idx);
    }
    Eigen::LLT<RMatrix> qff_llt(qff);
    const bool have_dual = qff_llt.info() == Eigen::Success;
    RowMatrix ff(pf, P.fflat.cols());
    for (int i = 0; i < pf; ++i) ff.row(i) = P.fflat.row(P.free_idx[i]);

    auto adjoint_free = [&](const CMatrix& s) {
        RVector flat(2 * kk);
        for (long e = 0; e < kk; ++e) {
            flat(e) = s.data()[e].real();
            flat(e + kk) = s.data()[e].imag();
        }
        RVector out(pf);
        kernels::active().gemv(ff.data(), pf, ff.cols(), flat.data(), out.data());
        return out;
    };
    auto delta_matrix = [&](const RVector& dz) {
        const RVector v = ff.transpose() * dz;
        CMatrix x(P.k, P.k);
        for (long e = 0; e < kk; ++e) x.data()[e] = cplx(v(e), v(e + kk));
        return x;
    };
    auto f_of = [&](const RVector& z) { return P.objective(P.assemble(z)); };
    auto grad_of = [&](const RVector& z) {
        return RVector(2.0 * P.scale * (qff * z - cf));
    };

    // Lagrangian lower bound min_z f(z) - <S, F(z)> for S >= 0.
    auto bound_of = [&](const CMatrix& s) {
        const RVector zs = qff_llt.solve(RVector(cf + adjoint_free(s) / (2.0 * P.scale)));
        const RVector rs = P.assemble(zs);
        const double inner = (s.cwiseProduct(P.matrix_of(rs).conjugate())).sum().real();
        return P.objective(rs) - inner;
    };
    // Dual candidate supported on the near-null space N of X: S = N Sigma N^dagger
    // with Sigma fitted so that adj(S) matches the objective gradient in the
    // Q^-1 metric, then clipped to Sigma >= 0.
    auto slackness_dual = [&](const HermitianEig& ex, const RVector& grad, double cutoff) {
        std::vector<Eigen::Index> active;
        for (Eigen::Index i = 0; i < ex.values.size(); ++i)
            if (ex.values(i) < cutoff) active.push_back(i);
        const int m = static_cast<int>(active.size());
        if (m == 0) return CMatrix();
        CMatrix nsp(P.k, m);
        for (int i = 0; i < m; ++i) nsp.col(i) = ex.vectors.col(active[i]);
        std::vector<CMatrix> basis;
        const double h = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                CMatrix e = CMatrix::Zero(m, m);
                if (i == j) {
                    e(i, i) = 1.0;
                    basis.push_back(e);
                    continue;
                }
                e(i, j) = e(j, i) = h;
                basis.push_back(e);
                e(i, j) = cplx(0.0, h);
                e(j, i) = cplx(0.0, -h);
                basis.push_back(e);
            }
        }
        RMatrix b(pf, static_cast<long>(basis.size()));
        for (size_t t = 0; t < basis.size(); ++t) b.col(static_cast<long>(t)) = adjoint_free(nsp * basis[t] * nsp.adjoint());
        const RMatrix bt = qff_llt.matrixL().solve(b);
        const RVector gt = qff_llt.matrixL().solve(grad);
        const RVector sigma = bt.colPivHouseholderQr().solve(gt);
        CMatrix core = CMatrix::Zero(m, m);
        for (size_t t = 0; t < basis.size(); ++t) core += sigma(static_cast<long>(t)) * basis[t];
        core = psd_projection(CMatrix(0.5 * (core + core.adjoint())));
        return CMatrix(nsp * core * nsp.adjoint());
    };

    RVector z = P.restrict_free(r0);
    double mu = std::max(f_of(z), 1e-6) / P.k;
    int iter = 0;
    double dual = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;

    RowMatrix hess_rows(pf, 2 * kk);
    RMatrix gbar(pf, pf);

    for (int pass = 0; pass < 4 * opts.max_iterations + 200; ++pass) {
        const CMatrix x = P.matrix_of(P.assemble(z));
        const HermitianEig ex = hermitian_eig(x, 1e-9);
        const CMatrix x_inv = hermitian_apply(ex, [](double l) { return 1.0 / l; });
        const CMatrix y_half = hermitian_apply(ex, [](double l) { return 1.0 / std::sqrt(l); });
        const RVector a = adjoint_free(x_inv);
        const RVector g = grad_of(z) - mu * a;
        const double fz = f_of(z);

        // Lower bound from S = mu X^-1 >= 0: min over z of f(z) - <S, F(z)>.
        if (have_dual) dual = std::max(dual, bound_of(CMatrix(mu * x_inv)));
        gap = fz - dual;
        if (have_dual && (gap <= 1e-6 || mu * P.k <= 1e-7)) {
            const CMatrix s = slackness_dual(ex, grad_of(z), std::sqrt(mu));
            if (s.size() != 0) dual = std::max(dual, bound_of(s));
            gap = fz - dual;
        }
        if (gap <= opts.gap_tolerance) {
            converged = true;
            break;
        }

        // Barrier Hessian: <Y F_i Y, Y F_j Y>.
        for (int i = 0; i < pf; ++i) {
            const CMatrix& fi = problem.blocks[P.free_idx[i]];
            const CMatrix t = y_half * fi * y_half;
            for (long e = 0; e < kk; ++e) {
                hess_rows(i, e) = t.data()[e].real();
                hess_rows(i, e + kk) = t.data()[e].imag();
            }
        }
        kernels::active().gram(hess_rows.data(), pf, 2 * kk, gbar.data());
        RMatrix h = 2.0 * P.scale * qff + mu * gbar;
        Eigen::LLT<RMatrix> llt(h);
        if (llt.info() != Eigen::Success) {
            h.diagonal().array() += 1e-12 * h.diagonal().cwiseAbs().maxCoeff();
            llt.compute(h);
        }
        const RVector dz = llt.solve(-g);
        const double dec2 = -g.dot(dz);
        // Newton decrement of f / mu - log det X, which is self-concordant.
        if (dec2 / mu <= 1e-2) {
            mu *= 0.1;
            continue;
        }
        if (iter >= opts.max_iterations) break;

        // Largest step keeping X + alpha dX positive definite.
        const CMatrix m = y_half * delta_matrix(dz) * y_half;
        const double lmin = hermitian_eig(CMatrix(0.5 * (m + m.adjoint())), 1e-8).min();
        double alpha = lmin < 0.0 ? std::min(1.0, 0.99 / -lmin) : 1.0;
        const double phi0 = fz - mu * ex.values.array().log().sum();
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            const RVector zn = z + alpha * dz;
            const double ld = log_det_pd(P.matrix_of(P.assemble(zn)));
            if (std::isfinite(ld) && f_of(zn) - mu * ld <= phi0 - 0.25 * alpha * dec2) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        ++iter;
        if (!accepted) break;
        z += alpha * dz;
    }

    const RVector r = P.assemble(z);
    sol.report = finish_report(P, r, SolverMethod::interior_point);
    sol.report.iterations = iter;
    sol.report.dual_objective = dual / P.scale;
    sol.report.kkt_residual = std::max(gap, 0.0);
    sol.report.status = converged && sol.report.kkt_residual <= policy().kkt_residual &&
                                sol.report.min_choi_eigenvalue >= -policy().psd_slack
                            ? SolverStatus::optimal
                            : SolverStatus::max_iter;
    sol.y = RVector(P.p + 1);
    sol.y << sol.report.primal_objective, r;
    return sol;
}

SdpSolution solve_projected_gradient(const SdpProblem& problem, const SolverOptions& opts) {
    const Prepared P = prepare(problem);
    const long kk = static_cast<long>(P.k) * P.k;
    if (max_abs(P.offset) != 0.0 || P.p != kk) {
        throw DomainError("projected gradient needs a linear, bijective constraint map");
    }
    RMatrix gram(P.p, P.p);
    kernels::active().gram(P.fflat.data(), P.p, P.fflat.cols(), gram.data());
    const double alpha2 = gram(0, 0);
    if (max_abs(RMatrix(gram - alpha2 * RMatrix::Identity(P.p, P.p))) > 1e-10 * alpha2) {
        throw DomainError("projected gradient needs an isometric constraint map");
    }

    // Euclidean projection onto {r : F(r) >= 0}: F is alpha * isometry, so
    // clipping the spectrum of F(r) and mapping back is exact.
    auto clip = [&](const RVector& r) {
        const CMatrix x = psd_projection(P.matrix_of(r));
        return RVector(P.adjoint_of(x) / alpha2);
    };
    auto fix = [&](RVector r) {
        for (int j : P.fixed_idx) r(j) = P.fixed_full(j);
        return r;
    };
    // Dykstra's alternating projections when equality constraints are present.
    auto project = [&](const RVector& r) {
        if (P.fixed_idx.empty()) return clip(r);
        RVector x = r, pinc = RVector::Zero(P.p), qinc = RVector::Zero(P.p);
        for (int it = 0; it < 2000; ++it) {
            const RVector y = fix(x + pinc);
            pinc = x + pinc - y;
            const RVector xn = clip(y + qinc);
            qinc = y + qinc - xn;
            const double change = (xn - x).cwiseAbs().maxCoeff();
            x = xn;
            if (change < 1e-15 && (x - y).cwiseAbs().maxCoeff() < 1e-13) break;
        }
        return x;
    };

    // Lipschitz constant of the normalized gradient, by power iteration.
    RVector v = RVector::Ones(P.p).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 300; ++it) {
        RVector w(P.p);
        kernels::active().gemv(P.q.data(), P.p, P.p, v.data(), w.data());
        const double nl = w.norm();
        if (nl == 0.0) break;
        v = w / nl;
        if (std::abs(nl - lambda) <= 1e-12 * nl) {
            lambda = nl;
            break;
        }
        lambda = nl;
    }
    const double lip = 2.0 * P.scale * lambda * 1.02;

    RVector x = project(fix(problem.start.value_or(RVector::Zero(P.p))));
    RVector y = x;
    double t = 1.0;
    double residual = std::numeric_limits<double>::infinity();
    int iter = 0;
    bool converged = false;
    for (; iter < opts.pg_max_iterations; ++iter) {
        const RVector g = P.full_gradient(y);
        const RVector xn = project(RVector(y - g / lip));
        residual = lip * (y - xn).cwiseAbs().maxCoeff();
        if (residual <= opts.pg_tolerance) {
            x = xn;
            converged = true;
            ++iter;
            break;
        }
        if ((y - xn).dot(xn - x) > 0.0) {
            t = 1.0;
            y = xn;
        } else {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            y = xn + ((t - 1.0) / tn) * (xn - x);
            t = tn;
        }
        x = xn;
    }

    SdpSolution sol;
    sol.report = finish_report(P, x, SolverMethod::projected_gradient);
    sol.report.iterations = iter;
    sol.report.dual_objective = std::numeric_limits<double>::quiet_NaN();
    sol.report.kkt_residual = residual;
    sol.report.status = converged && sol.report.min_choi_eigenvalue >= -policy().psd_slack ? SolverStatus::optimal
                                                                                            : SolverStatus::max_iter;
    sol.y = RVector(P.p + 1);
    sol.y << sol.report.primal_objective, x;
    return sol;
}

}  // namespace qpt
