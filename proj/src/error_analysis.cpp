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

#include "qpt/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpt/linalg.hpp"
#include "qpt/numeric_policy.hpp"
#include "qpt/rng.hpp"

namespace qpt {

namespace {

// Mean and sample standard deviation, summed in sorted order so the result
// does not depend on the order of the inputs.
// Shifted by the smallest value, so identical inputs give exactly zero spread.
std::pair<double, double> mean_and_std(std::vector<double> v) {
    if (v.empty()) return {0.0, 0.0};
    std::sort(v.begin(), v.end());
    const double shift = v.front();
    double s = 0.0;
    for (double x : v) s += x - shift;
    const double dmean = s / static_cast<double>(v.size());
    if (v.size() < 2) return {shift + dmean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - shift - dmean) * (x - shift - dmean);
    return {shift + dmean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

BootstrapResult bootstrap(const MeasurementRecord& record, const QptDesign& design, const PauliTransferMatrix& ideal,
                          const BootstrapOptions& options) {
    if (options.replicates < 2) throw DomainError("bootstrap needs at least 2 replicates");
    record.validate();
    const MleResult reference = mle_reconstruct(record, design, options.reconstruction);

    const int k = options.replicates;
    std::vector<double> fg(k, 0.0);
    std::vector<char> ok(k, 0);
    const int n_prep = static_cast<int>(record.values.rows());
    const int n_meas = static_cast<int>(record.values.cols());
    parallel_for(k, options.threads, [&](int rep) {
        MeasurementRecord r = record;
        Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(rep)));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < n_prep; ++i) {
            for (int j = 0; j < n_meas; ++j) {
                const double sigma = std::sqrt(record.variances(j) / static_cast<double>(record.shots));
                r.values(i, j) += sigma * normal(rng);
            }
        }
        try {
            const MleResult fit = mle_reconstruct(r, design, options.reconstruction);
            if (fit.report.status != SolverStatus::optimal) return;
            fg[rep] = gate_fidelity(ideal, fit.ptm);
            ok[rep] = 1;
        } catch (const ConvergenceError&) {
        }
    });

    BootstrapResult out;
    out.replicates = k;
    out.reference_fg = gate_fidelity(ideal, reference.ptm);
    for (int rep = 0; rep < k; ++rep) {
        if (ok[rep]) out.fidelities.push_back(fg[rep]);
        else ++out.failed;
    }
    const auto [mean, sd] = mean_and_std(out.fidelities);
    out.delta_fg = sd;
    out.mean_offset = out.fidelities.empty() ? 0.0 : mean - out.reference_fg;
    return out;
}

namespace {

GateSet trial_gateset(const GateSet& ideal, double epsilon, const FaultyGatesetOptions& o, int trial) {
    return perturb_gateset_unitary(ideal, epsilon, derive_seed(o.seed, static_cast<std::uint64_t>(trial)),
                                   o.independent_roles);
}

void check_options(const FaultyGatesetOptions& o) {
    if (o.trials < 1) throw DomainError("faulty gate-set study needs at least one trial");
    o.detector.validate();
}

}  // namespace

double mean_pulse_fidelity_at(double epsilon, const FaultyGatesetOptions& options) {
    check_options(options);
    const GateSet ideal = ideal_gateset(options.detector.n_qubits());
    double sum = 0.0;
    for (int t = 0; t < options.trials; ++t) sum += mean_pulse_fidelity(ideal, trial_gateset(ideal, epsilon, options, t));
    return sum / options.trials;
}

FaultyGatesetRow faulty_gateset_point(double epsilon, const FaultyGatesetOptions& options) {
    check_options(options);
    const int nq = options.detector.n_qubits();
    const GateSet ideal = ideal_gateset(nq);
    const QptDesign design(ideal, options.detector);
    const PauliTransferMatrix identity = PauliTransferMatrix::identity(nq);
    const ChoiMatrix identity_choi = choi_of_ptm(identity);

    struct Trial {
        bool ok = false;
        double pulse = 0.0, fg = 0.0;
        Distances dist{};
    };
    std::vector<Trial> trials(options.trials);
    parallel_for(options.trials, options.threads, [&](int t) {
        const GateSet gates = trial_gateset(ideal, epsilon, options, t);
        const RVector variances = options.shot_noise ? RVector::Constant(gates.size(), options.detector.variance)
                                                     : RVector::Zero(gates.size());
        const MeasurementRecord rec = simulate_record(
            identity, gates, options.detector, derive_seed(options.seed ^ 0x5eedull, static_cast<std::uint64_t>(t)),
            variances);
        trials[t].pulse = mean_pulse_fidelity(ideal, gates);
        try {
            const MleResult fit = mle_reconstruct(rec, design, options.reconstruction);
            if (fit.report.status != SolverStatus::optimal) return;
            trials[t].fg = gate_fidelity(identity, fit.ptm);
            trials[t].dist = all_distances(choi_of_ptm(fit.ptm), identity_choi);
            trials[t].ok = true;
        } catch (const ConvergenceError&) {
        }
    });

    FaultyGatesetRow row;
    row.epsilon = epsilon;
    row.trials = options.trials;
    int good = 0;
    for (const Trial& t : trials) {
        row.pulse_fg += t.pulse;
        if (!t.ok) {
            ++row.failed;
            continue;
        }
        ++good;
        row.reconstructed_fg += t.fg;
        row.distances.sqrt_trace_norm += t.dist.sqrt_trace_norm;
        row.distances.frobenius += t.dist.frobenius;
        row.distances.trace_norm += t.dist.trace_norm;
    }
    row.pulse_fg /= options.trials;
    if (good > 0) {
        row.reconstructed_fg /= good;
        row.distances.sqrt_trace_norm /= good;
        row.distances.frobenius /= good;
        row.distances.trace_norm /= good;
    }
    row.distance = 0.5 * row.distances.trace_norm;
    return row;
}

std::vector<FaultyGatesetRow> faulty_gateset_study(const std::vector<double>& epsilons,
                                                   const FaultyGatesetOptions& options) {
    std::vector<FaultyGatesetRow> rows;
    rows.reserve(epsilons.size());
    for (double e : epsilons) rows.push_back(faulty_gateset_point(e, options));
    return rows;
}

double epsilon_for_pulse_fidelity(double target, const FaultyGatesetOptions& options) {
    if (!(target > 0.0 && target <= 1.0)) throw DomainError("target pulse fidelity must lie in (0, 1]");
    if (target == 1.0) return 0.0;
    double lo = 0.0, hi = 0.5;
    while (mean_pulse_fidelity_at(hi, options) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) throw DomainError("target pulse fidelity is out of reach");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_pulse_fidelity_at(mid, options) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> decoherence_budget(const std::vector<Coherence>& qubits, const std::vector<double>& durations_ns) {
    if (qubits.empty()) throw DomainError("decoherence_budget needs at least one qubit");
    const int nq = static_cast<int>(qubits.size());
    const PauliTransferMatrix identity = PauliTransferMatrix::identity(nq);
    std::vector<double> out;
    for (double t : durations_ns) {
        if (!(t >= 0.0)) throw DomainError("sequence duration must be non-negative");
        out.push_back(1.0 - gate_fidelity(identity, decoherence_ptm(qubits, t)));
    }
    return out;
}

std::vector<RepeatedGatePoint> repeated_gate_experiment(const PauliTransferMatrix& gate,
                                                        const PauliTransferMatrix& prep, int n_max,
                                                        const PauliTransferMatrix& ideal_gate,
                                                        const PauliTransferMatrix& ideal_prep) {
    if (n_max < 1) throw DomainError("repeated_gate_experiment needs N_max >= 1");
    const int nq = gate.n_qubits();
    if (prep.n_qubits() != nq || ideal_gate.n_qubits() != nq || ideal_prep.n_qubits() != nq) {
        throw DomainError("repeated_gate_experiment: qubit counts differ");
    }
    const int d = 1 << nq;
    CMatrix ground = CMatrix::Zero(d, d);
    ground(0, 0) = 1.0;
    const PauliVector p0 = pauli_vector_of(Operator::density_matrix(ground));
    PauliVector actual = apply_ptm(prep, p0);
    PauliVector target = apply_ptm(ideal_prep, p0);

    std::vector<RepeatedGatePoint> out;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            actual = apply_ptm(gate, actual);
            target = apply_ptm(ideal_gate, target);
        }
        RepeatedGatePoint pt{n, operator_of(actual), 0.0, 0.0};
        const HermitianEig te = hermitian_eig(operator_of(target));
        const Operator target_pure = Operator::projector(te.vectors.col(0));
        pt.state_fidelity = state_fidelity(pt.state, target_pure);
        pt.concurrence = nq == 2 ? concurrence(pt.state) : 0.0;
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<RepeatedGatePoint> repeated_gate_experiment(const PauliTransferMatrix& gate,
                                                        const PauliTransferMatrix& prep, int n_max) {
    return repeated_gate_experiment(gate, prep, n_max, gate, prep);
}

namespace {

double decay_sse(const std::vector<int>& n, const std::vector<double>& y, double a, double b, double f) {
    double s = 0.0;
    for (size_t i = 0; i < n.size(); ++i) {
        const double r = a * std::pow(f, n[i]) + b - y[i];
        s += r * r;
    }
    return s;
}

}  // namespace

DecayFit fit_decay(const std::vector<int>& n, const std::vector<double>& y) {
    if (n.size() != y.size()) throw DomainError("fit_decay: N and fidelity lengths differ");
    if (n.size() < 4) throw DomainError("fit_decay needs at least 4 points");
    for (int v : n)
        if (v < 0) throw DomainError("fit_decay: N must be non-negative");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("fit_decay: fidelities must be finite");

    DecayFit fit;
    fit.fidelities = y;
    fit.b = 0.25;
    fit.a = 1.0 - fit.b;
    fit.f_g = 0.98;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    fit.degenerate = *hi - *lo <= 1e-12;

    double sse = decay_sse(n, y, fit.a, fit.b, fit.f_g);
    double lambda = -1.0;
    const int m = static_cast<int>(n.size());
    for (int it = 0; it < 1000; ++it) {
        fit.iterations = it + 1;
        Eigen::MatrixXd jac(m, 3);
        Eigen::VectorXd res(m);
        for (int i = 0; i < m; ++i) {
            const double fn = std::pow(fit.f_g, n[i]);
            res(i) = fit.a * fn + fit.b - y[i];
            jac(i, 0) = fn;
            jac(i, 1) = 1.0;
            jac(i, 2) = n[i] == 0 ? 0.0 : fit.a * n[i] * std::pow(fit.f_g, n[i] - 1);
        }
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * res;
        if (jtr.cwiseAbs().maxCoeff() <= 1e-15 || sse <= 1e-30) {
            fit.converged = true;
            break;
        }
        if (lambda < 0.0) lambda = 1e-3 * jtj.diagonal().maxCoeff();
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::Matrix3d lhs = jtj;
            lhs.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::Vector3d step = lhs.ldlt().solve(-jtr);
            const double na = fit.a + step(0);
            const double nb = fit.b + step(1);
            const double nf = std::clamp(fit.f_g + step(2), 1e-12, 1.0);
            const double nsse = decay_sse(n, y, na, nb, nf);
            if (nsse < sse) {
                const double drop = sse - nsse;
                fit.a = na;
                fit.b = nb;
                fit.f_g = nf;
                sse = nsse;
                lambda /= 3.0;
                accepted = true;
                if (drop <= 1e-15 * std::max(sse, 1e-300) || step.cwiseAbs().maxCoeff() <= 1e-15) fit.converged = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            fit.converged = true;
            break;
        }
        if (fit.converged) break;
    }
    fit.residual = sse;
    return fit;
}

DecayFit fit_decay(const std::vector<double>& fidelities) {
    std::vector<int> n(fidelities.size());
    std::iota(n.begin(), n.end(), 0);
    return fit_decay(n, fidelities);
}

}  // namespace qpt
