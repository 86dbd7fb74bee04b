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

// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "qpt/linalg.hpp"
#include "qpt/metrics.hpp"
#include "qpt/sdp.hpp"
#include "reference_values.hpp"
#include "qpt_fixtures.hpp"

namespace qpt {
namespace {

using testing::max_diff;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome fidelity_formula() {
    const double fg = gate_fidelity(0.9384, 4);
    bool ok = std::abs(std::round(fg * 1e4) - 9507.0) < 0.5;
    int consistent = 0;
    for (const auto& row : testing::kGateReference) {
        const double lo = gate_fidelity(row.f_p - 5e-5, 4);
        const double hi = gate_fidelity(row.f_p + 5e-5, 4);
        consistent += lo <= row.f_g + 5e-5 && hi >= row.f_g - 5e-5;
    }
    ok = ok && consistent == 12;
    return {ok, fmt("F_g(0.9384) = %.6f; %.0f/12 rows consistent", fg, consistent)};
}

bool exact_signed_permutation(const RMatrix& r) {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        int row = 0, col = 0;
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            for (double v : {r(i, j), r(j, i)}) {
                const double a = std::abs(v);
                if (a > 1e-12 && std::abs(a - 1.0) > 1e-12) return false;
            }
            row += std::abs(r(i, j)) > 0.5;
            col += std::abs(r(j, i)) > 0.5;
        }
        if (row != 1 || col != 1) return false;
    }
    return true;
}

Outcome representations() {
    Rng rng(2);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + t % 2;
        const PauliTransferMatrix r = ptm_of_kraus(testing::random_channel(1 << n, 1 + t % 4, rng));
        worst = std::max(worst, max_diff(ptm_of_choi(choi_of_ptm(r)).matrix(), r.matrix()));
    }
    const RMatrix gx = ptm_of_unitary(rotation('X', M_PI / 2)).matrix();
    const RMatrix gy = ptm_of_unitary(rotation('Y', M_PI / 2)).matrix();
    std::map<std::vector<long>, RMatrix> group;
    std::vector<RMatrix> frontier{RMatrix::Identity(4, 4)};
    auto key = [](const RMatrix& m) {
        std::vector<long> k;
        for (Eigen::Index i = 0; i < m.size(); ++i) k.push_back(std::lround(m.data()[i]));
        return k;
    };
    group.emplace(key(frontier[0]), frontier[0]);
    while (!frontier.empty() && group.size() <= 100) {
        std::vector<RMatrix> next;
        for (const auto& g : frontier)
            for (const RMatrix* gen : {&gx, &gy}) {
                const RMatrix h = (*gen) * g;
                if (group.emplace(key(h), h).second) next.push_back(h);
            }
        frontier = std::move(next);
    }
    int cliffords = 0;
    for (const auto& [k, r] : group) cliffords += exact_signed_permutation(r);
    const bool cnot_ok = exact_signed_permutation(ptm_of_unitary(cnot()).matrix());
    const bool ok = worst <= 1e-10 && group.size() == 24 && cliffords == 24 && cnot_ok;
    return {ok, fmt("round trip %.2e; %.0f/%.0f Cliffords signed permutations; CNOT ", worst, cliffords,
                    static_cast<double>(group.size())) +
                    (cnot_ok ? "ok" : "bad")};
}

Outcome estimators() {
    const auto& design = testing::calibrated_design();
    const GateSet g = ideal_gateset(2);
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    double li_worst = 0.0, mle_worst = 0.0;
    for (const auto& gate : process_menu()) {
        const PauliTransferMatrix truth = ptm_of_unitary(gate.unitary);
        const MeasurementRecord rec = simulate_record(truth, g, m, 1, RVector::Zero(g.size()));
        li_worst = std::max(li_worst, max_diff(design.linear_inversion(record_vector(rec)).matrix(), truth.matrix()));
        mle_worst = std::max(mle_worst, max_diff(mle_reconstruct(rec, design).ptm.matrix(), truth.matrix()));
    }
    return {li_worst <= 1e-6 && mle_worst <= 1e-6,
            fmt("12 gates: linear %.2e, MLE %.2e", li_worst, mle_worst)};
}

Outcome solver_certification() {
    const auto& design = testing::calibrated_design();
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    Rng rng(4);
    double worst_lambda = 0.0, worst_rel = 0.0, worst_interior = 0.0;
    int interior = 0, optimal = 0;
    for (int t = 0; t < 50; ++t) {
        // Every fifth instance is well inside the CP cone with little noise.
        const bool inside = t % 5 == 0;
        const PauliTransferMatrix truth =
            inside ? compose(depolarizing_ptm(2, 0.5), testing::random_process(2, rng)) : testing::random_process(2, rng);
        const MeasurementRecord rec = testing::noisy_record(design, truth, m, 100 + t, inside ? 0.1 : 1.0);
        ReconstructionOptions opts;
        const MleResult ip = mle_reconstruct(rec, design, opts);
        opts.solver = SolverMethod::projected_gradient;
        const MleResult pg = mle_reconstruct(rec, design, opts);
        optimal += ip.report.status == SolverStatus::optimal;
        worst_lambda = std::min(worst_lambda, hermitian_eig(choi_of_ptm(ip.ptm).matrix()).values.minCoeff());
        worst_rel = std::max(worst_rel, std::abs(ip.report.primal_objective - pg.report.primal_objective) /
                                            pg.report.primal_objective);
        const PauliTransferMatrix li = design.linear_inversion(record_vector(rec));
        if (hermitian_eig(choi_of_ptm(li).matrix()).values.minCoeff() >= 0.0) {
            ++interior;
            worst_interior = std::max(worst_interior, max_diff(ip.ptm.matrix(), li.matrix()));
        }
    }
    const bool ok = optimal == 50 && worst_lambda >= -1e-8 && worst_rel <= 1e-6 && interior > 0 &&
                    worst_interior <= 1e-8;
    return {ok, fmt("lambda_min %.2e; objective vs oracle %.2e rel; %.0f CP inversions, max diff %.2e", worst_lambda,
                    worst_rel, interior, worst_interior)};
}

Outcome bootstrap_scale() {
    const NamedGate& g = named_gate("CNOT");
    const GateSet actual = testing::hardware_like_gateset(1);
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    const MeasurementRecord rec = simulate_record(testing::hardware_like_process(g), actual, m, 2024);
    BootstrapOptions b;
    b.replicates = 100;
    b.seed = 5;
    const BootstrapResult r = bootstrap(rec, testing::calibrated_design(), ptm_of_unitary(g.unitary), b);
    const bool ok = r.failed == 0 && r.delta_fg >= 1e-4 && r.delta_fg <= 1e-3;
    return {ok, fmt("CNOT delta F_g = %.2e over %.0f replicates (F_g %.4f)", r.delta_fg, r.replicates, r.reference_fg)};
}

Outcome table_two() {
    FaultyGatesetOptions o;
    o.trials = 10;
    o.seed = 7;
    bool ok = true;
    std::string detail;
    for (std::size_t k = 1; k < testing::kFaultyPulseReference.size(); ++k) {
        const auto& row = testing::kFaultyPulseReference[k];
        const FaultyGatesetRow r = faulty_gateset_point(epsilon_for_pulse_fidelity(row.pulse_fg, o), o);
        ok = ok && r.failed == 0 && std::abs(r.reconstructed_fg - row.identity_fg) <= 0.02 &&
             std::abs(r.distance - row.distance) <= 0.03;
        if (!detail.empty()) detail += "; ";
        detail += fmt("pulses %.4f: F_g %.4f, d %.4f", row.pulse_fg, r.reconstructed_fg, r.distance);
    }
    return {ok, detail};
}

Outcome coherence_budget() {
    const std::vector<double> e = decoherence_budget(testing::device_coherence(), {120.0, 190.0});
    const bool ok = std::abs(e[0] - 0.0162) <= 0.004 && std::abs(e[1] - 0.0255) <= 0.005;
    return {ok, fmt("120 ns %.4f, 190 ns %.4f", e[0], e[1])};
}

Outcome repeated_gate() {
    const auto pts = repeated_gate_experiment(ptm_of_unitary(cnot()), ptm_of_unitary(gate_unitary("X-pi/2_I")), 12);
    bool alternates = pts.size() == 13;
    for (const auto& p : pts) alternates = alternates && std::abs(p.concurrence - (p.n % 2)) <= 1e-10;

    std::vector<double> clean(13);
    for (int n = 0; n <= 12; ++n) clean[n] = 0.7 * std::pow(0.95, n) + 0.3;
    const DecayFit exact = fit_decay(clean);
    const double exact_err = std::max({std::abs(exact.a - 0.7), std::abs(exact.b - 0.3), std::abs(exact.f_g - 0.95)});

    std::normal_distribution<double> noise(0.0, 0.005);
    double bias = 0.0, ms = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        std::vector<double> y = clean;
        for (double& v : y) v += noise(rng);
        const double err = fit_decay(y).f_g - 0.95;
        bias += err / 100.0;
        ms += err * err / 100.0;
    }
    const bool ok = alternates && exact_err <= 1e-6 && std::abs(bias) <= 0.01 && std::sqrt(ms) <= 0.01;
    return {ok, std::string(alternates ? "alternates" : "alternation broken") +
                    fmt("; exact fit error %.1e; noisy bias %.4f, rms %.4f", exact_err, bias, std::sqrt(ms))};
}

Outcome properties() {
    Rng rng(9);
    // Orthogonality of unitary PTMs.
    double ortho = 0.0;
    for (int t = 0; t < 200; ++t) {
        const RMatrix r = ptm_of_unitary(testing::random_unitary(4, rng)).matrix();
        ortho = std::max(ortho, max_diff(RMatrix(r.transpose() * r), RMatrix::Identity(16, 16)));
    }
    // Gradient against central differences on a one-qubit problem.
    const auto& design = testing::one_qubit_design();
    const MeasurementRecord rec = testing::noisy_record(design, ptm_of_unitary(rotation('X', M_PI / 2)),
                                                        testing::one_qubit_detector(), 5, 20.0);
    const SdpProblem problem = build_qpt_problem(rec, design);
    RVector r = design.linear_inversion(record_vector(rec)).vec();
    const RVector grad = sdp_objective_gradient(problem, r);
    double fd = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        const double h = 1e-6;
        RVector a = r, b = r;
        a(k) += h;
        b(k) -= h;
        const double num = (sdp_objective(problem, a) - sdp_objective(problem, b)) / (2 * h);
        fd = std::max(fd, std::abs(num - grad(k)) / std::max(1.0, std::abs(grad(k))));
    }
    // Variance rescaling leaves the argmin unchanged.
    const MleResult base = mle_reconstruct(rec, design);
    MeasurementRecord scaled = rec;
    scaled.variances *= 7.0;
    const double rescale = max_diff(base.ptm.matrix(), mle_reconstruct(scaled, design).ptm.matrix());
    // Determinism.
    const MeasurementRecord again = testing::noisy_record(design, ptm_of_unitary(rotation('X', M_PI / 2)),
                                                          testing::one_qubit_detector(), 5, 20.0);
    const bool same = again.values == rec.values && mle_reconstruct(again, design).ptm.matrix() == base.ptm.matrix();
    const bool ok = ortho <= 1e-10 && fd <= 1e-5 && rescale <= 1e-5 && same;
    return {ok, fmt("orthogonality %.1e; gradient %.1e; rescaling %.1e; deterministic ", ortho, fd, rescale) +
                    (same ? "yes" : "no") + "; full suites run under ctest"};
}

}  // namespace
}  // namespace qpt

int main() {
    using Clock = std::chrono::steady_clock;
    const std::vector<std::pair<const char*, std::function<qpt::Outcome()>>> criteria = {
        {"fidelity formula", qpt::fidelity_formula},
        {"representation round trips", qpt::representations},
        {"noiseless estimators", qpt::estimators},
        {"solver certification", qpt::solver_certification},
        {"bootstrap scale", qpt::bootstrap_scale},
        {"faulty gate sets", qpt::table_two},
        {"decoherence budget", qpt::coherence_budget},
        {"repeated gate and fit", qpt::repeated_gate},
        {"property checks", qpt::properties},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = Clock::now();
        qpt::Outcome out{false, ""};
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        failures += !out.pass;
        std::printf("criterion %zu (%s): %s  %s  [%.1fs]\n", k + 1, criteria[k].first, out.pass ? "PASS" : "FAIL",
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
