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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "reference_values.hpp"
#include "qpt/error_analysis.hpp"
#include "qpt/gates.hpp"
#include "qpt/numeric_policy.hpp"
#include "qpt_fixtures.hpp"

namespace qpt {
namespace {

double sample_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (v.size() - 1));
}

MeasurementRecord one_qubit_record(const PauliTransferMatrix& truth, long shots, std::uint64_t seed) {
    MeasurementOperator m = testing::one_qubit_detector();
    m.shots = shots;
    return simulate_record(truth, ideal_gateset(1), m, seed);
}

TEST(Bootstrap, ZeroVarianceGivesZeroSpread) {
    MeasurementRecord rec = one_qubit_record(ptm_of_unitary(rotation('X', M_PI / 2)), 10000, 1);
    rec.variances.setZero();
    BootstrapOptions o;
    o.replicates = 10;
    const BootstrapResult b = bootstrap(rec, testing::one_qubit_design(), ptm_of_unitary(rotation('X', M_PI / 2)), o);
    EXPECT_EQ(b.delta_fg, 0.0);
    EXPECT_EQ(b.mean_offset, 0.0);
    ASSERT_EQ(b.fidelities.size(), 10u);
    for (double f : b.fidelities) EXPECT_EQ(f, b.fidelities.front());
}

TEST(Bootstrap, ReproducibleAndThreadIndependent) {
    const PauliTransferMatrix x = ptm_of_unitary(rotation('X', M_PI));
    const MeasurementRecord rec = one_qubit_record(x, 10000, 2);
    BootstrapOptions o;
    o.replicates = 40;
    o.seed = 99;
    o.threads = 1;
    const BootstrapResult a = bootstrap(rec, testing::one_qubit_design(), x, o);
    o.threads = 3;
    const BootstrapResult b = bootstrap(rec, testing::one_qubit_design(), x, o);
    EXPECT_EQ(a.fidelities, b.fidelities);
    EXPECT_EQ(a.delta_fg, b.delta_fg);
    o.seed = 100;
    EXPECT_NE(bootstrap(rec, testing::one_qubit_design(), x, o).fidelities, a.fidelities);
}

TEST(Bootstrap, SpreadIsTheSampleStandardDeviationAndOrderFree) {
    const PauliTransferMatrix x = ptm_of_unitary(rotation('Y', M_PI / 2));
    BootstrapOptions o;
    o.replicates = 30;
    const BootstrapResult b = bootstrap(one_qubit_record(x, 10000, 3), testing::one_qubit_design(), x, o);
    ASSERT_EQ(b.failed, 0);
    EXPECT_GT(b.delta_fg, 0.0);
    EXPECT_NEAR(b.delta_fg, sample_std(b.fidelities), 1e-15);
    std::vector<double> shuffled = b.fidelities;
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_NEAR(sample_std(shuffled), b.delta_fg, 1e-15);
    }
    const double mean = std::accumulate(b.fidelities.begin(), b.fidelities.end(), 0.0) / b.fidelities.size();
    EXPECT_NEAR(b.mean_offset, mean - b.reference_fg, 1e-14);
}

TEST(Bootstrap, DoublingShotsScalesSpreadByInverseRootTwo) {
    // Interior process (LI shortcut) and a boundary one (active constraint).
    const PauliTransferMatrix interior = compose(depolarizing_ptm(1, 0.3), ptm_of_unitary(rotation('X', M_PI / 2)));
    const PauliTransferMatrix boundary = ptm_of_unitary(rotation('X', M_PI / 4));
    for (const PauliTransferMatrix* p : {&interior, &boundary}) {
        std::vector<double> spread;
        for (long shots : {10000L, 20000L, 40000L}) {
            BootstrapOptions o;
            o.replicates = 200;
            o.seed = static_cast<std::uint64_t>(shots);
            spread.push_back(bootstrap(one_qubit_record(*p, shots, 4), testing::one_qubit_design(), *p, o).delta_fg);
        }
        for (int i = 0; i + 1 < 3; ++i) EXPECT_NEAR(spread[i + 1] / spread[i], 1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
    }
}

TEST(Bootstrap, RejectsSingleReplicate) {
    BootstrapOptions o;
    o.replicates = 1;
    const PauliTransferMatrix x = PauliTransferMatrix::identity(1);
    EXPECT_THROW(bootstrap(one_qubit_record(x, 10000, 1), testing::one_qubit_design(), x, o), DomainError);
}

TEST(FaultyGateset, ZeroEpsilonIsPerfect) {
    FaultyGatesetOptions o;
    o.trials = 2;
    const FaultyGatesetRow row = faulty_gateset_point(0.0, o);
    EXPECT_NEAR(row.reconstructed_fg, 1.0, 1e-9);
    EXPECT_NEAR(row.pulse_fg, 1.0, 1e-12);
    EXPECT_NEAR(row.distance, 0.0, 1e-6);
    EXPECT_EQ(row.failed, 0);
}

TEST(FaultyGateset, InfidelityIsMonotoneInEpsilon) {
    FaultyGatesetOptions o;
    o.trials = 10;
    o.seed = 21;
    const auto rows = faulty_gateset_study({0.05, 0.1, 0.2}, o);
    ASSERT_EQ(rows.size(), 3u);
    for (int i = 0; i + 1 < 3; ++i) {
        EXPECT_GE(1.0 - rows[i + 1].reconstructed_fg, 1.0 - rows[i].reconstructed_fg);
        EXPECT_GT(rows[i].pulse_fg, rows[i + 1].pulse_fg);
        EXPECT_GT(rows[i + 1].distance, rows[i].distance);
    }
    for (const auto& r : rows) {
        EXPECT_EQ(r.trials, 10);
        EXPECT_NEAR(r.distance, 0.5 * r.distances.trace_norm, 1e-15);
    }
}

TEST(FaultyGateset, PulseInfidelityScalesQuadratically) {
    // 1 - F_g = d/(d+1) (eps/2)^2 Tr[H^2]/d for small eps.
    FaultyGatesetOptions o;
    o.trials = 10;
    for (double eps : {1e-3, 1e-2}) {
        const double inf = 1.0 - mean_pulse_fidelity_at(eps, o);
        EXPECT_NEAR(inf / (0.8 * eps * eps / 4.0), 1.0, 0.01) << eps;
    }
}

TEST(FaultyGateset, EpsilonSearchHitsTarget) {
    FaultyGatesetOptions o;
    o.trials = 4;
    o.seed = 3;
    for (double target : {0.9885, 0.9942, 0.9988}) {
        const double eps = epsilon_for_pulse_fidelity(target, o);
        EXPECT_NEAR(mean_pulse_fidelity_at(eps, o), target, 1e-9);
    }
    EXPECT_EQ(epsilon_for_pulse_fidelity(1.0, o), 0.0);
    EXPECT_THROW(epsilon_for_pulse_fidelity(1.5, o), DomainError);
}

TEST(FaultyGateset, ShotNoiseModeRuns) {
    FaultyGatesetOptions o;
    o.trials = 2;
    o.shot_noise = true;
    const FaultyGatesetRow row = faulty_gateset_point(0.0, o);
    EXPECT_LT(row.reconstructed_fg, 1.0);
    EXPECT_GT(row.reconstructed_fg, 0.99);
}

double decoherence_oracle(const std::vector<Coherence>& q, double t) {
    // Tr R of amplitude damping plus dephasing is prod (1 + 2 e^{-t/T2} + e^{-t/T1}).
    double tr = 1.0;
    for (const auto& c : q) tr *= 1.0 + 2.0 * std::exp(-t / (1000.0 * c.t2_us)) + std::exp(-t / (1000.0 * c.t1_us));
    const double d = std::pow(2.0, q.size());
    const double fp = tr / (d * d);
    return 1.0 - (d * fp + 1.0) / (d + 1.0);
}

TEST(DecoherenceBudget, MatchesClosedForm) {
    const auto& q = testing::device_coherence();
    const std::vector<double> t = {0.0, 40.0, 120.0, 190.0, 1000.0};
    const auto budget = decoherence_budget(q, t);
    for (size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(budget[i], decoherence_oracle(q, t[i]), 1e-13) << t[i];
    for (size_t i = 0; i + 1 < t.size(); ++i) EXPECT_LT(budget[i], budget[i + 1]);
}

TEST(DecoherenceBudget, ReferenceSequenceErrors) {
    const auto budget = decoherence_budget(testing::device_coherence(),
                                           {testing::kSingleQubitSequenceNs, testing::kCnotSequenceNs});
    EXPECT_NEAR(budget[0], testing::kSingleQubitSequenceError, 0.004);
    EXPECT_NEAR(budget[1], testing::kCnotSequenceError, 0.005);
}

TEST(DecoherenceBudget, InfiniteCoherenceIsErrorFree) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto budget = decoherence_budget({{inf, inf}, {inf, inf}}, {120.0, 190.0});
    EXPECT_EQ(budget[0], 0.0);
    EXPECT_EQ(budget[1], 0.0);
}

TEST(DecoherenceBudget, RejectsInvalidParameters) {
    EXPECT_THROW(decoherence_budget({{8.2, 7.1}}, {-1.0}), DomainError);
    EXPECT_THROW(decoherence_budget({{1.0, 3.0}}, {10.0}), DomainError);
    EXPECT_THROW(decoherence_budget({{-1.0, 1.0}}, {10.0}), DomainError);
    EXPECT_THROW(decoherence_budget({}, {10.0}), DomainError);
}

TEST(RepeatedGate, IdealCnotAlternates) {
    const auto c = ptm_of_unitary(cnot());
    const auto prep = ptm_of_unitary(gate_unitary("X-pi/2_I"));
    const auto pts = repeated_gate_experiment(c, prep, 12);
    ASSERT_EQ(pts.size(), 13u);
    for (const auto& p : pts) {
        EXPECT_NEAR(p.state_fidelity, 1.0, 1e-12) << p.n;
        EXPECT_NEAR(p.concurrence, p.n % 2 == 1 ? 1.0 : 0.0, 1e-10) << p.n;
    }
    // Odd N: (|00> + i|11>)/sqrt(2).
    const CMatrix& odd = pts[1].state.matrix();
    EXPECT_NEAR(odd(0, 0).real(), 0.5, 1e-12);
    EXPECT_NEAR(odd(3, 3).real(), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(odd(0, 3)), 0.5, 1e-12);
    const CMatrix& even = pts[2].state.matrix();
    EXPECT_NEAR(even(0, 0).real(), 0.5, 1e-12);
    EXPECT_NEAR(even(2, 2).real(), 0.5, 1e-12);
}

TEST(RepeatedGate, DepolarizedCnotDecaysGeometrically) {
    const auto c = ptm_of_unitary(cnot());
    const auto prep = ptm_of_unitary(gate_unitary("X-pi/2_I"));
    const double p = 0.03;
    const auto pts = repeated_gate_experiment(compose(depolarizing_ptm(2, p), c), prep, 12, c, prep);
    std::vector<double> fs;
    for (const auto& pt : pts) {
        EXPECT_NEAR(pt.state_fidelity, 0.25 + 0.75 * std::pow(1.0 - p, pt.n), 1e-12) << pt.n;
        fs.push_back(pt.state_fidelity);
    }
    for (size_t i = 0; i + 1 < fs.size(); ++i) EXPECT_LE(fs[i + 1], fs[i]);
    const DecayFit fit = fit_decay(fs);
    EXPECT_NEAR(fit.f_g, 1.0 - p, 1e-6);
    EXPECT_NEAR(fit.a, 0.75, 1e-6);
    EXPECT_NEAR(fit.b, 0.25, 1e-6);
}

TEST(RepeatedGate, CoherenceLimitedFidelityIsNonIncreasing) {
    const auto c = ptm_of_unitary(cnot());
    const auto prep = ptm_of_unitary(gate_unitary("X-pi/2_I"));
    const auto noisy = compose(decoherence_ptm(testing::device_coherence(), 110.0), c);
    const auto pts = repeated_gate_experiment(noisy, prep, 12, c, prep);
    for (size_t i = 0; i + 1 < pts.size(); ++i) EXPECT_LE(pts[i + 1].state_fidelity, pts[i].state_fidelity + 1e-12);
    EXPECT_THROW(repeated_gate_experiment(c, prep, 0), DomainError);
}

std::vector<double> planted(double a, double b, double f, int n_max) {
    std::vector<double> y;
    for (int n = 0; n <= n_max; ++n) y.push_back(a * std::pow(f, n) + b);
    return y;
}

TEST(FitDecay, RecoversPlantedParametersExactly) {
    const DecayFit fit = fit_decay(planted(0.7, 0.3, 0.95, 12));
    EXPECT_TRUE(fit.converged);
    EXPECT_FALSE(fit.degenerate);
    EXPECT_NEAR(fit.a, 0.7, 1e-6);
    EXPECT_NEAR(fit.b, 0.3, 1e-6);
    EXPECT_NEAR(fit.f_g, 0.95, 1e-6);
    EXPECT_LE(fit.residual, 1e-20);
    const DecayFit sparse = fit_decay({1, 3, 5, 8, 12}, {0.7 * 0.95 + 0.3, 0.7 * std::pow(0.95, 3) + 0.3,
                                                        0.7 * std::pow(0.95, 5) + 0.3, 0.7 * std::pow(0.95, 8) + 0.3,
                                                        0.7 * std::pow(0.95, 12) + 0.3});
    EXPECT_NEAR(sparse.f_g, 0.95, 1e-6);
}

TEST(FitDecay, NoisyDataWithinOnePercent) {
    // N = 0..12 as in the repeated-CNOT experiment. Single draws scatter by
    // about 0.008 rms, so the bound applies to the Monte Carlo statistics.
    const std::vector<double> clean = planted(0.7, 0.3, 0.95, 12);
    std::normal_distribution<double> noise(0.0, 0.005);
    double bias = 0.0, ms = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        std::vector<double> y = clean;
        for (double& v : y) v += noise(rng);
        const DecayFit fit = fit_decay(y);
        EXPECT_TRUE(fit.converged);
        bias += (fit.f_g - 0.95) / 100.0;
        ms += (fit.f_g - 0.95) * (fit.f_g - 0.95) / 100.0;
    }
    EXPECT_LE(std::abs(bias), 0.01);
    EXPECT_LE(std::sqrt(ms), 0.01);
}

TEST(FitDecay, FindsTheGlobalLeastSquaresMinimum) {
    // Oracle: dense grid in F_g with (A, B) solved in closed form at each node.
    std::normal_distribution<double> noise(0.0, 0.005);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        std::vector<double> y = planted(0.7, 0.3, 0.95, 12);
        for (double& v : y) v += noise(rng);
        double best = std::numeric_limits<double>::infinity(), best_f = 0.0;
        for (int k = 0; k <= 50000; ++k) {
            const double f = 0.5 + 0.5 * k / 50000.0;
            Eigen::MatrixXd x(13, 2);
            Eigen::VectorXd yy(13);
            for (int n = 0; n <= 12; ++n) x(n, 0) = std::pow(f, n), x(n, 1) = 1.0, yy(n) = y[n];
            const Eigen::Vector2d ab = x.colPivHouseholderQr().solve(yy);
            const double sse = (x * ab - yy).squaredNorm();
            if (sse < best) best = sse, best_f = f;
        }
        const DecayFit fit = fit_decay(y);
        EXPECT_NEAR(fit.f_g, best_f, 2e-5);
        EXPECT_LE(fit.residual, best * (1.0 + 1e-9));
    }
}

TEST(FitDecay, ConstantDataIsDegenerate) {
    const DecayFit fit = fit_decay(std::vector<double>(13, 1.0));
    EXPECT_TRUE(fit.degenerate);
    EXPECT_GT(fit.f_g, 0.0);
    EXPECT_LE(fit.f_g, 1.0);
}

TEST(FitDecay, ValidatesInput) {
    EXPECT_THROW(fit_decay(std::vector<double>{1.0, 0.9, 0.8}), DomainError);
    EXPECT_THROW(fit_decay({0, 1, 2, 3}, {1.0, 0.9, 0.8}), DomainError);
    EXPECT_THROW(fit_decay({0, 1, 2, -3}, {1.0, 0.9, 0.8, 0.7}), DomainError);
    EXPECT_THROW(fit_decay(std::vector<double>{1.0, 0.9, NAN, 0.8}), DomainError);
}

TEST(FitDecay, Deterministic) {
    std::vector<double> y = planted(0.6, 0.35, 0.97, 12);
    y[4] += 0.003;
    const DecayFit a = fit_decay(y), b = fit_decay(y);
    EXPECT_EQ(a.f_g, b.f_g);
    EXPECT_EQ(a.iterations, b.iterations);
}

}  // namespace
}  // namespace qpt
