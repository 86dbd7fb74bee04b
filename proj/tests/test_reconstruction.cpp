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

#include <cmath>
#include <limits>

#include "qpt/gates.hpp"
#include "qpt/linalg.hpp"
#include "qpt/metrics.hpp"
#include "qpt/numeric_policy.hpp"
#include "qpt/rng.hpp"
#include "reference_values.hpp"
#include "qpt_fixtures.hpp"

namespace qpt {
namespace {

using testing::max_diff;

MeasurementRecord noiseless_record(const PauliTransferMatrix& truth, int n_qubits = 2) {
    const GateSet g = ideal_gateset(n_qubits);
    const MeasurementOperator m =
        n_qubits == 2 ? MeasurementOperator::calibrated_two_qubit() : testing::one_qubit_detector();
    return simulate_record(truth, g, m, 1, RVector::Zero(g.size()));
}

class MenuGate : public ::testing::TestWithParam<int> {};

TEST_P(MenuGate, NoiselessRecordIsRecoveredExactly) {
    const NamedGate& gate = process_menu()[GetParam()];
    const PauliTransferMatrix truth = ptm_of_unitary(gate.unitary);
    const MeasurementRecord rec = noiseless_record(truth);
    const auto& design = testing::calibrated_design();
    const PauliTransferMatrix li = design.linear_inversion(record_vector(rec));
    EXPECT_LE(max_diff(li.matrix(), truth.matrix()), 1e-8) << gate.name;
    const MleResult mle = mle_reconstruct(rec, design);
    EXPECT_EQ(mle.report.status, SolverStatus::optimal);
    EXPECT_LE(max_diff(mle.ptm.matrix(), truth.matrix()), 1e-6) << gate.name;
    EXPECT_NEAR(process_fidelity(truth, mle.ptm), 1.0, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(AllGates, MenuGate, ::testing::Range(0, 12));

TEST(LinearInversion, XQuarterPiExample) {
    const PauliTransferMatrix truth = ptm_of_unitary(gate_unitary("Xpi/4_I"));
    const PauliTransferMatrix li =
        linear_inversion(noiseless_record(truth), ideal_gateset(2), MeasurementOperator::calibrated_two_qubit());
    EXPECT_LE(max_diff(li.matrix(), truth.matrix()), 1e-8);
}

TEST(LinearInversion, RecoversMixedProcesses) {
    Rng rng(81);
    for (int t = 0; t < 5; ++t) {
        const PauliTransferMatrix truth = ptm_of_kraus(testing::random_channel(4, 3, rng));
        const PauliTransferMatrix li = testing::calibrated_design().linear_inversion(record_vector(noiseless_record(truth)));
        EXPECT_LE(max_diff(li.matrix(), truth.matrix()), 1e-8);
    }
}

TEST(LinearInversion, TruncatedDesignIsRankDeficient) {
    const QptDesign design(truncated_gateset(2), MeasurementOperator::calibrated_two_qubit());
    EXPECT_LT(design.rank(), 256);
    try {
        design.require_full_rank();
        FAIL() << "expected RankError";
    } catch (const RankError& e) {
        EXPECT_NE(std::string(e.what()).find("unidentified directions"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("R["), std::string::npos);
    }
    const GateSet g = truncated_gateset(2);
    const MeasurementRecord rec = simulate_record(PauliTransferMatrix::identity(2), g,
                                                  MeasurementOperator::calibrated_two_qubit(), 1, RVector::Zero(g.size()));
    EXPECT_THROW(mle_reconstruct(rec, g, MeasurementOperator::calibrated_two_qubit()), RankError);
}

TEST(LinearInversion, NoisyIdentityIsUsuallyNotCompletelyPositive) {
    const auto& design = testing::calibrated_design();
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    int negative = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MeasurementRecord rec =
            testing::noisy_record(design, PauliTransferMatrix::identity(2), m, seed);
        negative += negative_weight(choi_of_ptm(design.linear_inversion(record_vector(rec)))) < 0.0;
    }
    EXPECT_GE(negative, 19);
}

TEST(LinearInversion, FaultyPulsesMoveTheIdentity) {
    const GateSet ideal = ideal_gateset(2);
    const GateSet faulty = perturb_gateset_unitary(ideal, 0.1, 5, false);
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    const MeasurementRecord rec =
        simulate_record(PauliTransferMatrix::identity(2), faulty, m, 1, RVector::Zero(ideal.size()));
    const PauliTransferMatrix li = linear_inversion(rec, ideal, m);
    EXPECT_GT(max_diff(li.matrix(), PauliTransferMatrix::identity(2).matrix()), 1e-3);
}

TEST(Mle, CompletelyPositiveLinearInversionIsReturned) {
    // Interior truth with small noise: the unconstrained fit stays CP.
    Rng rng(82);
    const auto& design = testing::calibrated_design();
    const PauliTransferMatrix truth = depolarizing_ptm(2, 0.5);
    const MeasurementRecord rec =
        testing::noisy_record(design, truth, MeasurementOperator::calibrated_two_qubit(), 3, 0.1);
    const PauliTransferMatrix li = design.linear_inversion(record_vector(rec));
    ASSERT_GT(hermitian_eig(choi_of_ptm(li).matrix()).values.minCoeff(), 0.0);
    ReconstructionOptions opts;
    const MleResult fast = mle_reconstruct(rec, design, opts);
    EXPECT_LE(max_diff(fast.ptm.matrix(), li.matrix()), 1e-8);
    opts.exact_when_interior = false;
    const MleResult slow = mle_reconstruct(rec, design, opts);
    EXPECT_EQ(slow.report.status, SolverStatus::optimal);
    EXPECT_LE(max_diff(slow.ptm.matrix(), li.matrix()), 1e-4);
    EXPECT_NEAR(slow.report.primal_objective, fast.report.primal_objective, 1e-9 * 256);
}

TEST(Mle, NonCompletelyPositiveInversionIsRepaired) {
    const auto& design = testing::calibrated_design();
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    const MeasurementRecord rec = testing::noisy_record(design, ptm_of_unitary(cnot()), m, 11);
    const SdpProblem problem = build_qpt_problem(rec, design);
    const PauliTransferMatrix li = design.linear_inversion(record_vector(rec));
    ASSERT_LT(negative_weight(choi_of_ptm(li)), 0.0);
    const MleResult mle = mle_reconstruct(rec, design);
    ASSERT_EQ(mle.report.status, SolverStatus::optimal);
    EXPECT_GE(mle.report.min_choi_eigenvalue, -1e-8);
    EXPECT_LE(mle.report.kkt_residual, 1e-7);
    EXPECT_GT(mle.report.primal_objective, sdp_objective(problem, li.vec()));
    const PauliTransferMatrix projected = ptm_of_choi(ChoiMatrix(2, psd_projection(choi_of_ptm(li).matrix())));
    EXPECT_LE(mle.report.primal_objective, sdp_objective(problem, projected.vec()));
    EXPECT_NEAR(sdp_objective(problem, mle.ptm.vec()), mle.report.primal_objective,
                1e-10 * mle.report.primal_objective);
}

TEST(Mle, VarianceRescalingLeavesTheArgminUnchanged) {
    const auto& design = testing::one_qubit_design();
    MeasurementRecord rec = testing::noisy_record(design, ptm_of_unitary(rotation('X', M_PI / 2)),
                                                  testing::one_qubit_detector(), 5, 20.0);
    rec.variances = RVector::LinSpaced(rec.variances.size(), 1e-4, 4e-4);
    const MleResult a = mle_reconstruct(rec, design);
    ASSERT_NE(a.report.primal_objective, 0.0);
    for (double c : {1e-3, 7.0, 1e4}) {
        MeasurementRecord scaled = rec;
        scaled.variances *= c;
        const MleResult b = mle_reconstruct(scaled, design);
        EXPECT_EQ(b.report.status, SolverStatus::optimal);
        EXPECT_LE(max_diff(a.ptm.matrix(), b.ptm.matrix()), 1e-5) << c;
        EXPECT_NEAR(b.report.primal_objective * c, a.report.primal_objective, 1e-6 * a.report.primal_objective);
    }
}

TEST(Mle, TracePreservingModeFixesTheFirstRow) {
    const auto& design = testing::calibrated_design();
    const MeasurementRecord rec =
        testing::noisy_record(design, ptm_of_unitary(cnot()), MeasurementOperator::calibrated_two_qubit(), 12);
    ReconstructionOptions opts;
    opts.tp_constraint = true;
    const MleResult mle = mle_reconstruct(rec, design, opts);
    ASSERT_EQ(mle.report.status, SolverStatus::optimal);
    EXPECT_TRUE(mle.tp_constraint);
    EXPECT_EQ(mle.ptm(0, 0), 1.0);
    for (int j = 1; j < 16; ++j) EXPECT_EQ(mle.ptm(0, j), 0.0);
    EXPECT_TRUE(is_trace_preserving(choi_of_ptm(mle.ptm)).holds);
    EXPECT_GE(mle.report.min_choi_eigenvalue, -1e-8);
}

TEST(Mle, ProjectedGradientSolverAgrees) {
    const auto& design = testing::one_qubit_design();
    const MeasurementRecord rec = testing::noisy_record(design, ptm_of_unitary(rotation('Y', M_PI / 2)),
                                                        testing::one_qubit_detector(), 6, 20.0);
    ReconstructionOptions opts;
    const MleResult ip = mle_reconstruct(rec, design, opts);
    opts.solver = SolverMethod::projected_gradient;
    const MleResult pg = mle_reconstruct(rec, design, opts);
    EXPECT_EQ(pg.report.method, SolverMethod::projected_gradient);
    EXPECT_NEAR(ip.report.primal_objective, pg.report.primal_objective, 1e-6 * pg.report.primal_objective);
}

TEST(Mle, HardwareLikeScenarioMatchesReferenceFidelities) {
    const auto& design = testing::calibrated_design();
    const MeasurementOperator m = MeasurementOperator::calibrated_two_qubit();
    std::vector<GateSet> gatesets;
    for (std::uint64_t s = 1; s <= 3; ++s) gatesets.push_back(testing::hardware_like_gateset(s));
    double menu_mean = 0.0;
    for (std::size_t k = 0; k < process_menu().size(); ++k) {
        const NamedGate& g = process_menu()[k];
        const PauliTransferMatrix ideal = ptm_of_unitary(g.unitary);
        const PauliTransferMatrix truth = testing::hardware_like_process(g);
        double fg = 0.0;
        for (std::size_t s = 0; s < gatesets.size(); ++s) {
            const MleResult mle = mle_reconstruct(simulate_record(truth, gatesets[s], m, 100 + s), design);
            ASSERT_EQ(mle.report.status, SolverStatus::optimal);
            fg += gate_fidelity(process_fidelity(ideal, mle.ptm), 4) / gatesets.size();
        }
        EXPECT_NEAR(fg, testing::kGateReference[k].f_g, 0.01) << g.name;
        menu_mean += fg / process_menu().size();
    }
    EXPECT_GE(menu_mean, 0.95);
    EXPECT_LE(menu_mean, 0.97);
}

// Euclidean projection onto the probability simplex by enumerating supports.
RVector brute_force_simplex(const RVector& v) {
    const int n = static_cast<int>(v.size());
    RVector best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << n); ++mask) {
        double s = 0.0;
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) s += v(i), ++k;
        RVector x = RVector::Zero(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            x(i) = v(i) + (1.0 - s) / k;
            ok = ok && x(i) >= 0.0;
        }
        if (ok && (x - v).squaredNorm() < best_d) best_d = (x - v).squaredNorm(), best = x;
    }
    return best;
}

TEST(StateMle, PhysicalInputIsUnchanged) {
    Rng rng(83);
    for (int t = 0; t < 10; ++t) {
        const Operator rho = testing::random_density(4, rng);
        const Operator out = state_mle(pauli_vector_of(rho));
        EXPECT_LE(max_diff(out.matrix(), rho.matrix()), 1e-12);
    }
    const Operator mixed = Operator::density_matrix(CMatrix::Identity(4, 4) / 4.0);
    EXPECT_LE(max_diff(state_mle(pauli_vector_of(mixed)).matrix(), mixed.matrix()), 1e-15);
}

TEST(StateMle, ExampleSpectrumIsRedistributed) {
    CMatrix raw = CMatrix::Zero(4, 4);
    raw.diagonal() << 1.1, 0.1, -0.1, -0.1;
    const Operator out = state_mle(pauli_vector_of(Operator(raw)));
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    EXPECT_LE(max_diff(out.matrix(), expected), 1e-12);
}

TEST(StateMle, MatchesBruteForceSimplexProjection) {
    Rng rng(84);
    std::normal_distribution<double> n(0.0, 0.15);
    for (int t = 0; t < 50; ++t) {
        const Operator rho = testing::random_density(4, rng);
        CMatrix noisy = rho.matrix() + n(rng) * testing::random_hermitian(4, rng);
        noisy -= (noisy.trace() - 1.0) / 4.0 * CMatrix::Identity(4, 4);
        const Operator out = state_mle(pauli_vector_of(Operator(noisy)));
        const RVector got = testing::reference_eigenvalues(out.matrix());
        RVector want = brute_force_simplex(testing::reference_eigenvalues(noisy));
        std::sort(want.data(), want.data() + want.size());
        EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_GE(got.minCoeff(), -1e-12);
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    }
}

TEST(StateMle, RejectsIncompleteInput) {
    PauliVector p;
    p.n_qubits = 2;
    p.components = RVector::Zero(15);
    EXPECT_THROW(state_mle(p), DomainError);
    p.components = RVector::Zero(16);
    p.components(0) = 1.0;
    EXPECT_THROW(state_mle(p, RVector::Constant(16, -1.0)), DomainError);
}

}  // namespace
}  // namespace qpt
