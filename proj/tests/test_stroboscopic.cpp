// Copyright 2026 The nugrover Authors
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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nugrover/linalg2.hpp"
#include "nugrover/stroboscopic.hpp"
#include "oracles.hpp"

namespace nugrover {
namespace {

using testing::max_abs_diff;

SearchParams alpha_params(double N, StepSpec step, double alpha, double eps = 0.0) {
    const SearchParams probe = make_params(N, step, 0.0);
    return make_params(N, step, delta_theta_for_alpha(N, probe.delta_t, alpha), 0.0, eps);
}

TEST(BlockHamiltonians, QuarterOverlapExample) {
    const BlockHamiltonians b = subspace_basis_matrices(make_params(4, StepSpec::raw(1.0), 0.0));
    Matrix2c up;
    up << -1.25, -0.25 * std::sqrt(3.0), -0.25 * std::sqrt(3.0), -0.75;
    EXPECT_LT(max_abs_diff(b.h_up, up), 1e-15);
}

TEST(BlockHamiltonians, MatchOuterProductConstruction) {
    for (double N : {2.0, 16.0, 1e6, 1e18}) {
        for (double eps : {0.0, 0.3, -1e-7}) {
            const BlockHamiltonians b = subspace_basis_matrices(make_params(N, StepSpec::raw(1.0), 0.0, 0.0, eps));
            const testing::DirectBlocks d = testing::direct_blocks(N, eps);
            EXPECT_LT(max_abs_diff(b.h_up, d.up), 1e-15);
            EXPECT_LT(max_abs_diff(b.h_down, d.down), 1e-15);
            EXPECT_EQ(linalg2::hermiticity_defect(b.h_up), 0.0);
            EXPECT_EQ(linalg2::hermiticity_defect(b.h_down), 0.0);
            Matrix2c sum = Matrix2c::Zero();
            sum(0, 0) = -2.0 * (1.0 + eps);
            EXPECT_LT(max_abs_diff(b.h_up + b.h_down, sum), 1e-14);
        }
    }
}

TEST(BlockHamiltonians, UpSpectrumIsMinusOnePlusMinusX) {
    for (double N : {4.0, 16.0, 1e4}) {
        const BlockHamiltonians b = subspace_basis_matrices(make_params(N, StepSpec::raw(1.0), 0.0));
        const Eigen::SelfAdjointEigenSolver<Matrix2c> es(b.h_up);
        const double x = 1.0 / std::sqrt(N);
        EXPECT_NEAR(es.eigenvalues()(0), -1.0 - x, 1e-14);
        EXPECT_NEAR(es.eigenvalues()(1), -1.0 + x, 1e-14);
    }
}

TEST(BlockHamiltonians, VanishingOverlapLimit) {
    const BlockHamiltonians b = subspace_basis_matrices(make_params(1e30, StepSpec::raw(1.0), 0.0));
    EXPECT_LT(max_abs_diff(b.h_up, Matrix2c(-1.0 * Matrix2c::Identity())), 2e-15);
    EXPECT_THROW(make_params(1e300, StepSpec::raw(1.0), 0.0), ParameterError);
}

TEST(ExactStep, UnitaryWithoutRotation) {
    const SearchParams p = make_params(1e6, StepSpec::raw(2.7), 0.0);
    const StepOperator V = exact_step_operator(5, p);
    EXPECT_EQ(V.c_j, 1.0);
    EXPECT_EQ(V.s_j, 0.0);
    EXPECT_LT(std::abs(distance_from_unitarity(V.matrix)), 1e-12);
    const Matrix2c ref = testing::pade_expm_hermitian(testing::direct_blocks(1e6, 0.0).up, 2.7);
    EXPECT_LT(max_abs_diff(V.matrix, ref), 1e-13);
}

TEST(ExactStep, OrthogonalPostSelectionAnnihilates) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), kPi / 2);
    const StepOperator V = exact_step_operator(1, p);
    EXPECT_NEAR(V.c_j, 0.0, 1e-16);
    EXPECT_EQ(V.s_j, 0.0);
    EXPECT_LT(V.matrix.cwiseAbs().maxCoeff(), 1e-16);
}

TEST(ExactStep, RejectsStepZero) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), 0.01);
    EXPECT_THROW(exact_step_operator(0, p), std::invalid_argument);
}

TEST(ExactStep, ZenoIdentity) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dth(-0.05, 0.05);
    std::uniform_int_distribution<std::int64_t> jd(1, 100000);
    for (int i = 0; i < 500; ++i) {
        const SearchParams p = make_params(1e8, StepSpec::raw(1.0), dth(rng));
        const StepOperator V = exact_step_operator(jd(rng), p);
        EXPECT_NEAR(V.c_j + V.s_j, std::cos(p.delta_theta), 1e-12);
    }
}

TEST(ExactStep, MatchesPadeGeneralTheta0) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double N = 2.0 + 1e4 * u(rng);
        const double dt = 0.1 + 10 * u(rng);
        const double eps = u(rng) - 0.5;
        const SearchParams p = make_trajectory_params(N, StepSpec::raw(dt), 0.2 * (u(rng) - 0.5), 1.4 * (u(rng) - 0.5), eps);
        const std::int64_t j = 1 + static_cast<std::int64_t>(50 * u(rng));
        const testing::DirectBlocks d = testing::direct_blocks(N, eps);
        const Matrix2c ref = std::cos(p.theta(j - 1)) * std::cos(p.theta(j)) * testing::pade_expm_hermitian(d.up, dt) +
                             std::sin(p.theta(j - 1)) * std::sin(p.theta(j)) * testing::pade_expm_hermitian(d.down, dt);
        EXPECT_LT(max_abs_diff(exact_step_operator(j, p).matrix, ref), 1e-12);
    }
}

TEST(ApproxStep, NoRotationIsDiagonalPlusCoupling) {
    const SearchParams p = make_params(1e10, StepSpec::raw(0.7), 0.0);
    const StepOperator V = approx_step_operator(3, p);
    EXPECT_EQ(V.matrix(0, 0), cdouble(1.0, 0.0));
    EXPECT_EQ(V.matrix(1, 1), cdouble(1.0, 0.0));
    EXPECT_NEAR(std::abs(V.matrix(0, 1) - cdouble(0.0, p.x * 0.7)), 0.0, 1e-20);
}

TEST(ApproxStep, OffDiagonalAtPi) {
    const SearchParams p = make_params(1e10, StepSpec::raw(kPi), 3e-6 * kPi);
    const StepOperator V = approx_step_operator(100, p);
    const cdouble expected(0.0, V.c_j * p.x * kPi);
    EXPECT_LT(std::abs(V.matrix(0, 1) - expected), 1e-20);
    EXPECT_EQ(V.matrix(0, 1), V.matrix(1, 0));
}

TEST(ApproxStep, CloseToExactForSmallOverlap) {
    const double dt = kPi + 0.2;
    const SearchParams p = make_params(1e10, StepSpec::raw(dt), 3e-6 * dt);
    const Matrix2c exact = exact_step_operator(100, p).matrix;
    const Matrix2c approx = approx_step_operator(100, p).matrix;
    EXPECT_LT((linalg2::align_global_phase(approx, exact) - approx).norm(), 1e-6);
}

TEST(ApproxStep, NearPiMultipleIsNearlyScaledUnitary) {
    for (std::int64_t k : {1, 3, 8}) {
        const double dt = kPi * static_cast<double>(k);
        const SearchParams p = make_params(1e12, StepSpec::raw(dt), 0.01);
        const StepOperator V = exact_step_operator(7, p);
        const double bound = 1.0 - std::pow(std::cos(p.delta_theta), 2) + p.x * dt;
        EXPECT_LE(distance_from_unitarity(V.matrix), bound);
    }
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance_from_unitarity(Matrix2c::Identity()), 0.0);
    EXPECT_EQ(distance_from_unitarity(Matrix2c::Zero()), 1.0);
}

TEST(Process, UnitaryLimitMatchesClosedForm) {
    const SearchParams p = make_params(1e6, StepSpec::raw(kPi + 0.2), 0.0);
    const RunRecord r = run_protocol(p);
    ASSERT_EQ(static_cast<std::int64_t>(r.samples.size()), p.n_G + 1);
    for (const Sample& s : r.samples) {
        EXPECT_NEAR(s.fidelity, grover_fidelity_closed_form(s.t, p.N), 1e-9);
        EXPECT_NEAR(s.survival, 1.0, 1e-12);
    }
}

TEST(Process, UnitaryLimitDistanceStaysSmall) {
    const SearchParams p = make_params(1e12, StepSpec::raw(1.0), 0.0);
    const ProcessResult r = accumulate_process(p, 100000, Engine::exact);
    double worst = 0.0;
    for (const Sample& s : r.record.samples) {
        worst = std::max(worst, std::abs(s.distance));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Process, InitialSample) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), 0.01);
    const RunRecord r = accumulate_process(p, 3, Engine::exact).record;
    const Sample& s0 = r.samples.front();
    EXPECT_EQ(s0.n, 0);
    EXPECT_EQ(s0.t, 0.0);
    EXPECT_DOUBLE_EQ(s0.fidelity, 1.0 / 16);
    EXPECT_EQ(s0.survival, 1.0);
    EXPECT_EQ(s0.distance, 0.0);
    EXPECT_EQ(r.samples[2].t, 2.0);
}

TEST(Process, RejectsNonPositiveStepCount) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), 0.01);
    EXPECT_THROW(accumulate_process(p, 0, Engine::exact), std::invalid_argument);
}

TEST(Process, OrderingIsRightToLeft) {
    const SearchParams p = make_params(64, StepSpec::raw(kPi + 0.3), 0.05, 0.1, 0.2);
    for (std::int64_t n : {2, 5, 17}) {
        const Matrix2c prev = accumulate_process(p, n - 1, Engine::exact).V;
        const Matrix2c next = accumulate_process(p, n, Engine::exact).V;
        EXPECT_LT(max_abs_diff(next, exact_step_operator(n, p).matrix * prev), 1e-15);
    }
}

TEST(Process, SurvivalIsProductOfConditionalProbabilities) {
    const SearchParams p = make_params(256, StepSpec::raw(1.7), 0.02);
    const ProcessResult r = accumulate_process(p, 300, Engine::exact);
    Vector2c psi(p.x, std::sqrt(1 - p.x * p.x));
    double product = 1.0;
    for (std::int64_t n = 1; n <= 300; ++n) {
        Vector2c next = exact_step_operator(n, p).matrix * psi;
        product *= next.squaredNorm();
        psi = next.normalized();
        EXPECT_NEAR(r.record.samples[n].survival, product, 1e-10);
    }
    const Vector2c s(p.x, std::sqrt(1 - p.x * p.x));
    EXPECT_NEAR(r.record.final().survival, (r.V * s).squaredNorm(), 1e-15);
}

TEST(Process, MatchesPadeTrajectoryOracle) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), 0.01);
    const RunRecord r = accumulate_process(p, 200, Engine::exact).record;
    const testing::Trajectory ref = testing::pade_trajectory(p, 200);
    for (std::size_t n = 0; n < r.samples.size(); ++n) {
        EXPECT_NEAR(r.samples[n].fidelity, ref.fidelity[n], 1e-10);
        EXPECT_NEAR(r.samples[n].survival, ref.survival[n], 1e-10);
    }
}

TEST(Process, ReferenceScalingRunFrozen) {
    // Frozen from an independent numpy/scipy propagation.
    const SearchParams p = alpha_params(1e6, StepSpec::k_tau(1, 0.2), 0.3);
    const Sample& s = run_protocol(p).final();
    EXPECT_NEAR(s.fidelity, 0.9772396759974299, 1e-9);
    EXPECT_NEAR(s.survival, 0.27513709836361344, 1e-9);
}

TEST(Process, ExactAndApproxAgreeForSmallOverlapStep) {
    const SearchParams p = alpha_params(1e12, StepSpec::raw(1.0), 0.5);
    ASSERT_LE(p.x * p.delta_t, 1e-3);
    const double f_exact = accumulate_process(p, p.n_G, Engine::exact).record.final().fidelity;
    const double f_approx = accumulate_process(p, p.n_G, Engine::approx).record.final().fidelity;
    EXPECT_NEAR(f_exact, f_approx, 1e-4);
}

TEST(Process, UnderflowIsFlaggedAndFrozen) {
    // Post-selecting on a nearly orthogonal ancilla state every step.
    const SearchParams p = make_params(16, StepSpec::raw(1.0), kPi / 2);
    const RunRecord r = accumulate_process(p, 20, Engine::exact).record;
    EXPECT_TRUE(r.underflow);
    bool frozen = false;
    for (std::size_t n = 1; n < r.samples.size(); ++n) {
        frozen = frozen || r.samples[n].survival == 0.0;
        if (frozen) {
            EXPECT_EQ(r.samples[n].survival, 0.0);
        }
        EXPECT_FALSE(std::isnan(r.samples[n].fidelity));
    }
    EXPECT_EQ(r.final().survival, 0.0);
}

TEST(Process, CustomBlocksAreUsed) {
    const SearchParams p = make_params(16, StepSpec::raw(1.0), 0.0);
    BlockHamiltonians zero{Matrix2c::Zero(), Matrix2c::Zero()};
    const RunRecord r = accumulate_process(p, 10, Engine::exact, zero).record;
    EXPECT_DOUBLE_EQ(r.final().fidelity, 1.0 / 16);
}

TEST(Process, EngineNames) {
    EXPECT_EQ(to_string(Engine::exact), "exact");
    EXPECT_EQ(to_string(Engine::approx), "approx");
}

// Property: randomly drawn protocols keep f, P in [0, 1] and P non-increasing.
TEST(ProcessProperty, BoundedAndMonotone) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double N = std::exp(std::log(4.0) + u(rng) * std::log(1e9));
        const double dt = 0.05 + 12 * u(rng);
        if (grover_step_count(N, dt) < 1) {
            continue;
        }
        const SearchParams p = make_params(N, StepSpec::raw(dt), 0.1 * (u(rng) - 0.5), 0.0, 4 * (u(rng) - 0.5) / std::sqrt(N));
        const Engine e = (i % 2 == 0) ? Engine::exact : Engine::approx;
        const RunRecord r = accumulate_process(p, std::min<std::int64_t>(p.n_G + 5, 3000), e).record;
        for (std::size_t n = 0; n < r.samples.size(); ++n) {
            EXPECT_GE(r.samples[n].fidelity, 0.0);
            EXPECT_LE(r.samples[n].fidelity, 1.0 + 1e-12);
            if (e == Engine::exact) {
                EXPECT_LE(r.samples[n].survival, 1.0 + 1e-12);
                if (n > 0) {
                    EXPECT_LE(r.samples[n].survival, r.samples[n - 1].survival + 1e-12);
                }
            }
        }
    }
}

}  // namespace
}  // namespace nugrover
