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
#include "oracles.hpp"

namespace nugrover::linalg2 {
namespace {

using testing::max_abs_diff;

TEST(ExpmHermitian, MatchesPadeOnRandomInputs) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> td(-20.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        const Matrix2c H = testing::random_hermitian(rng, 1.0);
        const double t = td(rng);
        EXPECT_LT(max_abs_diff(expm_hermitian(H, t), testing::pade_expm_hermitian(H, t)), 1e-12);
    }
}

TEST(ExpmHermitian, SmallGapSeriesBranch) {
    Matrix2c H;
    H << 1.0, cdouble(1e-9, 2e-9), cdouble(1e-9, -2e-9), 1.0 + 1e-9;
    for (double t : {1e-3, 1.0, 50.0}) {
        const Matrix2c U = expm_hermitian(H, t);
        EXPECT_LT(max_abs_diff(U, testing::pade_expm_hermitian(H, t)), 1e-13);
        EXPECT_LT(max_abs_diff(U.adjoint() * U, Matrix2c::Identity()), 1e-14);
    }
}

TEST(ExpmHermitian, ScalarMatrixIsPhase) {
    const Matrix2c U = expm_hermitian(Matrix2c(-1.0 * Matrix2c::Identity()), kPi);
    EXPECT_LT(max_abs_diff(U, Matrix2c(-1.0 * Matrix2c::Identity())), 1e-15);
}

TEST(Expm, MatchesPadeOnRandomInputs) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const Matrix2c M = testing::random_matrix(rng, 1.5);
        const Matrix2c ref = testing::pade_expm(M);
        EXPECT_LT(max_abs_diff(expm(M), ref), 1e-12 * (1.0 + ref.cwiseAbs().maxCoeff()));
    }
}

TEST(Expm, NilpotentMatrix) {
    Matrix2c M;
    M << 0.0, 3.0, 0.0, 0.0;
    Matrix2c expected;
    expected << 1.0, 3.0, 0.0, 1.0;
    EXPECT_LT(max_abs_diff(expm(M), expected), 1e-15);
}

TEST(Logm, IdentityGivesZero) {
    const LogResult r = logm(Matrix2c::Identity());
    EXPECT_LT(r.value.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_TRUE(r.defective);
}

TEST(Logm, InvertsExpmOnPrincipalBranch) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 2000; ++i) {
        // Eigenvalue imaginary parts well inside (-pi, pi).
        const Matrix2c M = testing::random_matrix(rng, 0.6);
        const LogResult r = logm(testing::pade_expm(M));
        const Eigen::ComplexEigenSolver<Matrix2c> es(M);
        if ((es.eigenvalues().imag().cwiseAbs().array() > 3.0).any()) {
            continue;
        }
        EXPECT_LT(max_abs_diff(r.value, M), 1e-10);
    }
}

TEST(Logm, RoundTripThroughExpm) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Matrix2c V = testing::random_matrix(rng, 1.0);
        const LogResult r = logm(V);
        EXPECT_LT(max_abs_diff(testing::pade_expm(r.value), V), 1e-10);
    }
}

TEST(Logm, JordanBlock) {
    Matrix2c J;
    J << 2.0, 1.0, 0.0, 2.0;
    const LogResult r = logm(J);
    EXPECT_TRUE(r.defective);
    Matrix2c expected;
    expected << std::log(2.0), 0.5, 0.0, std::log(2.0);
    EXPECT_LT(max_abs_diff(r.value, expected), 1e-14);
}

TEST(Logm, NearlyDefectiveStaysAccurate) {
    Matrix2c J;
    J << cdouble(0.6, 0.8), 0.7, 1e-12, cdouble(0.6, 0.8);
    const LogResult r = logm(J);
    EXPECT_LT(max_abs_diff(testing::pade_expm(r.value), J), 1e-10);
}

TEST(Logm, SingularThrows) {
    Matrix2c M;
    M << 1.0, 2.0, 2.0, 4.0;
    EXPECT_THROW(logm(M), std::domain_error);
    EXPECT_THROW(logm(Matrix2c::Zero()), std::domain_error);
}

TEST(SingularValues, AgreeWithSvd) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 500; ++i) {
        const Matrix2c M = testing::random_matrix(rng, 2.0);
        const auto sv = singular_values(M);
        const Eigen::JacobiSVD<Matrix2c> svd(M);
        EXPECT_NEAR(sv[0], svd.singularValues()(0), 1e-12 * (1 + sv[0]));
        EXPECT_NEAR(sv[1], svd.singularValues()(1), 1e-12 * (1 + sv[0]));
        EXPECT_GE(sv[0], sv[1]);
    }
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance_from_unitarity(Matrix2c::Identity()), 0.0);
    EXPECT_EQ(distance_from_unitarity(Matrix2c::Zero()), 1.0);
    std::mt19937_64 rng(8);
    const Matrix2c U = testing::pade_expm_hermitian(testing::random_hermitian(rng, 1.0), 1.3);
    const cdouble c(0.3, 0.4);
    EXPECT_NEAR(distance_from_unitarity(Matrix2c(c * U)), 1.0 - std::norm(c), 1e-15);
    EXPECT_LT(distance_from_unitarity(Matrix2c(2.0 * U)), 0.0);
}

TEST(HermiticityDefect, DetectsAsymmetry) {
    Matrix2c M;
    M << 1.0, cdouble(0, 1), cdouble(0, -1), 2.0;
    EXPECT_EQ(hermiticity_defect(M), 0.0);
    M(0, 1) += 0.5;
    EXPECT_DOUBLE_EQ(hermiticity_defect(M), 0.5);
}

TEST(AlignGlobalPhase, RemovesPhase) {
    std::mt19937_64 rng(9);
    const Matrix2c A = testing::random_matrix(rng, 1.0);
    const Matrix2c B = std::polar(1.0, 2.1) * A;
    EXPECT_LT(max_abs_diff(align_global_phase(A, B), A), 1e-14);
}

}  // namespace
}  // namespace nugrover::linalg2
