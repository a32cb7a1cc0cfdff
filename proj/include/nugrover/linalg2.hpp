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

// Closed-form functions of 2x2 complex matrices.

#pragma once

#include "nugrover/core.hpp"

namespace nugrover::linalg2 {

/// exp(-i H t) for Hermitian H via exp(-iHt) = e^{-i tr(H) t/2} [cos(wt) I - i sin(wt)/w (H - tr(H)/2 I)],
/// with w the norm of the traceless part. Small wt uses the sinc series.
Matrix2c expm_hermitian(const Matrix2c& H, double t);

/// exp(M) for an arbitrary complex 2x2 matrix.
Matrix2c expm(const Matrix2c& M);

struct LogResult {
    Matrix2c value;
    // Eigenvalues closer than the separation tolerance; the Jordan-form branch was used.
    bool defective = false;
};

/// Principal matrix logarithm. Throws std::domain_error when M has a zero eigenvalue.
LogResult logm(const Matrix2c& M);

/// Singular values, descending.
std::array<double, 2> singular_values(const Matrix2c& M);

/// 1 - Tr(M^dagger M)/2.
double distance_from_unitarity(const Matrix2c& M);

/// Largest absolute entry of M - M^dagger.
double hermiticity_defect(const Matrix2c& M);

/// Multiplies b by the unit phase that aligns its largest-magnitude entry with a's entry
/// at the same position.
Matrix2c align_global_phase(const Matrix2c& a, const Matrix2c& b);

}  // namespace nugrover::linalg2
