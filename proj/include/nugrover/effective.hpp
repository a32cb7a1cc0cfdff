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

// Non-Hermitian effective description of the measured dynamics.

#pragma once

#include <functional>
#include <optional>

#include "nugrover/core.hpp"

namespace nugrover {

/// H_eff = A - i B with A, B Hermitian.
struct EffectiveHamiltonian {
    Matrix2c hermitian_part = Matrix2c::Zero();
    Matrix2c antihermitian_part = Matrix2c::Zero();
    double time_label = 0.0;
    // Set when the logarithm went through the near-defective branch.
    bool defective = false;

    Matrix2c full() const;
    static EffectiveHamiltonian from_matrix(const Matrix2c& H, double time_label);
};

/// Piecewise-constant generator of one step: V_j = exp(-i H_eff dt), principal branch.
/// Throws std::domain_error("step operator not invertible") when a singular value of V
/// is at or below 1e-14.
EffectiveHamiltonian extract_step_hamiltonian(const Matrix2c& V, double delta_t, double time_label = 0.0);

/// Continuous small-tau generator in the basis (|w>, |r>):
///   -x cos^2(a x t)(|w><r| + |r><w|) + 2 (tau/dt) sin^2(a x t) |r><r|
///   - 2i (tau^2/dt) sin^2(a x t) |r><r| - eps |w><w|.
EffectiveHamiltonian continuous_heff(double t, const SearchParams& params);

using Generator = std::function<Matrix2c(double)>;

/// Classical fourth-order Runge-Kutta for dU/dt = -i H(t) U on [t0, t0 + steps*h].
Matrix2c propagate_rk4(const Generator& H, const Matrix2c& U0, double t0, double h, std::int64_t steps);

/// Upper bound on the integrator step for integrate_effective.
double effective_step_bound(const SearchParams& params);

struct EffectiveOptions {
    // Integrator steps per protocol period; derived from effective_step_bound when unset.
    std::optional<std::int64_t> substeps_per_period;
    int max_halvings = 6;
};

/// Integrates the continuous generator from |s> without renormalization. Samples are taken
/// at t = n*dt for every sample_stride-th n, and at t_final. A relative norm increase above
/// 1e-6 in any integrator step halves the step and restarts; std::runtime_error once
/// max_halvings is exhausted.
RunRecord integrate_effective(const SearchParams& params, double t_final, std::int64_t sample_stride = 1,
                              const EffectiveOptions& options = {});

/// sin^2(A(n)) with A(n) = (x dt / 2)(n + sin(2 n dtheta) / (2 dtheta)).
double unitary_approx_fidelity(std::int64_t n, const SearchParams& params);

DampedTwoLevelModel damped_eigenanalysis(double x, double gamma);

enum class RegimeKind { unitary_like, intermediate, saturating };

std::string to_string(RegimeKind kind);

/// Annotation only: maps a run onto the damped two-level picture with gamma ~ tau^2/dt
/// and compares |tau| with sqrt(x dt).
struct HeuristicRegime {
    double gamma = 0.0;
    double saturation_scale = 0.0;  // sqrt(x dt)
    double ratio = 0.0;             // |tau| / sqrt(x dt)
    RegimeKind kind = RegimeKind::unitary_like;
};

HeuristicRegime classify_regime(const SearchParams& params);

}  // namespace nugrover
