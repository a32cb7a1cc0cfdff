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

// Scaling planner and detuned-Oracle analysis.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nugrover/core.hpp"

namespace nugrover {

/// Real-valued step multiplier that maps a (N1, k1, tau) process onto size N2:
/// k2 = sqrt(N2/N1)(k1 pi + tau)/pi - tau/pi.
double scaling_k2(double N1, std::int64_t k1, double tau, double N2);

/// Ceiling of a positive double as an exact integer. Above 2^53 a double carries no
/// fractional digits, so an integral-looking value is rounded up to the next integer.
std::uint64_t ceil_to_integer(double value);

struct ScalePlan {
    double N1 = 0.0;
    std::int64_t k1 = 0;
    double tau = 0.0;
    double N_r = 0.0;

    std::uint64_t N2 = 0;
    std::int64_t k2 = 0;
    double k2_requested = 0.0;  // scaling_k2 at N_r, before the inner ceiling
    double k2_raw = 0.0;        // scaling_k2 at the planned N2
    double integrality_residual = 0.0;
    double validity_fraction = 0.1;
    bool valid = false;

    double N2_real() const { return static_cast<double>(N2); }
};

/// Picks the smallest integer k2 reachable from N_r and the matching size N2 >= N_r.
/// The plan is valid when |k2_raw - k2| < validity_fraction * |tau|.
ScalePlan plan_scaled_instance(double N1, std::int64_t k1, double tau, double N_r,
                               double validity_fraction = 0.1);

struct ScaleCheckReport {
    std::int64_t reference_n_G = 0;
    std::int64_t planned_n_G = 0;
    double reference_f = 0.0;
    double reference_P = 0.0;
    double planned_f = 0.0;
    double planned_P = 0.0;
    // Compared at equal step indices, i.e. f2(t) against f1(t sqrt(N2/N1)).
    double max_fidelity_deviation = 0.0;
    double max_survival_deviation = 0.0;
};

ScaleCheckReport scaled_process_check(const ScalePlan& plan, double alpha);

/// Unitary Grover fidelity with Oracle (1+eps)H_o:
/// sin^2(dE t / 2) / (1 + eps^2 / (4x^2)), dE = sqrt(eps^2 + 4x^2).
double detuned_fidelity_analytic(double t, double N, double epsilon);

/// eps = -+2x sqrt(4m^2 - 1) for m = 1..m_max, ascending in |eps| (negative first).
std::vector<double> bad_epsilon_values(double N, int m_max);

struct QualityReport {
    double epsilon = 0.0;
    double epsilon_over_x = 0.0;
    double f_nu = 0.0;
    double P_nu = 0.0;
    double f_G = 0.0;
    // f_nu P_nu / f_G; unset when f_G is below the divergence floor.
    std::optional<double> Q;
    bool divergent = false;
    double Q_clipped = 0.0;
    double t_result_nu = 0.0;
    double t_result_G = 0.0;

    double numerator() const { return f_nu * P_nu; }
};

struct QualityOptions {
    double divergence_floor = 1e-12;
    double clip_ceiling = 1e3;
    int jobs = 1;
};

/// Runs the detuned protocol for each eps (absolute units) and compares its readout at n_G
/// with unitary Grover read at T0 = pi/(2x). Output order follows the grid.
std::vector<QualityReport> quality_factor_sweep(const SearchParams& base, const std::vector<double>& epsilon_grid,
                                                const QualityOptions& options = {});

QualityReport quality_report(const SearchParams& base, double epsilon, const QualityOptions& options = {});

}  // namespace nugrover
