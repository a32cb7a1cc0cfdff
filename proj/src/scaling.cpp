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

#include "nugrover/scaling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nugrover/parallel.hpp"
#include "nugrover/stroboscopic.hpp"

namespace nugrover {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

}  // namespace

double scaling_k2(double N1, std::int64_t k1, double tau, double N2) {
    if (!(N1 >= 2.0) || !(N2 >= 2.0)) {
        throw ParameterError("database sizes must be >= 2");
    }
    if (k1 < 1) {
        throw ParameterError("k1 must be >= 1");
    }
    // Written as k1 + (...) so that N2 == N1 returns k1 exactly.
    const double period = kPi * static_cast<double>(k1) + tau;
    return static_cast<double>(k1) + (std::sqrt(N2 / N1) - 1.0) * period / kPi;
}

std::uint64_t ceil_to_integer(double value) {
    if (!(value >= 0.0) || value >= 18446744073709551616.0) {
        throw ParameterError("value outside the unsigned 64-bit range");
    }
    const double floor_value = std::floor(value);
    const auto whole = static_cast<std::uint64_t>(floor_value);
    if (value == floor_value && value < kExactIntegerLimit) {
        return whole;
    }
    return whole + 1;
}

ScalePlan plan_scaled_instance(double N1, std::int64_t k1, double tau, double N_r, double validity_fraction) {
    if (!(N_r >= N1)) {
        throw ParameterError("requested size N_r must be >= N1");
    }
    ScalePlan plan;
    plan.N1 = N1;
    plan.k1 = k1;
    plan.tau = tau;
    plan.N_r = N_r;
    plan.validity_fraction = validity_fraction;

    plan.k2_requested = scaling_k2(N1, k1, tau, N_r);
    plan.k2 = static_cast<std::int64_t>(ceil_to_integer(plan.k2_requested));
    const double ratio = (kPi * static_cast<double>(plan.k2) + tau) / (kPi * static_cast<double>(k1) + tau);
    plan.N2 = ceil_to_integer(N1 * (ratio * ratio));

    plan.k2_raw = scaling_k2(N1, k1, tau, plan.N2_real());
    plan.integrality_residual = plan.k2_raw - static_cast<double>(plan.k2);
    plan.valid = std::abs(plan.integrality_residual) < validity_fraction * std::abs(tau);
    return plan;
}

ScaleCheckReport scaled_process_check(const ScalePlan& plan, double alpha) {
    if (!plan.valid) {
        throw ParameterError("scaled_process_check requires a valid plan");
    }
    auto build = [alpha](double N, std::int64_t k, double tau) {
        const SearchParams probe = make_params(N, StepSpec::k_tau(k, tau), 0.0);
        return make_params(N, StepSpec::k_tau(k, tau), delta_theta_for_alpha(N, probe.delta_t, alpha));
    };
    const SearchParams reference = build(plan.N1, plan.k1, plan.tau);
    const SearchParams planned = build(plan.N2_real(), plan.k2, plan.tau);
    const RunRecord a = run_protocol(reference);
    const RunRecord b = run_protocol(planned);

    ScaleCheckReport report;
    report.reference_n_G = reference.n_G;
    report.planned_n_G = planned.n_G;
    report.reference_f = a.final().fidelity;
    report.reference_P = a.final().survival;
    report.planned_f = b.final().fidelity;
    report.planned_P = b.final().survival;
    const std::size_t common = std::min(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < common; ++i) {
        report.max_fidelity_deviation =
            std::max(report.max_fidelity_deviation, std::abs(a.samples[i].fidelity - b.samples[i].fidelity));
        report.max_survival_deviation =
            std::max(report.max_survival_deviation, std::abs(a.samples[i].survival - b.samples[i].survival));
    }
    return report;
}

double detuned_fidelity_analytic(double t, double N, double epsilon) {
    if (!(N >= 2.0)) {
        throw ParameterError("database size N must be >= 2");
    }
    if (!(t >= 0.0)) {
        throw ParameterError("time must be non-negative");
    }
    const double x = overlap_x(N);
    const double gap = std::sqrt(epsilon * epsilon + 4.0 * x * x);
    const double s = std::sin(gap * t / 2.0);
    return s * s / (1.0 + epsilon * epsilon / (4.0 * x * x));
}

std::vector<double> bad_epsilon_values(double N, int m_max) {
    if (m_max < 1) {
        throw ParameterError("m_max must be >= 1");
    }
    const double x = overlap_x(N);
    std::vector<double> out;
    out.reserve(2 * static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        const double e = 2.0 * x * std::sqrt(4.0 * m * m - 1.0);
        out.push_back(-e);
        out.push_back(e);
    }
    return out;
}

QualityReport quality_report(const SearchParams& base, double epsilon, const QualityOptions& options) {
    SearchParams params = base;
    params.epsilon = epsilon;
    const RunRecord run = run_protocol(params);
    const double T0 = kPi / (2.0 * base.x);

    QualityReport r;
    r.epsilon = epsilon;
    r.epsilon_over_x = epsilon / base.x;
    r.f_nu = run.final().fidelity;
    r.P_nu = run.final().survival;
    r.f_G = detuned_fidelity_analytic(T0, base.N, epsilon);
    const double numerator = r.numerator();
    if (r.f_G < options.divergence_floor) {
        r.divergent = true;
        r.Q_clipped = options.clip_ceiling;
    } else {
        r.Q = numerator / r.f_G;
        r.Q_clipped = std::min(*r.Q, options.clip_ceiling);
    }
    const double T_nu = static_cast<double>(base.n_G) * base.delta_t;
    const double inf = std::numeric_limits<double>::infinity();
    r.t_result_nu = numerator > 0.0 ? T_nu / numerator : inf;
    r.t_result_G = r.f_G > 0.0 ? T0 / r.f_G : inf;
    return r;
}

std::vector<QualityReport> quality_factor_sweep(const SearchParams& base, const std::vector<double>& epsilon_grid,
                                                const QualityOptions& options) {
    return parallel_map(epsilon_grid.size(), options.jobs,
                        [&](std::size_t i) { return quality_report(base, epsilon_grid[i], options); });
}

}  // namespace nugrover
