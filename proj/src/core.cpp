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

#include "nugrover/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nugrover {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ParameterError(what);
    }
}

}  // namespace

double overlap_x(double N) { return 1.0 / std::sqrt(N); }

std::int64_t grover_step_count(double N, double delta_t) {
    // A ratio that is integral in exact arithmetic may evaluate a few ulps low.
    const double ratio = kPi * std::sqrt(N) / (2.0 * delta_t);
    const double steps = std::floor(ratio * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()));
    require(steps < 9.2e18, "Grover step count exceeds the 64-bit range");
    return static_cast<std::int64_t>(steps);
}

double alpha_of(double N, double delta_t, double delta_theta) {
    return std::sqrt(N) * delta_theta / delta_t;
}

double delta_theta_for_alpha(double N, double delta_t, double alpha) {
    return alpha * overlap_x(N) * delta_t;
}

SearchParams make_trajectory_params(double N, StepSpec step, double delta_theta, double theta0,
                                    double epsilon) {
    require(std::isfinite(N) && N >= 2.0, "database size N must be >= 2, got " + std::to_string(N));
    require(std::isfinite(delta_theta), "delta_theta must be finite");
    require(std::isfinite(theta0) && std::abs(theta0) < kPi / 2, "theta0 must satisfy |theta0| < pi/2");
    require(std::isfinite(epsilon), "epsilon must be finite");

    SearchParams p;
    p.N = N;
    p.delta_theta = delta_theta;
    p.theta0 = theta0;
    p.epsilon = epsilon;
    p.mode = step.mode;

    if (step.mode == StepMode::k_tau) {
        require(step.k >= 1, "k must be a positive integer, got " + std::to_string(step.k));
        require(std::isfinite(step.tau) && std::abs(step.tau) < kPi / 2,
                "tau must satisfy |tau| < pi/2");
        p.k = step.k;
        p.tau = step.tau;
        p.delta_t = kPi * static_cast<double>(step.k) + step.tau;
    } else {
        require(std::isfinite(step.delta_t) && step.delta_t > 0.0,
                "delta_t must be > 0, got " + std::to_string(step.delta_t));
        p.delta_t = step.delta_t;
        p.k = static_cast<std::int64_t>(std::llround(step.delta_t / kPi));
        p.tau = step.delta_t - kPi * static_cast<double>(p.k);
    }

    p.x = overlap_x(N);
    p.alpha = alpha_of(N, p.delta_t, delta_theta);
    p.n_G = grover_step_count(N, p.delta_t);
    return p;
}

SearchParams make_params(double N, StepSpec step, double delta_theta, double theta0,
                         double epsilon) {
    SearchParams p = make_trajectory_params(N, step, delta_theta, theta0, epsilon);
    require(p.n_G >= 1, "delta_t too large for N: Grover step count n_G < 1");
    return p;
}

double grover_fidelity_closed_form(double t, double N) {
    require(N >= 2.0, "database size N must be >= 2");
    require(t >= 0.0, "time must be non-negative");
    const double x = overlap_x(N);
    const double c = std::cos(x * t);
    const double s = std::sin(x * t);
    return x * x * c * c + s * s;
}

SubspaceState SubspaceState::initial(double x) {
    return {cdouble{x, 0.0}, cdouble{std::sqrt(1.0 - x * x), 0.0}, 1.0};
}

std::string to_string(StepMode mode) { return mode == StepMode::k_tau ? "k_tau" : "raw"; }

}  // namespace nugrover
