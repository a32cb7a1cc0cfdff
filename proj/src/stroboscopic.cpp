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

#include "nugrover/stroboscopic.hpp"

#include <cmath>

#include "nugrover/linalg2.hpp"

namespace nugrover {

namespace {

constexpr cdouble kI{0.0, 1.0};

std::pair<double, double> cs_products(const SearchParams& params, std::int64_t j) {
    const double prev = params.theta(j - 1);
    const double next = params.theta(j);
    return {std::cos(prev) * std::cos(next), std::sin(prev) * std::sin(next)};
}

void require_step(std::int64_t j) {
    if (j < 1) {
        throw ParameterError("step index must be >= 1");
    }
}

}  // namespace

std::string to_string(Engine engine) { return engine == Engine::exact ? "exact" : "approx"; }

BlockHamiltonians subspace_basis_matrices(const SearchParams& params) {
    const double x = params.x;
    const double xc = std::sqrt(1.0 - x * x);
    const double oracle = 1.0 + params.epsilon;

    // |s><s| in (|w>, |r>) is [[x^2, x xc], [x xc, 1 - x^2]].
    BlockHamiltonians b;
    b.h_up << -oracle - x * x, -x * xc,
              -x * xc, -(1.0 - x * x);
    b.h_down << -oracle + x * x, x * xc,
                x * xc, 1.0 - x * x;
    return b;
}

ExactStepper::ExactStepper(const SearchParams& params)
    : ExactStepper(params, subspace_basis_matrices(params)) {}

ExactStepper::ExactStepper(const SearchParams& params, const BlockHamiltonians& blocks)
    : params_(params),
      exp_up_(linalg2::expm_hermitian(blocks.h_up, params.delta_t)),
      exp_down_(linalg2::expm_hermitian(blocks.h_down, params.delta_t)) {}

StepOperator ExactStepper::step(std::int64_t j) const {
    require_step(j);
    const auto [c, s] = cs_products(params_, j);
    StepOperator op;
    op.step_index = j;
    op.c_j = c;
    op.s_j = s;
    op.matrix = c * exp_up_ + s * exp_down_;
    return op;
}

StepOperator exact_step_operator(std::int64_t j, const SearchParams& params) {
    return ExactStepper(params).step(j);
}

StepOperator approx_step_operator(std::int64_t j, const SearchParams& params) {
    require_step(j);
    const auto [c, s] = cs_products(params, j);
    const double x = params.x;
    const double dt = params.delta_t;
    const cdouble phase = std::exp(-2.0 * kI * dt);
    const cdouble off = kI * c * x * dt - 0.5 * s * x * (1.0 - phase);

    StepOperator op;
    op.step_index = j;
    op.c_j = c;
    op.s_j = s;
    op.matrix << c + s, off,
                 off, c + s * phase;
    return op;
}

double distance_from_unitarity(const Matrix2c& V) { return linalg2::distance_from_unitarity(V); }

ProcessResult accumulate_process(const SearchParams& params, std::int64_t n, Engine engine,
                                 const std::optional<BlockHamiltonians>& blocks) {
    if (n < 1) {
        throw ParameterError("number of steps must be >= 1");
    }
    const std::optional<ExactStepper> stepper =
        engine == Engine::exact
            ? std::optional<ExactStepper>(blocks ? ExactStepper(params, *blocks) : ExactStepper(params))
            : std::nullopt;

    const Vector2c s = SubspaceState::initial(params.x).vector();
    ProcessResult out;
    out.V = Matrix2c::Identity();
    out.record.params = params;
    out.record.samples.reserve(static_cast<std::size_t>(n) + 1);
    out.record.samples.push_back({0, 0.0, params.x * params.x, 1.0, 0.0});

    // The normalized state and the raw product are kept separately: P(n) comes from the
    // raw product, the fidelity from the renormalized state.
    SubspaceState state = SubspaceState::initial(params.x);
    for (std::int64_t j = 1; j <= n; ++j) {
        const Matrix2c Vj = engine == Engine::exact ? stepper->step(j).matrix
                                                    : approx_step_operator(j, params).matrix;
        out.V = Vj * out.V;

        Vector2c psi = Vj * state.vector();
        const double norm2 = psi.squaredNorm();
        if (norm2 > 0.0) {
            psi /= std::sqrt(norm2);
        }
        state.amp_w = psi(0);
        state.amp_r = psi(1);

        Sample sample;
        sample.n = j;
        sample.t = static_cast<double>(j) * params.delta_t;
        sample.fidelity = norm2 > 0.0 ? std::norm(psi(0)) : 0.0;
        sample.distance = linalg2::distance_from_unitarity(out.V);
        if (out.record.underflow) {
            sample.survival = 0.0;
        } else {
            const double P = (out.V * s).squaredNorm();
            if (P < kSurvivalFloor) {
                out.record.underflow = true;
                sample.survival = 0.0;
            } else {
                sample.survival = P;
            }
        }
        state.survival = sample.survival;
        out.record.samples.push_back(sample);
    }
    return out;
}

RunRecord run_protocol(const SearchParams& params, std::optional<std::int64_t> n_max) {
    return accumulate_process(params, n_max.value_or(params.n_G), Engine::exact).record;
}

}  // namespace nugrover
