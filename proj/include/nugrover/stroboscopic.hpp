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

// Exact evolve-and-project dynamics restricted to span{|w>, |r>}.

#pragma once

#include <optional>

#include "nugrover/core.hpp"

namespace nugrover {

/// The two ancilla-diagonal blocks of the joint Hamiltonian in the basis (|w>, |r>):
/// h_up = -((1+eps)|w><w| + |s><s|), h_down = -((1+eps)|w><w| - |s><s|).
struct BlockHamiltonians {
    Matrix2c h_up;
    Matrix2c h_down;
};

BlockHamiltonians subspace_basis_matrices(const SearchParams& params);

enum class Engine { exact, approx };

std::string to_string(Engine engine);

/// Builds step operators for one parameter set. The two block exponentials are
/// computed once and reused for every step.
class ExactStepper {
  public:
    explicit ExactStepper(const SearchParams& params);
    /// Uses caller-supplied blocks instead of the ones derived from params.
    ExactStepper(const SearchParams& params, const BlockHamiltonians& blocks);

    StepOperator step(std::int64_t j) const;

    const Matrix2c& up_propagator() const { return exp_up_; }
    const Matrix2c& down_propagator() const { return exp_down_; }

  private:
    SearchParams params_;
    Matrix2c exp_up_;
    Matrix2c exp_down_;
};

/// V_j = cos(theta_{j-1}) cos(theta_j) exp(-i h_up dt) + sin(theta_{j-1}) sin(theta_j) exp(-i h_down dt).
StepOperator exact_step_operator(std::int64_t j, const SearchParams& params);

/// Small-x expansion of V_j, global phase dropped:
///   [[C+S,                               i C x dt - S x (1 - e^{-2i dt}) / 2],
///    [i C x dt - S x (1 - e^{-2i dt}) / 2, C + S e^{-2i dt}                  ]]
StepOperator approx_step_operator(std::int64_t j, const SearchParams& params);

double distance_from_unitarity(const Matrix2c& V);

struct ProcessResult {
    Matrix2c V;  // V(n) = V_n ... V_1
    RunRecord record;
};

/// Accumulates V(n) and samples f, P and d(V(n)) after every step (plus n = 0).
ProcessResult accumulate_process(const SearchParams& params, std::int64_t n, Engine engine,
                                 const std::optional<BlockHamiltonians>& blocks = std::nullopt);

/// Exact-engine trajectory; n_max defaults to n_G.
RunRecord run_protocol(const SearchParams& params, std::optional<std::int64_t> n_max = std::nullopt);

}  // namespace nugrover
