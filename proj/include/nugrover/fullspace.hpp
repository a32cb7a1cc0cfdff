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

// Brute-force propagation in the full ancilla (x) database space. Small N only; used to
// check the two-dimensional reduction end to end.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "nugrover/core.hpp"

namespace nugrover::fullspace {

inline constexpr std::int64_t kMaxDatabaseSize = 4096;

/// Largest N whose block eigendecomposition runs in extended precision. Above it the dense
/// eigensolver runs in double and only the propagation is extended.
inline constexpr std::int64_t kExtendedEigenLimit = 1024;

// Propagation runs in extended precision. The complement of span{|w>, |s>} is undamped, so
// rounding noise there grows like 1/sqrt(P) relative to the post-selected state.
using ExtReal = long double;
using ExtComplex = std::complex<long double>;
using ExtVector = Eigen::Matrix<ExtComplex, Eigen::Dynamic, 1>;
using ExtMatrix = Eigen::Matrix<ExtComplex, Eigen::Dynamic, Eigen::Dynamic>;
using ExtRealVector = Eigen::Matrix<ExtReal, Eigen::Dynamic, 1>;
using ExtRealMatrix = Eigen::Matrix<ExtReal, Eigen::Dynamic, Eigen::Dynamic>;

/// Joint state, ancilla-major: index = a * N + n with a = 0 for up, 1 for down.
struct FullState {
    ExtVector amplitudes;
    double survival = 1.0;
};

/// H = -(1+eps) I (x) |w><w| - sigma_z (x) |s><s|, dense 2N x 2N. Uses 32 N^2 bytes.
Eigen::MatrixXd build_full_hamiltonian(std::int64_t N, std::int64_t w, double epsilon);

/// The N x N block for one ancilla basis state: -(1+eps)|w><w| - sign |s><s|, sign = +1 (up) or -1 (down).
Eigen::MatrixXd block_hamiltonian(std::int64_t N, std::int64_t w, double epsilon, int sign);

/// Eigendecompositions of both blocks for target index 0. Other targets are a relabeling
/// of the database basis, so one spectrum serves every target, step length and schedule.
struct FullSpectrum {
    std::int64_t N = 0;
    double epsilon = 0.0;
    ExtRealVector up_energies;
    ExtRealMatrix up_vectors;
    ExtRealVector down_energies;
    ExtRealMatrix down_vectors;
};

std::shared_ptr<const FullSpectrum> diagonalize_blocks(std::int64_t N, double epsilon);

/// Stepping is O(N^2) once the spectrum is known.
class FullSpaceSimulator {
  public:
    FullSpaceSimulator(std::int64_t N, std::int64_t w, const SearchParams& params);
    /// Reuses a spectrum from diagonalize_blocks(N, params.epsilon).
    FullSpaceSimulator(std::int64_t N, std::int64_t w, const SearchParams& params,
                       std::shared_ptr<const FullSpectrum> spectrum);

    /// |q_0> (x) |s>.
    FullState initial_state() const;
    /// One evolve-and-project cycle ending in measurement j; renormalizes and multiplies
    /// the conditional success probability into the survival.
    void step(FullState& state, std::int64_t j) const;
    /// Norm of the component outside span{|q>(x)|w>, |q>(x)|r>} in the unnormalized
    /// post-selected state, i.e. relative to the initial norm.
    double subspace_leakage(const FullState& state) const;
    /// Probability of |w> in the database factor.
    double target_fidelity(const FullState& state) const;

    /// exp(-i H_block dt) applied to a database vector.
    ExtVector apply_up(const ExtVector& v) const;
    ExtVector apply_down(const ExtVector& v) const;
    /// Dense block propagators, for inspection.
    Eigen::MatrixXcd up_propagator() const;
    Eigen::MatrixXcd down_propagator() const;
    std::int64_t size() const { return N_; }

  private:
    ExtVector apply(const ExtRealMatrix& Q, const ExtVector& phases, const ExtVector& v) const;
    Eigen::MatrixXcd dense(bool up) const;

    std::int64_t N_;
    std::int64_t w_;
    SearchParams params_;
    std::shared_ptr<const FullSpectrum> spectrum_;
    ExtVector up_phases_;
    ExtVector down_phases_;
};

/// Runs the protocol for n_max steps. The distance column is d of the full-space V(n)
/// restricted to span{|w>, |r>}.
RunRecord simulate_full_protocol(std::int64_t N, std::int64_t w, const SearchParams& params,
                                 std::int64_t n_max,
                                 std::shared_ptr<const FullSpectrum> spectrum = nullptr);

}  // namespace nugrover::fullspace
