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

#include "nugrover/fullspace.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "nugrover/linalg2.hpp"

namespace nugrover::fullspace {

namespace {

constexpr ExtComplex kI{0.0L, 1.0L};

void validate(std::int64_t N, std::int64_t w) {
    if (N < 2 || N > kMaxDatabaseSize) {
        throw ParameterError("full-space database size must be in [2, " +
                             std::to_string(kMaxDatabaseSize) + "], got " + std::to_string(N));
    }
    if (w < 0 || w >= N) {
        throw ParameterError("target index out of range");
    }
}

ExtRealMatrix block_ext(std::int64_t N, double epsilon, int sign) {
    ExtRealMatrix H = ExtRealMatrix::Constant(N, N, -static_cast<ExtReal>(sign) / static_cast<ExtReal>(N));
    H(0, 0) -= 1.0L + static_cast<ExtReal>(epsilon);
    return H;
}

void diagonalize(const ExtRealMatrix& H, ExtRealVector& energies, ExtRealMatrix& vectors) {
    if (H.rows() <= kExtendedEigenLimit) {
        const Eigen::SelfAdjointEigenSolver<ExtRealMatrix> solver(H);
        energies = solver.eigenvalues();
        vectors = solver.eigenvectors();
    } else {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.cast<double>());
        energies = solver.eigenvalues().cast<ExtReal>();
        vectors = solver.eigenvectors().cast<ExtReal>();
    }
}

ExtVector phases_for(const ExtRealVector& energies, double t) {
    ExtVector out(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        out(i) = std::exp(-kI * energies(i) * static_cast<ExtReal>(t));
    }
    return out;
}

ExtVector uniform(std::int64_t N) {
    return ExtVector::Constant(N, ExtComplex(1.0L / std::sqrt(static_cast<ExtReal>(N)), 0.0L));
}

ExtVector r_vector(std::int64_t N, std::int64_t w) {
    ExtVector r = uniform(N);
    r(w) = 0.0L;
    return r / r.norm();
}

}  // namespace

Eigen::MatrixXd block_hamiltonian(std::int64_t N, std::int64_t w, double epsilon, int sign) {
    validate(N, w);
    Eigen::MatrixXd H = Eigen::MatrixXd::Constant(N, N, -static_cast<double>(sign) / static_cast<double>(N));
    H(w, w) -= 1.0 + epsilon;
    return H;
}

Eigen::MatrixXd build_full_hamiltonian(std::int64_t N, std::int64_t w, double epsilon) {
    validate(N, w);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    H.topLeftCorner(N, N) = block_hamiltonian(N, w, epsilon, +1);
    H.bottomRightCorner(N, N) = block_hamiltonian(N, w, epsilon, -1);
    return H;
}

std::shared_ptr<const FullSpectrum> diagonalize_blocks(std::int64_t N, double epsilon) {
    validate(N, 0);
    auto out = std::make_shared<FullSpectrum>();
    out->N = N;
    out->epsilon = epsilon;
    diagonalize(block_ext(N, epsilon, +1), out->up_energies, out->up_vectors);
    diagonalize(block_ext(N, epsilon, -1), out->down_energies, out->down_vectors);
    return out;
}

FullSpaceSimulator::FullSpaceSimulator(std::int64_t N, std::int64_t w, const SearchParams& params)
    : FullSpaceSimulator(N, w, params, nullptr) {}

FullSpaceSimulator::FullSpaceSimulator(std::int64_t N, std::int64_t w, const SearchParams& params,
                                       std::shared_ptr<const FullSpectrum> spectrum)
    : N_(N), w_(w), params_(params), spectrum_(std::move(spectrum)) {
    validate(N, w);
    if (!spectrum_) {
        spectrum_ = diagonalize_blocks(N, params.epsilon);
    }
    if (spectrum_->N != N || spectrum_->epsilon != params.epsilon) {
        throw ParameterError("spectrum was computed for a different N or epsilon");
    }
    up_phases_ = phases_for(spectrum_->up_energies, params.delta_t);
    down_phases_ = phases_for(spectrum_->down_energies, params.delta_t);
}

ExtVector FullSpaceSimulator::apply(const ExtRealMatrix& Q, const ExtVector& phases, const ExtVector& v) const {
    // The spectrum is stored for target 0; swap w into that slot and back.
    ExtVector moved = v;
    std::swap(moved(0), moved(w_));
    const ExtVector coeffs = Q.transpose().cast<ExtComplex>() * moved;
    ExtVector out = Q.cast<ExtComplex>() * phases.cwiseProduct(coeffs);
    std::swap(out(0), out(w_));
    return out;
}

ExtVector FullSpaceSimulator::apply_up(const ExtVector& v) const {
    return apply(spectrum_->up_vectors, up_phases_, v);
}

ExtVector FullSpaceSimulator::apply_down(const ExtVector& v) const {
    return apply(spectrum_->down_vectors, down_phases_, v);
}

Eigen::MatrixXcd FullSpaceSimulator::dense(bool up) const {
    Eigen::MatrixXcd out(N_, N_);
    for (std::int64_t i = 0; i < N_; ++i) {
        ExtVector e = ExtVector::Zero(N_);
        e(i) = 1.0L;
        out.col(i) = (up ? apply_up(e) : apply_down(e)).cast<cdouble>();
    }
    return out;
}

Eigen::MatrixXcd FullSpaceSimulator::up_propagator() const { return dense(true); }

Eigen::MatrixXcd FullSpaceSimulator::down_propagator() const { return dense(false); }

FullState FullSpaceSimulator::initial_state() const {
    FullState state;
    state.amplitudes = ExtVector::Zero(2 * N_);
    const ExtVector s = uniform(N_);
    state.amplitudes.head(N_) = static_cast<ExtReal>(std::cos(params_.theta0)) * s;
    state.amplitudes.tail(N_) = static_cast<ExtReal>(std::sin(params_.theta0)) * s;
    return state;
}

void FullSpaceSimulator::step(FullState& state, std::int64_t j) const {
    const ExtVector evolved_up = apply_up(state.amplitudes.head(N_));
    const ExtVector evolved_down = apply_down(state.amplitudes.tail(N_));

    // (<q_j| (x) I) applied to the evolved joint state.
    const auto c = static_cast<ExtReal>(std::cos(params_.theta(j)));
    const auto s = static_cast<ExtReal>(std::sin(params_.theta(j)));
    ExtVector database = c * evolved_up + s * evolved_down;

    const ExtReal success = database.squaredNorm();
    const double survival = state.survival * static_cast<double>(success);
    state.survival = survival < kSurvivalFloor ? 0.0 : survival;
    if (success > 0.0L) {
        database /= std::sqrt(success);
    }
    state.amplitudes.head(N_) = c * database;
    state.amplitudes.tail(N_) = s * database;
}

double FullSpaceSimulator::subspace_leakage(const FullState& state) const {
    const ExtVector r = r_vector(N_, w_);
    ExtReal leak = 0.0L;
    for (int a = 0; a < 2; ++a) {
        ExtVector block = state.amplitudes.segment(a * N_, N_);
        // Remove the |w> component, then the component along |r> (orthogonal to |w>).
        block(w_) = 0.0L;
        block -= r * r.dot(block);
        leak += block.squaredNorm();
    }
    return std::sqrt(static_cast<double>(leak) * state.survival);
}

double FullSpaceSimulator::target_fidelity(const FullState& state) const {
    const ExtReal on_target = std::norm(state.amplitudes(w_)) + std::norm(state.amplitudes(N_ + w_));
    const ExtReal norm2 = state.amplitudes.squaredNorm();
    return norm2 > 0.0L ? static_cast<double>(on_target / norm2) : 0.0;
}

RunRecord simulate_full_protocol(std::int64_t N, std::int64_t w, const SearchParams& params,
                                 std::int64_t n_max, std::shared_ptr<const FullSpectrum> spectrum) {
    if (n_max < 1) {
        throw ParameterError("number of steps must be >= 1");
    }
    const FullSpaceSimulator sim(N, w, params, std::move(spectrum));

    // Columns |w> and |r> pushed through the raw (unnormalized) process for d(V(n)).
    const ExtVector r = r_vector(N, w);
    ExtVector col_w = ExtVector::Zero(N);
    col_w(w) = 1.0L;
    ExtVector col_r = r;

    RunRecord record;
    record.params = params;
    record.samples.reserve(static_cast<std::size_t>(n_max) + 1);
    FullState state = sim.initial_state();
    record.samples.push_back({0, 0.0, sim.target_fidelity(state), 1.0, 0.0});

    for (std::int64_t j = 1; j <= n_max; ++j) {
        sim.step(state, j);
        const auto C = static_cast<ExtReal>(std::cos(params.theta(j - 1)) * std::cos(params.theta(j)));
        const auto S = static_cast<ExtReal>(std::sin(params.theta(j - 1)) * std::sin(params.theta(j)));
        col_w = C * sim.apply_up(col_w) + S * sim.apply_down(col_w);
        col_r = C * sim.apply_up(col_r) + S * sim.apply_down(col_r);

        Matrix2c V;
        V(0, 0) = cdouble(col_w(w));
        V(0, 1) = cdouble(col_r(w));
        V(1, 0) = cdouble(r.dot(col_w));
        V(1, 1) = cdouble(r.dot(col_r));

        Sample sample;
        sample.n = j;
        sample.t = static_cast<double>(j) * params.delta_t;
        sample.fidelity = sim.target_fidelity(state);
        sample.survival = state.survival;
        sample.distance = linalg2::distance_from_unitarity(V);
        if (state.survival == 0.0 && !record.underflow) {
            record.underflow = true;
        }
        record.samples.push_back(sample);
    }
    return record;
}

}  // namespace nugrover::fullspace
