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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nugrover {

using cdouble = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kPi = std::numbers::pi;

/// Survival probabilities below this are reported as underflow.
inline constexpr double kSurvivalFloor = 1e-300;

/// Raised for any out-of-domain protocol parameter.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// How the step duration was specified.
enum class StepMode { raw, k_tau };

/// Step duration, either as a raw value or as the split delta_t = pi*k + tau.
struct StepSpec {
    StepMode mode = StepMode::raw;
    double delta_t = 0.0;
    std::int64_t k = 0;
    double tau = 0.0;

    static StepSpec raw(double delta_t) { return {StepMode::raw, delta_t, 0, 0.0}; }
    static StepSpec k_tau(std::int64_t k, double tau) { return {StepMode::k_tau, 0.0, k, tau}; }
};

/// All control knobs of one protocol run plus the quantities derived from them.
///
/// Only make_params() builds valid instances. N is real-valued so that sizes up to
/// 1e18 are representable; it only enters the dynamics through x = 1/sqrt(N).
struct SearchParams {
    double N = 0.0;
    double delta_t = 0.0;
    double delta_theta = 0.0;
    double theta0 = 0.0;
    double epsilon = 0.0;
    StepMode mode = StepMode::raw;

    // Nearest multiple of pi and the offset from it. Stored verbatim in k_tau mode.
    std::int64_t k = 0;
    double tau = 0.0;

    double x = 0.0;
    double alpha = 0.0;
    std::int64_t n_G = 0;

    /// Ancilla angle after `step` measurements.
    double theta(std::int64_t step) const {
        return theta0 + static_cast<double>(step) * delta_theta;
    }
};

SearchParams make_params(double N, StepSpec step, double delta_theta, double theta0 = 0.0,
                         double epsilon = 0.0);

/// Same validation as make_params except that n_G may be 0. For runs driven by an explicit
/// step count rather than the Grover readout, e.g. small-N equivalence checks with dt > pi sqrt(N)/2.
SearchParams make_trajectory_params(double N, StepSpec step, double delta_theta, double theta0 = 0.0,
                                    double epsilon = 0.0);

/// delta_theta that realizes a given alpha = sqrt(N) * delta_theta / delta_t.
double delta_theta_for_alpha(double N, double delta_t, double alpha);

// Derived-quantity formulas, shared by make_params and the consistency tests.
double overlap_x(double N);
std::int64_t grover_step_count(double N, double delta_t);
double alpha_of(double N, double delta_t, double delta_theta);

/// Target fidelity of ideal continuous-time Grover evolution from |s>:
/// x^2 cos^2(xt) + sin^2(xt).
double grover_fidelity_closed_form(double t, double N);

/// Amplitude pair on {|w>, |r>} plus the accumulated survival probability.
struct SubspaceState {
    cdouble amp_w{0.0, 0.0};
    cdouble amp_r{0.0, 0.0};
    double survival = 1.0;

    static SubspaceState initial(double x);
    Vector2c vector() const { return {amp_w, amp_r}; }
    double norm_squared() const { return std::norm(amp_w) + std::norm(amp_r); }
    double fidelity() const { return std::norm(amp_w) / norm_squared(); }
};

/// One evolve-and-project cycle as a 2x2 operator on {|w>, |r>}.
struct StepOperator {
    Matrix2c matrix = Matrix2c::Identity();
    std::int64_t step_index = 0;
    double c_j = 1.0;  // cos(theta_{j-1}) cos(theta_j)
    double s_j = 0.0;  // sin(theta_{j-1}) sin(theta_j)
};

struct Sample {
    std::int64_t n = 0;
    double t = 0.0;
    double fidelity = 0.0;
    double survival = 1.0;
    double distance = 0.0;
};

/// Time series of one protocol execution.
struct RunRecord {
    SearchParams params;
    std::vector<Sample> samples;
    // P(n) dropped below the representable floor; later survivals are frozen at 0.
    bool underflow = false;

    const Sample& final() const { return samples.back(); }
};

/// Heuristic generator h = -x(|w><r| + |r><w|) - i*gamma*|r><r| and its spectral data.
///
/// Index 0 is the long-lived mode (eigenvalue -> -i x^2/gamma when gamma >> x).
/// At the exceptional point gamma = 2x the eigenvectors coalesce; `degenerate` is set
/// and no biorthogonal basis is returned.
struct DampedTwoLevelModel {
    double x = 0.0;
    double gamma = 0.0;
    std::array<cdouble, 2> eigenvalues{};
    bool degenerate = false;

    struct Biorthogonal {
        std::array<Vector2c, 2> right;  // h |phi_n> = e_n |phi_n>
        std::array<Vector2c, 2> left;   // h^dagger |chi_n> = conj(e_n) |chi_n>, <chi_n|phi_m> = delta_nm
        cdouble overlap_s{};            // <chi_0|s>
        Vector2c asymptotic_state;      // normalized |phi_0>
    };
    std::optional<Biorthogonal> basis;

    Matrix2c generator() const;
    /// Non-normalized psi(t) = sum_n exp(-i e_n t) <chi_n|psi0> |phi_n>. Requires a basis.
    Vector2c evolve(const Vector2c& psi0, double t) const;
};

std::string to_string(StepMode mode);

}  // namespace nugrover
