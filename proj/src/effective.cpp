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

#include "nugrover/effective.hpp"

#include <cmath>
#include <stdexcept>

#include "nugrover/linalg2.hpp"

namespace nugrover {

namespace {

constexpr cdouble kI{0.0, 1.0};

// Allowed relative norm increase per integrator step before the step is halved.
constexpr double kNormGrowthTolerance = 1e-6;

Vector2c initial_vector(double x) { return SubspaceState::initial(x).vector(); }

Sample sample_from(const Matrix2c& U, const Vector2c& s, double t, std::int64_t n) {
    const Vector2c psi = U * s;
    const double P = psi.squaredNorm();
    Sample out;
    out.n = n;
    out.t = t;
    out.fidelity = P > 0.0 ? std::norm(psi(0)) / P : 0.0;
    out.survival = P;
    out.distance = linalg2::distance_from_unitarity(U);
    return out;
}

struct GrowthDetected {};

}  // namespace

Matrix2c EffectiveHamiltonian::full() const { return hermitian_part - kI * antihermitian_part; }

EffectiveHamiltonian EffectiveHamiltonian::from_matrix(const Matrix2c& H, double time_label) {
    EffectiveHamiltonian out;
    out.hermitian_part = 0.5 * (H + H.adjoint());
    out.antihermitian_part = 0.5 * kI * (H - H.adjoint());
    out.time_label = time_label;
    return out;
}

EffectiveHamiltonian extract_step_hamiltonian(const Matrix2c& V, double delta_t, double time_label) {
    if (!(delta_t > 0.0)) {
        throw ParameterError("delta_t must be > 0");
    }
    const auto sv = linalg2::singular_values(V);
    if (!(sv[1] > 1e-14)) {
        throw std::domain_error("step operator not invertible");
    }
    const linalg2::LogResult log = linalg2::logm(V);
    EffectiveHamiltonian out = EffectiveHamiltonian::from_matrix((kI / delta_t) * log.value, time_label);
    out.defective = log.defective;
    return out;
}

EffectiveHamiltonian continuous_heff(double t, const SearchParams& params) {
    const double x = params.x;
    const double phase = params.alpha * x * t;
    const double c2 = std::cos(phase) * std::cos(phase);
    const double s2 = std::sin(phase) * std::sin(phase);
    const double tau = params.tau;
    const double dt = params.delta_t;

    EffectiveHamiltonian out;
    out.time_label = t;
    out.hermitian_part << -params.epsilon, -x * c2,
                          -x * c2, 2.0 * (tau / dt) * s2;
    out.antihermitian_part << 0.0, 0.0,
                              0.0, 2.0 * (tau * tau / dt) * s2;
    return out;
}

Matrix2c propagate_rk4(const Generator& H, const Matrix2c& U0, double t0, double h, std::int64_t steps) {
    Matrix2c U = U0;
    for (std::int64_t i = 0; i < steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const Matrix2c A0 = -kI * H(t);
        const Matrix2c Amid = -kI * H(t + 0.5 * h);
        const Matrix2c A1 = -kI * H(t + h);
        const Matrix2c k1 = A0 * U;
        const Matrix2c k2 = Amid * (U + 0.5 * h * k1);
        const Matrix2c k3 = Amid * (U + 0.5 * h * k2);
        const Matrix2c k4 = A1 * (U + h * k3);
        U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return U;
}

double effective_step_bound(const SearchParams& params) {
    const double dt = params.delta_t;
    double bound = dt;
    const double rate = std::abs(params.alpha * params.x);
    if (rate > 0.0) {
        bound = std::min(bound, 1.0 / rate / 50.0);
    }
    bound = std::min(bound, 0.1 * dt / (1.0 + std::abs(2.0 * params.tau * params.tau / dt)));
    return bound;
}

RunRecord integrate_effective(const SearchParams& params, double t_final, std::int64_t sample_stride,
                              const EffectiveOptions& options) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw ParameterError("t_final must be > 0");
    }
    if (sample_stride < 1) {
        throw ParameterError("sample stride must be >= 1");
    }
    const double dt = params.delta_t;
    const Vector2c s = initial_vector(params.x);
    const Generator H = [&params](double t) { return continuous_heff(t, params).full(); };

    // Substeps per protocol period; the step divides dt so samples land on n*dt exactly.
    std::int64_t per_period = options.substeps_per_period.value_or(
        static_cast<std::int64_t>(std::ceil(dt / effective_step_bound(params))));
    if (per_period < 1) {
        throw ParameterError("substeps per period must be >= 1");
    }
    const auto whole_periods = static_cast<std::int64_t>(std::floor(t_final / dt));

    for (int attempt = 0; attempt <= options.max_halvings; ++attempt, per_period *= 2) {
        const double h = dt / static_cast<double>(per_period);
        RunRecord record;
        record.params = params;
        Matrix2c U = Matrix2c::Identity();
        record.samples.push_back(sample_from(U, s, 0.0, 0));

        double last_P = 1.0;
        auto advance = [&](double t0, std::int64_t steps, double step) {
            for (std::int64_t i = 0; i < steps; ++i) {
                U = propagate_rk4(H, U, t0 + static_cast<double>(i) * step, step, 1);
                const double P = (U * s).squaredNorm();
                if (P > last_P * (1.0 + kNormGrowthTolerance)) {
                    throw GrowthDetected{};
                }
                last_P = P;
            }
        };
        auto push = [&](double t, std::int64_t n) {
            Sample sample = sample_from(U, s, t, n);
            if (record.underflow || sample.survival < kSurvivalFloor) {
                record.underflow = true;
                sample.survival = 0.0;
            }
            record.samples.push_back(sample);
        };

        try {
            for (std::int64_t n = 1; n <= whole_periods; ++n) {
                advance(static_cast<double>(n - 1) * dt, per_period, h);
                if (n % sample_stride == 0) {
                    push(static_cast<double>(n) * dt, n);
                }
            }
            const double t_done = static_cast<double>(whole_periods) * dt;
            const double remainder = t_final - t_done;
            if (remainder > 1e-12 * dt) {
                const auto steps = static_cast<std::int64_t>(std::ceil(remainder / h));
                advance(t_done, steps, remainder / static_cast<double>(steps));
                push(t_final, whole_periods);
            } else if (whole_periods % sample_stride != 0) {
                push(t_done, whole_periods);
            }
        } catch (const GrowthDetected&) {
            continue;
        }
        return record;
    }
    throw std::runtime_error("integrate_effective: norm growth persists after step halving");
}

double unitary_approx_fidelity(std::int64_t n, const SearchParams& params) {
    const double nd = static_cast<double>(n);
    const double dtheta = params.delta_theta;
    const double ratio = std::abs(dtheta) < 1e-12 ? nd : std::sin(2.0 * nd * dtheta) / (2.0 * dtheta);
    const double A = 0.5 * params.x * params.delta_t * (nd + ratio);
    const double s = std::sin(A);
    return s * s;
}

Matrix2c DampedTwoLevelModel::generator() const {
    Matrix2c h;
    h << 0.0, -x,
         -x, cdouble(0.0, -gamma);
    return h;
}

Vector2c DampedTwoLevelModel::evolve(const Vector2c& psi0, double t) const {
    if (!basis) {
        throw std::domain_error("no biorthogonal basis at the exceptional point");
    }
    Vector2c out = Vector2c::Zero();
    for (int n = 0; n < 2; ++n) {
        out += std::exp(-kI * eigenvalues[n] * t) * basis->left[n].dot(psi0) * basis->right[n];
    }
    return out;
}


DampedTwoLevelModel damped_eigenanalysis(double x, double gamma) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ParameterError("coupling x must be > 0");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("damping gamma must be >= 0");
    }
    DampedTwoLevelModel model;
    model.x = x;
    model.gamma = gamma;

    // Roots of e^2 + i gamma e - x^2 = 0; the principal root makes index 0 the slow mode.
    const cdouble disc(4.0 * x * x - gamma * gamma, 0.0);
    const cdouble root = std::sqrt(disc);
    model.eigenvalues[0] = 0.5 * (-kI * gamma + root);
    model.eigenvalues[1] = 0.5 * (-kI * gamma - root);

    if (std::abs(disc) <= 1e-9 * 4.0 * x * x) {
        model.degenerate = true;
        return model;
    }

    DampedTwoLevelModel::Biorthogonal b;
    for (int n = 0; n < 2; ++n) {
        Vector2c phi(x, -model.eigenvalues[n]);
        phi /= phi.norm();
        // h is complex symmetric, so <chi_n| is proportional to phi_n^T.
        const cdouble pairing = phi.transpose() * phi;
        b.right[n] = phi;
        b.left[n] = phi.conjugate() / std::conj(pairing);
    }
    const Vector2c s = initial_vector(x);
    b.overlap_s = b.left[0].dot(s);
    b.asymptotic_state = b.right[0];
    model.basis = b;
    return model;
}

std::string to_string(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::unitary_like:
            return "unitary_like";
        case RegimeKind::intermediate:
            return "intermediate";
        case RegimeKind::saturating:
            return "saturating";
    }
    return "unknown";
}

HeuristicRegime classify_regime(const SearchParams& params) {
    HeuristicRegime out;
    out.gamma = params.tau * params.tau / params.delta_t;
    out.saturation_scale = std::sqrt(params.x * params.delta_t);
    out.ratio = std::abs(params.tau) / out.saturation_scale;
    // "Much greater" is read as a factor of three either way.
    if (out.ratio >= 3.0) {
        out.kind = RegimeKind::saturating;
    } else if (out.ratio <= 1.0 / 3.0) {
        out.kind = RegimeKind::unitary_like;
    } else {
        out.kind = RegimeKind::intermediate;
    }
    return out;
}

}  // namespace nugrover
