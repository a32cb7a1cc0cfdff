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

#include "nugrover/linalg2.hpp"

#include <cmath>
#include <stdexcept>

namespace nugrover::linalg2 {

namespace {

constexpr cdouble kI{0.0, 1.0};

// sin(z)/z and sinh(z)/z near zero.
double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

cdouble sinhc(cdouble z) {
    if (std::abs(z) < 1e-4) {
        const cdouble z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

Matrix2c expm_hermitian(const Matrix2c& H, double t) {
    const double half_trace = 0.5 * (H(0, 0).real() + H(1, 1).real());
    const double half_diff = 0.5 * (H(0, 0).real() - H(1, 1).real());
    const cdouble off = 0.5 * (H(0, 1) + std::conj(H(1, 0)));
    const double omega = std::sqrt(half_diff * half_diff + std::norm(off));

    Matrix2c traceless;
    traceless << half_diff, off, std::conj(off), -half_diff;

    const cdouble phase = std::exp(-kI * half_trace * t);
    const double s = t * sinc(omega * t);
    Matrix2c out = std::cos(omega * t) * Matrix2c::Identity() - kI * s * traceless;
    return phase * out;
}

Matrix2c expm(const Matrix2c& M) {
    const cdouble half_trace = 0.5 * M.trace();
    const Matrix2c traceless = M - half_trace * Matrix2c::Identity();
    // traceless^2 = delta^2 I with delta^2 = -det(traceless).
    const cdouble delta = std::sqrt(-traceless.determinant());
    return std::exp(half_trace) *
           (std::cosh(delta) * Matrix2c::Identity() + sinhc(delta) * traceless);
}

LogResult logm(const Matrix2c& M) {
    const cdouble mean = 0.5 * M.trace();
    const cdouble half_gap = std::sqrt(0.25 * (M(0, 0) - M(1, 1)) * (M(0, 0) - M(1, 1)) + M(0, 1) * M(1, 0));
    const cdouble l1 = mean + half_gap;
    const cdouble l2 = mean - half_gap;
    if (std::abs(l1) == 0.0 || std::abs(l2) == 0.0) {
        throw std::domain_error("step operator not invertible");
    }

    const double scale = std::max(std::abs(l1), std::abs(l2));
    if (std::abs(half_gap) <= 1e-8 * scale) {
        // M = mean*I + K with K nearly nilpotent: log M = log(mean) I + K/mean (+ O(K^2)).
        const Matrix2c K = M - mean * Matrix2c::Identity();
        const Matrix2c K2 = K * K;
        Matrix2c value = std::log(mean) * Matrix2c::Identity() + K / mean - K2 / (2.0 * mean * mean);
        return {value, true};
    }

    // Eigenvectors from whichever row of (M - l I) is better conditioned.
    auto eigvec = [&](cdouble l) {
        const cdouble a = M(0, 0) - l;
        const cdouble b = M(0, 1);
        const cdouble c = M(1, 0);
        const cdouble d = M(1, 1) - l;
        Vector2c v;
        if (std::abs(a) + std::abs(b) >= std::abs(c) + std::abs(d)) {
            v << b, -a;
        } else {
            v << d, -c;
        }
        if (v.norm() == 0.0) {
            v << 1.0, 0.0;
        }
        return Vector2c(v / v.norm());
    };

    Matrix2c R;
    R.col(0) = eigvec(l1);
    R.col(1) = eigvec(l2);
    Matrix2c D = Matrix2c::Zero();
    D(0, 0) = std::log(l1);
    D(1, 1) = std::log(l2);
    return {R * D * R.inverse(), false};
}

std::array<double, 2> singular_values(const Matrix2c& M) {
    const Matrix2c G = M.adjoint() * M;
    const double tr = G.trace().real();
    const double det = std::max(0.0, G.determinant().real());
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double big = 0.5 * tr + disc;
    // det / big keeps the small value accurate when the two are far apart.
    const double small = big > 0.0 ? det / big : 0.0;
    return {std::sqrt(big), std::sqrt(std::max(0.0, small))};
}

double distance_from_unitarity(const Matrix2c& M) { return 1.0 - 0.5 * M.squaredNorm(); }

double hermiticity_defect(const Matrix2c& M) { return (M - M.adjoint()).cwiseAbs().maxCoeff(); }

Matrix2c align_global_phase(const Matrix2c& a, const Matrix2c& b) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(a(r, c)) == 0.0 || std::abs(b(r, c)) == 0.0) {
        return b;
    }
    const cdouble phase = (a(r, c) / std::abs(a(r, c))) / (b(r, c) / std::abs(b(r, c)));
    return phase * b;
}

}  // namespace nugrover::linalg2
