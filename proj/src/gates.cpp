// Copyright 2026 The PhononGate Authors
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

#include "phonongate/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "phonongate/error.hpp"
#include "phonongate/units.hpp"

namespace phonongate {

namespace {

constexpr double kUnitarityTol = 1e-12;

double entry_max_norm(const Matrix &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Exact exponential of -i * (m I + v . sigma) for real m and real vector v.
Matrix su2_exponential(double m, double vx, double vy, double vz) {
    double r = std::sqrt(vx * vx + vy * vy + vz * vz);
    Matrix u = Matrix::Identity(2, 2) * std::cos(r);
    if (r > 0.0) {
        double s = std::sin(r) / r;
        const cplx i(0.0, 1.0);
        u += -i * s * (vx * pauli(PauliAxis::x) + vy * pauli(PauliAxis::y) + vz * pauli(PauliAxis::z));
    }
    return std::polar(1.0, -m) * u;
}

}  // namespace

GateMatrix::GateMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() != data_.cols() || (data_.rows() != 2 && data_.rows() != 4)) {
        throw Error(ErrorCode::invalid_dimension, "gate matrices are 2x2 or 4x4");
    }
    double defect = entry_max_norm(data_.adjoint() * data_ - Matrix::Identity(data_.rows(), data_.cols()));
    if (!(defect <= kUnitarityTol)) {
        throw Error(ErrorCode::invalid_argument, "matrix is not unitary (defect " + std::to_string(defect) + ")");
    }
}

GateMatrix GateMatrix::identity(int dim) {
    return GateMatrix(Matrix::Identity(dim, dim));
}

GateMatrix GateMatrix::adjoint() const {
    return GateMatrix(data_.adjoint());
}

GateMatrix operator*(const GateMatrix &lhs, const GateMatrix &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "cannot multiply gates of different size");
    }
    return GateMatrix(lhs.data_ * rhs.data_);
}

GateMatrix kron(const GateMatrix &a, const GateMatrix &b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw Error(ErrorCode::invalid_dimension, "kron expects two single-qubit gates");
    }
    return GateMatrix(Matrix(Eigen::kroneckerProduct(a.data(), b.data())));
}

PauliAxis parse_pauli_axis(std::string_view text) {
    if (text == "x") {
        return PauliAxis::x;
    }
    if (text == "y") {
        return PauliAxis::y;
    }
    if (text == "z") {
        return PauliAxis::z;
    }
    throw Error(ErrorCode::invalid_argument, "unknown Pauli axis '" + std::string(text) + "'");
}

const Matrix &pauli(PauliAxis axis) {
    static const Matrix sx = (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
    static const Matrix sy = (Matrix(2, 2) << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0).finished();
    static const Matrix sz = (Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    switch (axis) {
        case PauliAxis::x:
            return sx;
        case PauliAxis::y:
            return sy;
        case PauliAxis::z:
            break;
    }
    return sz;
}

GateMatrix pauli_rotation(PauliAxis axis, double angle) {
    const cplx i(0.0, 1.0);
    return GateMatrix(std::cos(0.5 * angle) * Matrix::Identity(2, 2) - i * std::sin(0.5 * angle) * pauli(axis));
}

double pulse_phase(const PulseSpec &p, const QubitSubspace &q) {
    if (!std::isfinite(p.area) || !std::isfinite(p.chi_zpm)) {
        throw Error(ErrorCode::invalid_argument, "pulse area and zero-point motion must be finite");
    }
    if (p.kind == PulseKind::force) {
        return -p.area * p.chi_zpm / kHbar;
    }
    if (!std::isfinite(q.z_coeff)) {
        throw Error(ErrorCode::invalid_argument, "qubit z coefficient must be finite");
    }
    return 0.5 * p.area * p.chi_zpm * p.chi_zpm * q.z_coeff / kHbar;
}

GateMatrix force_pulse_unitary(const PulseSpec &p, const QubitSubspace &q) {
    if (p.kind != PulseKind::force) {
        throw Error(ErrorCode::invalid_argument, "expected a force pulse");
    }
    double phi = pulse_phase(p, q);
    double mean = 0.5 * (q.x00 + q.x11);
    double half_split = 0.5 * (q.x00 - q.x11);
    return GateMatrix(su2_exponential(phi * mean, phi * q.x10, 0.0, phi * half_split));
}

GateMatrix gradient_pulse_unitary(const PulseSpec &p, const QubitSubspace &q) {
    if (p.kind != PulseKind::gradient) {
        throw Error(ErrorCode::invalid_argument, "expected a gradient pulse");
    }
    double phi = pulse_phase(p, q);
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = std::polar(1.0, -phi);
    u(1, 1) = std::polar(1.0, phi);
    return GateMatrix(u);
}

double sigma_x_area(const QubitSubspace &q) {
    if (q.x10 == 0.0) {
        throw Error(ErrorCode::dark_transition, "X10 vanishes; the force pulse cannot drive 0 <-> 1");
    }
    double half_split = 0.5 * (q.x00 - q.x11);
    return 0.5 * std::numbers::pi / std::hypot(q.x10, half_split);
}

double sigma_z_phase() {
    return 0.5 * std::numbers::pi;
}

PulseSpec force_pulse_for_phase(double Phi, double chi_zpm) {
    if (!(chi_zpm > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "zero-point motion must be positive");
    }
    return PulseSpec{PulseKind::force, -Phi * kHbar / chi_zpm, chi_zpm};
}

PulseSpec gradient_pulse_for_phase(double phi, double chi_zpm, const QubitSubspace &q) {
    if (!(chi_zpm > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "zero-point motion must be positive");
    }
    if (q.z_coeff == 0.0) {
        throw Error(ErrorCode::dark_transition, "z coefficient vanishes; gradient pulses leave the qubit unchanged");
    }
    return PulseSpec{PulseKind::gradient, 2.0 * phi * kHbar / (chi_zpm * chi_zpm * q.z_coeff), chi_zpm};
}

GateMatrix exchange_unitary(double Omega, double t) {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "time must be non-negative");
    }
    double x = Omega * t;
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(3, 3) = 1.0;
    u(1, 1) = std::cos(x);
    u(2, 2) = std::cos(x);
    u(1, 2) = cplx(0.0, std::sin(x));
    u(2, 1) = cplx(0.0, std::sin(x));
    return GateMatrix(u);
}

GateMatrix cnot_sequence(double Omega, double t) {
    const double h = 0.5 * std::numbers::pi;
    GateMatrix ug = exchange_unitary(Omega, t);
    GateMatrix id = GateMatrix::identity(2);
    GateMatrix post = kron(pauli_rotation(PauliAxis::z, -h), pauli_rotation(PauliAxis::x, h) * pauli_rotation(PauliAxis::z, h));
    GateMatrix mid = kron(pauli_rotation(PauliAxis::x, h), id);
    GateMatrix pre = kron(id, pauli_rotation(PauliAxis::z, h));
    Matrix u = std::polar(1.0, 0.25 * std::numbers::pi) * (post * ug * mid * ug * pre).data();
    return GateMatrix(u);
}

GateMatrix ideal_cnot() {
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 3) = 1.0;
    u(3, 2) = 1.0;
    return GateMatrix(u);
}

double phase_aligned_distance(const Matrix &u, const Matrix &v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "matrices differ in shape");
    }
    auto dist = [&](double theta) { return entry_max_norm(u - std::polar(1.0, theta) * v); };

    constexpr int kCoarse = 720;
    const double step = 2.0 * std::numbers::pi / kCoarse;
    int best = 0;
    double best_value = dist(0.0);
    for (int k = 1; k < kCoarse; ++k) {
        double value = dist(k * step);
        if (value < best_value) {
            best_value = value;
            best = k;
        }
    }
    // Candidate from the trace overlap, exact when u = e^{i theta} v.
    cplx overlap = (v.adjoint() * u).trace();
    double theta_trace = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
    double trace_value = dist(theta_trace);

    double lo = (best - 1) * step;
    double hi = (best + 1) * step;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = dist(x1);
    double f2 = dist(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = dist(x2);
        }
    }
    return std::min({best_value, trace_value, f1, f2});
}

double phase_aligned_distance(const GateMatrix &u, const GateMatrix &v) {
    return phase_aligned_distance(u.data(), v.data());
}

}  // namespace phonongate
