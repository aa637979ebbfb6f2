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

#pragma once

#include <string_view>

#include "phonongate/duffing.hpp"
#include "phonongate/fock.hpp"

namespace phonongate {

/// Unitary on one (dim 2) or two (dim 4) qubits. Basis order {00, 01, 10, 11},
/// first factor is the control.
class GateMatrix {
   public:
    explicit GateMatrix(Matrix data);

    static GateMatrix identity(int dim);

    int dim() const noexcept {
        return static_cast<int>(data_.rows());
    }
    const Matrix &data() const noexcept {
        return data_;
    }
    cplx operator()(Eigen::Index r, Eigen::Index c) const {
        return data_(r, c);
    }
    GateMatrix adjoint() const;

    friend GateMatrix operator*(const GateMatrix &lhs, const GateMatrix &rhs);

   private:
    Matrix data_;
};

/// a (x) b for single-qubit gates.
GateMatrix kron(const GateMatrix &a, const GateMatrix &b);

enum class PauliAxis { x, y, z };

PauliAxis parse_pauli_axis(std::string_view text);

const Matrix &pauli(PauliAxis axis);

/// exp(-i angle sigma / 2).
GateMatrix pauli_rotation(PauliAxis axis, double angle);

enum class PulseKind { force, gradient };

struct PulseSpec {
    PulseKind kind = PulseKind::force;
    /// Integral of F0 (N s) or of W00 (J s / m^2).
    double area = 0.0;
    double chi_zpm = 0.0;
};

/// Phi = -area chi / hbar for a force pulse;
/// phi = area chi^2 z_coeff / (2 hbar) for a gradient pulse.
double pulse_phase(const PulseSpec &p, const QubitSubspace &q);

/// exp(-i Phi X_q), X_q the qubit block of the quadrature.
GateMatrix force_pulse_unitary(const PulseSpec &p, const QubitSubspace &q);

/// diag(exp(-i phi), exp(i phi)).
GateMatrix gradient_pulse_unitary(const PulseSpec &p, const QubitSubspace &q);

/// Smallest Phi > 0 giving full population transfer between |0> and |1>;
/// sigma_x up to a global phase when the diagonal of X_q is balanced.
double sigma_x_area(const QubitSubspace &q);

/// Gradient phase pi/2, where the pulse is sigma_z up to a global phase.
double sigma_z_phase();

/// Pulse areas that realize the given phases.
PulseSpec force_pulse_for_phase(double Phi, double chi_zpm);
PulseSpec gradient_pulse_for_phase(double phi, double chi_zpm, const QubitSubspace &q);

/// Exchange propagator with cos(Omega t) and i sin(Omega t) in the |01>,|10> block.
GateMatrix exchange_unitary(double Omega, double t);

/// Exchange-based CNOT sequence; equals the ideal CNOT at Omega t = pi / 2.
GateMatrix cnot_sequence(double Omega, double t);

GateMatrix ideal_cnot();

/// min over theta of max_ij |U_ij - exp(i theta) V_ij|.
double phase_aligned_distance(const Matrix &u, const Matrix &v);
double phase_aligned_distance(const GateMatrix &u, const GateMatrix &v);

}  // namespace phonongate
