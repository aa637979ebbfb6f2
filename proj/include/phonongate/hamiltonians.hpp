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

#include <optional>
#include <span>
#include <string_view>

#include "phonongate/duffing.hpp"
#include "phonongate/fock.hpp"

namespace phonongate {

/// How the cavity quadrature X_c is normalized in the linearized coupling.
///   symmetric: X_c = (a + a^dagger) / sqrt(2), mirroring X_j.
///   bare:      X_c = (a + a^dagger), i.e. (alpha* a + alpha a^dagger)/|alpha| for real alpha > 0.
enum class QuadratureConvention { symmetric, bare };

std::string_view to_string(QuadratureConvention c);
QuadratureConvention parse_quadrature_convention(std::string_view text);

/// Physical constants of one scenario. Every frequency is angular (rad/s).
struct PhysicalParams {
    double Delta = 0.0;    ///< omega_L - omega_c
    double g_G = 0.0;      ///< enhanced optomechanical coupling
    double G_tilde = 0.0;  ///< beam-beam coupling
    double omega_G = 0.0;  ///< gate-beam mechanical frequency
    double lambda = 0.0;   ///< Duffing rate (already enhanced)
    double kappa = 0.0;    ///< cavity decay
    double gamma_m = 0.0;  ///< mechanical damping
    double n_th = 0.0;     ///< bath occupation
    std::optional<double> eps_L;    ///< drive amplitude (1/s)
    std::optional<double> omega_L;  ///< laser frequency
    std::optional<double> P_in;     ///< input power (W)
    std::optional<double> g0;       ///< vacuum optomechanical coupling
    std::optional<double> T;        ///< bath temperature (K)
    std::optional<double> Q;        ///< mechanical quality factor
    QuadratureConvention quadrature = QuadratureConvention::symmetric;

    /// Fills gamma_m from Q and n_th from T where those are set.
    PhysicalParams with_derived_damping() const;
    /// Non-negative rates; gamma_m = omega_G / Q (1e-10 relative) when Q is set.
    void validate() const;
};

struct StarkShifts {
    double ground;   ///< coefficient of |0><0|
    double excited;  ///< coefficient of |1><1|
};

struct EffectiveGateParams {
    /// Exchange rate Omega = Delta X_G^2 g_G^2 / (Delta^2 - omega_G^2) (rad/s).
    double Omega = 0.0;
    /// Same coefficient assembled from the two cavity-mediated pair terms.
    double exchange_from_pairs = 0.0;
    /// Per-qubit diagonal terms; both gate qubits share one spectrum.
    StarkShifts stark{};
    double x_g = 0.0;
    double omega_g = 0.0;
};

/// eps_L = 2 sqrt(P_in kappa / (hbar omega_L)).
double drive_amplitude(double P_in, double kappa, double omega_L);

/// alpha = eps_L / (2 Delta + i kappa).
cplx steady_amplitude(double eps_L, double Delta, double kappa);

/// g = sqrt(2) |alpha| g0.
double enhanced_coupling(cplx alpha, double g0);

/// Linearized Hamiltonian on [n_cav, n_b, n_b]:
///   -Delta a^dag a + g_G X_c (X_1 + X_2) - G~ X_1 X_2 + sum_j [omega_G b_j^dag b_j + lambda/2 (b_j + b_j^dag)^4].
Operator system_hamiltonian(const PhysicalParams &p, const SpaceDescriptor &space);

/// Omega = Delta x_g^2 g_G^2 / (Delta^2 - omega_G^2).
double rabi_rate(double Delta, double g_G, double omega_G, double x_g);

/// Dispersive two-qubit exchange from a beam spectrum. Throws
/// resonance_proximity when |Delta - delta_nm| < 10 g_G for any pair of
/// trusted levels.
EffectiveGateParams effective_gate_hamiltonian(const DuffingSpectrum &spec, double g_G, double Delta);

/// Omega_G(t) = Omega t.
double rabi_angle(double Omega, double t);

/// Omega_G(t) for a sampled coupling profile g_G(t_k):
/// Delta x_g^2 / (Delta^2 - omega_G^2) * trapezoid(g_G^2).
double rabi_angle(
    std::span<const double> times, std::span<const double> g_samples, double Delta, double omega_G, double x_g);

}  // namespace phonongate
