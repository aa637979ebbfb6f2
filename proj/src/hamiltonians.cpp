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

#include "phonongate/hamiltonians.hpp"

#include <cmath>
#include <string>

#include "phonongate/dynamics.hpp"
#include "phonongate/error.hpp"
#include "phonongate/units.hpp"

namespace phonongate {

std::string_view to_string(QuadratureConvention c) {
    return c == QuadratureConvention::symmetric ? "symmetric" : "bare";
}

QuadratureConvention parse_quadrature_convention(std::string_view text) {
    if (text == "symmetric") {
        return QuadratureConvention::symmetric;
    }
    if (text == "bare") {
        return QuadratureConvention::bare;
    }
    throw Error(ErrorCode::invalid_argument, "quadrature convention must be 'symmetric' or 'bare'");
}

PhysicalParams PhysicalParams::with_derived_damping() const {
    PhysicalParams p = *this;
    if (Q) {
        p.gamma_m = mech_damping(omega_G, *Q);
    }
    if (T) {
        p.n_th = thermal_occupation(omega_G, *T);
    }
    return p;
}

void PhysicalParams::validate() const {
    auto nonneg = [](double v, const char *name) {
        if (!(v >= 0.0)) {
            throw Error(ErrorCode::invalid_argument, std::string(name) + " must be non-negative");
        }
    };
    nonneg(g_G, "g_G");
    nonneg(G_tilde, "G_tilde");
    nonneg(omega_G, "omega_G");
    nonneg(lambda, "lambda");
    nonneg(kappa, "kappa");
    nonneg(gamma_m, "gamma_m");
    nonneg(n_th, "n_th");
    if (!std::isfinite(Delta)) {
        throw Error(ErrorCode::invalid_argument, "Delta must be finite");
    }
    for (auto [v, name] : {std::pair{eps_L, "eps_L"}, {omega_L, "omega_L"}, {P_in, "P_in"}, {g0, "g0"}, {T, "T"}, {Q, "Q"}}) {
        if (v) {
            nonneg(*v, name);
        }
    }
    if (Q && omega_G > 0.0) {
        double expected = omega_G / *Q;
        if (std::abs(gamma_m - expected) > 1e-10 * expected) {
            throw Error(ErrorCode::invalid_argument, "gamma_m must equal omega_G / Q");
        }
    }
}

double drive_amplitude(double P_in, double kappa, double omega_L) {
    if (!(P_in >= 0.0) || !(kappa > 0.0) || !(omega_L > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "drive amplitude needs P_in >= 0 and kappa, omega_L > 0");
    }
    return 2.0 * std::sqrt(P_in * kappa / (kHbar * omega_L));
}

cplx steady_amplitude(double eps_L, double Delta, double kappa) {
    cplx denom(2.0 * Delta, kappa);
    if (denom == cplx(0.0, 0.0)) {
        throw Error(ErrorCode::invalid_argument, "steady amplitude undefined for Delta = kappa = 0");
    }
    return eps_L / denom;
}

double enhanced_coupling(cplx alpha, double g0) {
    if (!(g0 >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "g0 must be non-negative");
    }
    return std::sqrt(2.0) * std::abs(alpha) * g0;
}

Operator system_hamiltonian(const PhysicalParams &p, const SpaceDescriptor &space) {
    if (space.factor_count() != 3) {
        throw Error(ErrorCode::dimension_mismatch, "system space must be [n_cav, n_b, n_b]");
    }
    const int n_cav = space.dim(0);
    const int n_b = space.dim(1);
    if (space.dim(2) != n_b) {
        throw Error(ErrorCode::dimension_mismatch, "both beams must share one truncation");
    }

    Operator a = annihilation_op(n_cav);
    double xc_scale = p.quadrature == QuadratureConvention::symmetric ? 1.0 / std::sqrt(2.0) : 1.0;
    Operator xc = embed(xc_scale * (a + a.adjoint()), space, 0);
    Operator x1 = embed(quadrature_op(n_b), space, 1);
    Operator x2 = embed(quadrature_op(n_b), space, 2);
    Operator beam = p.omega_G * number_op(n_b) + (p.lambda / 2.0) * quartic_quadrature(n_b);

    Operator h = (-p.Delta) * embed(number_op(n_cav), space, 0);
    h = h + p.g_G * (xc * (x1 + x2));
    h = h - p.G_tilde * (x1 * x2);
    h = h + embed(beam, space, 1) + embed(beam, space, 2);
    // Numerically exact Hermitian part; the products above are Hermitian up to rounding.
    return Operator(space, 0.5 * (h.data() + h.data().adjoint()));
}

double rabi_rate(double Delta, double g_G, double omega_G, double x_g) {
    double denom = Delta * Delta - omega_G * omega_G;
    if (denom == 0.0) {
        throw Error(ErrorCode::resonance_proximity, "Delta^2 == omega_G^2");
    }
    return Delta * x_g * x_g * g_G * g_G / denom;
}

EffectiveGateParams effective_gate_hamiltonian(const DuffingSpectrum &spec, double g_G, double Delta) {
    const int trust = spec.dim_trust;
    if (trust < 2) {
        throw Error(ErrorCode::invalid_argument, "effective Hamiltonian needs dim_trust >= 2");
    }
    for (int n = 0; n < trust; ++n) {
        for (int m = 0; m < trust; ++m) {
            if (n == m) {
                continue;
            }
            double gap = std::abs(Delta - spec.delta(n, m));
            if (gap == 0.0 || gap < 10.0 * std::abs(g_G)) {
                throw Error(
                    ErrorCode::resonance_proximity,
                    "|Delta - delta_" + std::to_string(n) + std::to_string(m) + "| = " + std::to_string(gap) +
                        " is within 10 g_G");
            }
        }
    }

    EffectiveGateParams out;
    out.x_g = std::abs(spec.x(1, 0));
    out.omega_g = spec.delta(1, 0);
    out.Omega = rabi_rate(Delta, g_G, out.omega_g, out.x_g);

    // |1><0|_1 |0><1|_2 collects one term with the partner's lowering
    // transition (delta_01 = -omega_G) and one with its raising transition.
    double g2x2 = g_G * g_G * std::norm(spec.x(1, 0));
    out.exchange_from_pairs = g2x2 / (2.0 * (Delta + out.omega_g)) + g2x2 / (2.0 * (Delta - out.omega_g));

    double ground = 0.0;
    double excited = 0.0;
    for (int m = 0; m < trust; ++m) {
        ground += 0.5 * g_G * g_G * std::norm(spec.x(0, m)) / (Delta + spec.delta(0, m));
        excited += 0.5 * g_G * g_G * std::norm(spec.x(1, m)) / (Delta + spec.delta(1, m));
    }
    out.stark = {ground, excited};
    return out;
}

double rabi_angle(double Omega, double t) {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "time must be non-negative");
    }
    return Omega * t;
}

double rabi_angle(
    std::span<const double> times, std::span<const double> g_samples, double Delta, double omega_G, double x_g) {
    if (times.size() != g_samples.size() || times.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "coupling profile needs >= 2 matching samples");
    }
    if (times.front() < 0.0) {
        throw Error(ErrorCode::invalid_argument, "time must be non-negative");
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        double dt = times[k] - times[k - 1];
        if (!(dt >= 0.0)) {
            throw Error(ErrorCode::invalid_argument, "profile times must be ascending");
        }
        integral += 0.5 * dt * (g_samples[k] * g_samples[k] + g_samples[k - 1] * g_samples[k - 1]);
    }
    return rabi_rate(Delta, 1.0, omega_G, x_g) * integral;
}

}  // namespace phonongate
