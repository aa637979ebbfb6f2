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

#include <functional>
#include <string>
#include <vector>

namespace phonongate {

/// One sample of the electrode field profile along the beam.
struct FieldSample {
    double x;   ///< position along the beam (m)
    double w1;  ///< dW/dy at y = 0 (J/m^2)
    double w2;  ///< d^2W/dy^2 at y = 0 (J/m^3)
};

/// Energy-density derivatives of the tip-electrode field along a beam of
/// length `length`. The polarizabilities are carried for bookkeeping only;
/// all computations use the pre-evaluated w1, w2 densities.
struct FieldProfile {
    double length = 0.0;
    std::vector<FieldSample> samples;
    double alpha_par = 0.0;
    double alpha_perp = 0.0;

    /// Throws quadrature_error unless there are >= 2 samples sorted by x in [0, length].
    void validate() const;
};

/// Reads a profile from CSV with a mandatory `x,w1,w2` header (SI units).
FieldProfile load_field_profile_csv(const std::string &path, double length);

struct BeamParams {
    double m_star;    ///< effective mass (kg)
    double omega_m0;  ///< intrinsic angular frequency (rad/s)
    double beta;      ///< quartic stiffness (J/m^4)
    double lambda0;   ///< intrinsic nonlinearity rate (rad/s)

    /// Builds a consistent parameter set, deriving lambda0 = beta chi_zpm^4 / (2 hbar).
    static BeamParams from_mechanics(double m_star, double omega_m0, double beta);

    /// sqrt(hbar / (2 m* omega_m0)) in metres.
    double zero_point_motion() const;
    /// Checks positivity and lambda0 consistency (1e-10 relative).
    void validate() const;
};

struct ModeIntegrals {
    double F0;   ///< integral of w1 phi0 dx (N)
    double W00;  ///< integral of w2 phi0^2 dx (J/m^2)
};

using ModeFunction = std::function<double(double)>;

/// Trapezoidal projection of the field profile onto the mode `phi0`.
ModeIntegrals mode_integrals(const FieldProfile &profile, const ModeFunction &phi0);

/// Softened frequency omega_m0 sqrt(1 - |W00| / (m* omega_m0^2)).
/// Throws buckling_threshold when |W00| >= m* omega_m0^2.
double tuned_frequency(const BeamParams &params, double W00);

/// lambda / lambda0 = omega_m0^2 / omega_m^2.
double nonlinearity_enhancement(double omega_m0, double omega_m);

/// Fundamental clamped-clamped Euler-Bernoulli mode, normalized to unit
/// square integral over [0, L].
double clamped_mode_shape(double x, double L);

}  // namespace phonongate
