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

#include "phonongate/electrostatics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "phonongate/csv.hpp"
#include "phonongate/error.hpp"
#include "phonongate/units.hpp"

namespace phonongate {

namespace {

// First root of cos(k) cosh(k) = 1.
constexpr double kClampedRoot = 4.730040744862704;

}  // namespace

void FieldProfile::validate() const {
    if (samples.size() < 2) {
        throw Error(ErrorCode::quadrature_error, "field profile needs at least 2 samples");
    }
    if (!(length > 0.0)) {
        throw Error(ErrorCode::quadrature_error, "beam length must be positive");
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
        double x = samples[k].x;
        if (x < 0.0 || x > length) {
            throw Error(ErrorCode::quadrature_error, "sample position outside [0, L]");
        }
        if (k > 0 && x < samples[k - 1].x) {
            throw Error(ErrorCode::quadrature_error, "samples must be sorted by x");
        }
    }
}

FieldProfile load_field_profile_csv(const std::string &path, double length) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open " + path);
    }
    CsvTable table = read_csv(in);
    if (table.header != std::vector<std::string>{"x", "w1", "w2"}) {
        throw Error(ErrorCode::quadrature_error, "field profile header must be exactly x,w1,w2");
    }
    FieldProfile profile;
    profile.length = length;
    for (const auto &row : table.rows) {
        profile.samples.push_back({row[0], row[1], row[2]});
    }
    profile.validate();
    return profile;
}

BeamParams BeamParams::from_mechanics(double m_star, double omega_m0, double beta) {
    BeamParams p{m_star, omega_m0, beta, 0.0};
    double chi = p.zero_point_motion();
    p.lambda0 = beta * std::pow(chi, 4) / (2.0 * kHbar);
    p.validate();
    return p;
}

double BeamParams::zero_point_motion() const {
    if (!(m_star > 0.0) || !(omega_m0 > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "m* and omega_m0 must be positive");
    }
    return std::sqrt(kHbar / (2.0 * m_star * omega_m0));
}

void BeamParams::validate() const {
    double chi = zero_point_motion();
    double expected = beta * std::pow(chi, 4) / (2.0 * kHbar);
    double scale = std::max(std::abs(expected), std::abs(lambda0));
    if (scale > 0.0 && std::abs(expected - lambda0) > 1e-10 * scale) {
        throw Error(ErrorCode::invalid_argument, "lambda0 is inconsistent with beta chi_zpm^4 / (2 hbar)");
    }
}

ModeIntegrals mode_integrals(const FieldProfile &profile, const ModeFunction &phi0) {
    profile.validate();
    ModeIntegrals out{0.0, 0.0};
    const auto &s = profile.samples;
    double prev_f = s[0].w1 * phi0(s[0].x);
    double prev_w = s[0].w2 * phi0(s[0].x) * phi0(s[0].x);
    for (std::size_t k = 1; k < s.size(); ++k) {
        double phi = phi0(s[k].x);
        double f = s[k].w1 * phi;
        double w = s[k].w2 * phi * phi;
        double dx = s[k].x - s[k - 1].x;
        out.F0 += 0.5 * dx * (f + prev_f);
        out.W00 += 0.5 * dx * (w + prev_w);
        prev_f = f;
        prev_w = w;
    }
    return out;
}

double tuned_frequency(const BeamParams &params, double W00) {
    if (!(params.m_star > 0.0) || !(params.omega_m0 > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "m* and omega_m0 must be positive");
    }
    double stiffness = params.m_star * params.omega_m0 * params.omega_m0;
    double ratio = std::abs(W00) / stiffness;
    if (ratio >= 1.0) {
        throw Error(ErrorCode::buckling_threshold, "|W00| / (m* omega_m0^2) = " + std::to_string(ratio) + " >= 1");
    }
    return params.omega_m0 * std::sqrt(1.0 - ratio);
}

double nonlinearity_enhancement(double omega_m0, double omega_m) {
    if (!(omega_m0 > 0.0) || !(omega_m > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "frequencies must be positive");
    }
    return (omega_m0 * omega_m0) / (omega_m * omega_m);
}

double clamped_mode_shape(double x, double L) {
    if (!(L > 0.0) || x < 0.0 || x > L) {
        throw Error(ErrorCode::invalid_argument, "x must lie in [0, L]");
    }
    const double k = kClampedRoot;
    const double sigma = (std::cosh(k) - std::cos(k)) / (std::sinh(k) - std::sin(k));
    double u = k * x / L;
    double shape = (std::cosh(u) - std::cos(u)) - sigma * (std::sinh(u) - std::sin(u));
    // With this sigma the unnormalized shape has mean square exactly 1 over [0, L].
    return shape / std::sqrt(L);
}

}  // namespace phonongate
