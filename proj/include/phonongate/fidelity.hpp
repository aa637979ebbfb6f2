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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonongate/fock.hpp"
#include "phonongate/gates.hpp"
#include "phonongate/trajectory.hpp"

namespace phonongate {

/// `overlap` is <psi|rho|psi>; `root` is its square root (the Uhlmann
/// fidelity of a pure target).
enum class FidelityMeasure { overlap, root };

std::string_view to_string(FidelityMeasure m);
FidelityMeasure parse_fidelity_measure(std::string_view text);

/// <target|rho|target> without clamping.
double overlap_fidelity(const Matrix &rho, const Vector &target);

double apply_measure(double overlap, FidelityMeasure measure);

/// <target|rho|target> clamped to [0, 1]; values further than 1e-9 outside
/// that range are rejected.
double state_fidelity(const QuantumState &rho, const QuantumState &target);

/// |<psi|CNOT U(t)|psi>|^2 for psi = a|00> + b|01> + c|10> + d|11>,
/// expanded in trigonometric form.
double gate_fidelity_closed(cplx a, cplx b, cplx c, cplx d, double Omega_t);

/// |<psi|CNOT^dagger U|psi>|^2.
double gate_fidelity_matrix(const Vector &psi, const GateMatrix &u);

/// Bloch-sphere averages of the exchange CNOT fidelity.
double avg_fidelity_entangled(double Omega_t);
double avg_fidelity_separable(double Omega_t);

struct NamedState {
    std::string name;
    Vector amplitudes;
};

enum class FixedList {
    /// |00>, |01>, |10>, |11>.
    basis,
    /// |00>, |01>, |11>.
    basis_without_10,
    /// (|00>+|01>), (|00>+|10>), (|01>+|11>), (|10>+|11>), normalized.
    pairs,
    /// Equal superpositions of three basis states, omitting |11>, |10>, |01>, |00> in turn.
    triples,
    /// Equal superposition of all four basis states.
    uniform,
};

std::vector<NamedState> fixed_list(FixedList list);

/// Pointwise mean of `series` over trajectories sharing one time grid.
Trajectory average_over_list(std::span<const Trajectory> members, std::string_view series = "fidelity");

enum class BlochFamily {
    /// cos(t/2)|00> + e^{ip} sin(t/2)|11>.
    schmidt,
    /// Product of two single-qubit Bloch states (four angles).
    separable,
    /// sin(t/2)|00> + e^{-ip} cos(t/2)(|01>+|10>)/sqrt2.
    Phi1,
    /// sin(t/2)|00> + e^{-ip} cos(t/2)(|01>+|11>)/sqrt2.
    Phi2,
    /// sin(t/2)|00> + e^{-ip} cos(t/2)(|10>+|11>)/sqrt2.
    Phi3,
    /// sin(t/2)|01> + e^{-ip} cos(t/2)(|10>+|11>)/sqrt2.
    Phi4,
    /// [sin(t/2)(|00>+|01>) + e^{-ip} cos(t/2)(|10>+|11>)]/sqrt2.
    Psi,
};

std::string_view to_string(BlochFamily f);
BlochFamily parse_bloch_family(std::string_view text);

/// Number of angles: 4 for the separable family, 2 otherwise.
int angle_count(BlochFamily f);

/// Normalized member for angles (theta, phi) or (theta1, phi1, theta2, phi2).
Vector family_state(BlochFamily f, std::span<const double> angles);

struct BlochGrid {
    int n_theta = 64;
    int n_phi = 64;
};

struct BlochSample {
    Vector state;
    double weight;
};

/// Trapezoid in theta weighted by sin(theta), periodic rectangle rule in phi;
/// weights sum to 1.
std::vector<BlochSample> bloch_samples(BlochFamily f, const BlochGrid &grid);

using StateEvaluator = std::function<std::vector<double>(const Vector &state)>;

/// Weighted average of evaluator(state) over the family; the evaluator must
/// return one value per time and be reentrant when jobs > 1.
Trajectory bloch_average(
    BlochFamily f,
    std::vector<double> times,
    const StateEvaluator &evaluator,
    const BlochGrid &grid,
    int jobs = 1,
    std::string_view series = "fidelity");

}  // namespace phonongate
