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
#include <vector>

#include "phonongate/fock.hpp"

namespace phonongate {

/// Eigen-decomposition of a single anharmonic beam (hbar = 1, energies in rad/s).
struct DuffingSpectrum {
    int dim = 0;
    /// Number of lowest levels considered converged (dim_trust <= dim - 4).
    int dim_trust = 0;
    std::optional<double> omega_m;
    std::optional<double> lambda;
    /// Ascending eigenvalues E_n.
    std::vector<double> energies;
    /// Columns are eigenvectors in the Fock basis, phased so <n|n_eig> >= 0.
    Matrix eigvecs;
    /// X_nm = <n|X|m> in the energy eigenbasis, X = (b + b^dagger)/sqrt(2).
    Matrix x;
    /// (X X)_nm in the energy eigenbasis.
    Matrix x2;
    /// delta_nm = E_n - E_m.
    Eigen::MatrixXd delta;
};

/// Lowest-two-level data used by single- and two-qubit gates.
struct QubitSubspace {
    double omega_q;  ///< delta_10 (rad/s)
    double x10;      ///< |X_01|
    double x00;      ///< Re X_00 (vanishes by parity)
    double x11;      ///< Re X_11
    double z_coeff;  ///< ((X^2)_00 - (X^2)_11) / 2
};

/// (b + b^dagger)^4 restricted to the first `dim` Fock levels. The power is
/// formed with two levels of headroom so every retained entry equals the
/// matrix element of the untruncated operator.
Operator quartic_quadrature(int dim);

/// H = omega_m b^dagger b + (lambda / 2) (b^dagger + b)^4; dim >= 4.
Operator duffing_hamiltonian(double omega_m, double lambda, int dim);

/// Diagonalizes a Hermitian single-beam Hamiltonian.
DuffingSpectrum spectrum(const Operator &H, int dim_trust);

/// Convenience: builds duffing_hamiltonian(omega_m, lambda, dim) and diagonalizes it.
DuffingSpectrum duffing_spectrum(double omega_m, double lambda, int dim = 16, int dim_trust = 4);

QubitSubspace qubit_subspace(const DuffingSpectrum &s);

struct ConvergenceReport {
    /// |E_n(dim_large) / E_n(dim_small) - 1| for n < levels.
    std::vector<double> relative_change;
    double max_relative_change = 0.0;
};

/// Compares the lowest `levels` energies between two truncations.
ConvergenceReport truncation_convergence(
    double omega_m, double lambda, int dim_small = 12, int dim_large = 16, int levels = 4);

}  // namespace phonongate
