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

#include "phonongate/duffing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phonongate/error.hpp"

namespace phonongate {

namespace {

constexpr int kHeadroom = 2;

// Projection of X^power onto the first dim levels, computed with headroom.
Matrix projected_quadrature_power(int dim, int power, double scale) {
    int padded = dim + kHeadroom;
    Matrix b = annihilation_op(padded).data();
    Matrix q = scale * (b + b.adjoint());
    Matrix p = Matrix::Identity(padded, padded);
    for (int k = 0; k < power; ++k) {
        p = p * q;
    }
    return p.topLeftCorner(dim, dim);
}

}  // namespace

Operator quartic_quadrature(int dim) {
    if (dim < 2) {
        throw Error(ErrorCode::invalid_dimension, "dim must be >= 2");
    }
    return Operator(SpaceDescriptor({dim}), projected_quadrature_power(dim, 4, 1.0));
}

Operator duffing_hamiltonian(double omega_m, double lambda, int dim) {
    if (dim < 4) {
        throw Error(ErrorCode::truncation_too_small, "Duffing Hamiltonian needs dim >= 4, got " + std::to_string(dim));
    }
    if (!(omega_m > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "omega_m must be positive");
    }
    return omega_m * number_op(dim) + (lambda / 2.0) * quartic_quadrature(dim);
}

DuffingSpectrum spectrum(const Operator &H, int dim_trust) {
    if (H.space().factor_count() != 1) {
        throw Error(ErrorCode::dimension_mismatch, "spectrum expects a single-beam operator");
    }
    H.require_hermitian(1e-12);
    int dim = static_cast<int>(H.rows());
    if (dim_trust < 1 || dim_trust > dim - 4) {
        throw Error(
            ErrorCode::invalid_argument,
            "dim_trust must lie in [1, dim - 4], got " + std::to_string(dim_trust) + " for dim " + std::to_string(dim));
    }

    Matrix herm = 0.5 * (H.data() + H.data().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::invalid_argument, "eigendecomposition failed");
    }

    DuffingSpectrum s;
    s.dim = dim;
    s.dim_trust = dim_trust;
    s.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    s.eigvecs = solver.eigenvectors();

    // Fix each eigenvector's phase so its overlap with the same-index Fock
    // state is real and non-negative (largest component if that overlap vanishes).
    for (int n = 0; n < dim; ++n) {
        auto col = s.eigvecs.col(n);
        Eigen::Index pivot = n;
        if (std::abs(col(n)) < 1e-12) {
            col.cwiseAbs().maxCoeff(&pivot);
        }
        cplx c = col(pivot);
        col *= std::conj(c) / std::abs(c);
        col(pivot) = std::abs(col(pivot));
    }

    Matrix x_fock = quadrature_op(dim).data();
    s.x = s.eigvecs.adjoint() * x_fock * s.eigvecs;
    s.x2 = s.x * s.x;
    s.delta.resize(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            s.delta(n, m) = s.energies[n] - s.energies[m];
        }
    }
    return s;
}

DuffingSpectrum duffing_spectrum(double omega_m, double lambda, int dim, int dim_trust) {
    DuffingSpectrum s = spectrum(duffing_hamiltonian(omega_m, lambda, dim), dim_trust);
    s.omega_m = omega_m;
    s.lambda = lambda;
    return s;
}

QubitSubspace qubit_subspace(const DuffingSpectrum &s) {
    if (s.dim_trust < 2) {
        throw Error(ErrorCode::invalid_argument, "qubit subspace needs dim_trust >= 2");
    }
    QubitSubspace q{};
    q.omega_q = s.delta(1, 0);
    q.x10 = std::abs(s.x(0, 1));
    q.x00 = s.x(0, 0).real();
    q.x11 = s.x(1, 1).real();
    q.z_coeff = 0.5 * (s.x2(0, 0).real() - s.x2(1, 1).real());
    return q;
}

ConvergenceReport truncation_convergence(double omega_m, double lambda, int dim_small, int dim_large, int levels) {
    if (levels < 1 || levels > dim_small || dim_large < dim_small) {
        throw Error(ErrorCode::invalid_argument, "need 1 <= levels <= dim_small <= dim_large");
    }
    auto energies = [&](int dim) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(duffing_hamiltonian(omega_m, lambda, dim).data(), Eigen::EigenvaluesOnly);
        return Eigen::VectorXd(solver.eigenvalues());
    };
    Eigen::VectorXd small = energies(dim_small);
    Eigen::VectorXd large = energies(dim_large);
    ConvergenceReport report;
    for (int n = 0; n < levels; ++n) {
        double change = std::abs(large(n) / small(n) - 1.0);
        report.relative_change.push_back(change);
        report.max_relative_change = std::max(report.max_relative_change, change);
    }
    return report;
}

}  // namespace phonongate
