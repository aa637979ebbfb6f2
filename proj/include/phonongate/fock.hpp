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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace phonongate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered tensor factors of a truncated composite Fock space.
///
/// Every composite operator in the library is laid out as
/// dims[0] (x) dims[1] (x) ..., i.e. dims[0] is the slowest-varying index of
/// the flattened basis. `embed` is the only place that builds Kronecker
/// products over a space; nothing else should hand-roll them.
class SpaceDescriptor {
   public:
    explicit SpaceDescriptor(std::vector<int> dims);

    const std::vector<int> &dims() const noexcept {
        return dims_;
    }
    std::size_t factor_count() const noexcept {
        return dims_.size();
    }
    int dim(std::size_t slot) const;
    Eigen::Index total() const noexcept {
        return total_;
    }

    /// Flattened basis index of the product state |n_0, n_1, ...>.
    Eigen::Index index_of(const std::vector<int> &occupations) const;

    bool operator==(const SpaceDescriptor &other) const {
        return dims_ == other.dims_;
    }

   private:
    std::vector<int> dims_;
    Eigen::Index total_ = 1;
};

/// Dense complex operator over a SpaceDescriptor. Immutable after construction.
class Operator {
   public:
    Operator(SpaceDescriptor space, Matrix data);

    static Operator identity(const SpaceDescriptor &space);
    static Operator zero(const SpaceDescriptor &space);

    const SpaceDescriptor &space() const noexcept {
        return space_;
    }
    const Matrix &data() const noexcept {
        return data_;
    }
    Eigen::Index rows() const noexcept {
        return data_.rows();
    }

    Operator adjoint() const;

    /// max|A - A^dagger| <= rel_tol * max|A| (a zero operator is Hermitian).
    bool is_hermitian(double rel_tol = 1e-12) const;
    /// Throws not_hermitian when is_hermitian(rel_tol) fails.
    const Operator &require_hermitian(double rel_tol = 1e-12) const;

    friend Operator operator+(const Operator &lhs, const Operator &rhs);
    friend Operator operator-(const Operator &lhs, const Operator &rhs);
    friend Operator operator*(const Operator &lhs, const Operator &rhs);
    friend Operator operator*(cplx scale, const Operator &op);
    friend Operator operator*(double scale, const Operator &op);

   private:
    SpaceDescriptor space_;
    Matrix data_;
};

enum class StateKind { ket, density };

/// Pure state or density matrix over a SpaceDescriptor.
///
/// Kets are normalized to 1e-10. Density matrices are Hermitian to 1e-10,
/// unit trace to 1e-8 and have no eigenvalue below -1e-8.
class QuantumState {
   public:
    static QuantumState ket(SpaceDescriptor space, Vector amplitudes);
    static QuantumState density(SpaceDescriptor space, Matrix rho);

    StateKind kind() const noexcept {
        return kind_;
    }
    bool is_ket() const noexcept {
        return kind_ == StateKind::ket;
    }
    const SpaceDescriptor &space() const noexcept {
        return space_;
    }
    /// Throws invalid_state for a density matrix.
    const Vector &amplitudes() const;
    /// |psi><psi| for kets, the stored matrix otherwise.
    Matrix density_matrix() const;
    QuantumState to_density() const;

   private:
    QuantumState(SpaceDescriptor space, StateKind kind, Vector ket, Matrix rho);

    SpaceDescriptor space_;
    StateKind kind_;
    Vector ket_;
    Matrix rho_;
};

/// b on a single factor of dimension `dim`: <n-1|b|n> = sqrt(n).
Operator annihilation_op(int dim);
Operator creation_op(int dim);
Operator number_op(int dim);
/// X = (b + b^dagger) / sqrt(2).
Operator quadrature_op(int dim);

/// Lifts a single-factor operator into `space`, acting as identity on every
/// other factor.
Operator embed(const Operator &op, const SpaceDescriptor &space, std::size_t slot);

/// <psi|A|psi> for kets, Tr(A rho) for density matrices.
cplx expectation(const Operator &op, const QuantumState &state);

/// Reduced density matrix on the factors listed in `keep` (sorted, unique).
QuantumState partial_trace(const QuantumState &state, const std::vector<std::size_t> &keep);

/// Same as partial_trace but on a raw matrix without state validation.
Matrix partial_trace_matrix(const SpaceDescriptor &space, const Matrix &rho, const std::vector<std::size_t> &keep);

/// Product basis ket |n_0, n_1, ...>.
QuantumState fock_ket(const SpaceDescriptor &space, const std::vector<int> &occupations);

/// Smallest eigenvalue of the Hermitian part of `rho`.
double min_eigenvalue(const Matrix &rho);

/// max_ij |A_ij - conj(A_ji)|.
double hermiticity_defect(const Matrix &a);

}  // namespace phonongate
