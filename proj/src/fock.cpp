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

#include "phonongate/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "phonongate/error.hpp"

namespace phonongate {

namespace {

void require_same_space(const SpaceDescriptor &a, const SpaceDescriptor &b, const char *what) {
    if (!(a == b)) {
        throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": operand spaces differ");
    }
}

}  // namespace

SpaceDescriptor::SpaceDescriptor(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw Error(ErrorCode::invalid_dimension, "space needs at least one factor");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw Error(ErrorCode::invalid_dimension, "every factor dimension must be >= 2, got " + std::to_string(d));
        }
        total_ *= d;
    }
}

int SpaceDescriptor::dim(std::size_t slot) const {
    if (slot >= dims_.size()) {
        throw Error(ErrorCode::slot_out_of_range, "slot " + std::to_string(slot));
    }
    return dims_[slot];
}

Eigen::Index SpaceDescriptor::index_of(const std::vector<int> &occupations) const {
    if (occupations.size() != dims_.size()) {
        throw Error(ErrorCode::dimension_mismatch, "occupation list length does not match factor count");
    }
    Eigen::Index index = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (occupations[k] < 0 || occupations[k] >= dims_[k]) {
            throw Error(ErrorCode::invalid_state, "occupation out of range in slot " + std::to_string(k));
        }
        index = index * dims_[k] + occupations[k];
    }
    return index;
}

Operator::Operator(SpaceDescriptor space, Matrix data) : space_(std::move(space)), data_(std::move(data)) {
    if (data_.rows() != space_.total() || data_.cols() != space_.total()) {
        throw Error(
            ErrorCode::dimension_mismatch,
            "operator matrix is " + std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()) +
                " but space dimension is " + std::to_string(space_.total()));
    }
}

Operator Operator::identity(const SpaceDescriptor &space) {
    return Operator(space, Matrix::Identity(space.total(), space.total()));
}

Operator Operator::zero(const SpaceDescriptor &space) {
    return Operator(space, Matrix::Zero(space.total(), space.total()));
}

Operator Operator::adjoint() const {
    return Operator(space_, data_.adjoint());
}

bool Operator::is_hermitian(double rel_tol) const {
    double scale = data_.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return true;
    }
    return hermiticity_defect(data_) <= rel_tol * scale;
}

const Operator &Operator::require_hermitian(double rel_tol) const {
    if (!is_hermitian(rel_tol)) {
        throw Error(ErrorCode::not_hermitian, "operator is not Hermitian within " + std::to_string(rel_tol));
    }
    return *this;
}

Operator operator+(const Operator &lhs, const Operator &rhs) {
    require_same_space(lhs.space_, rhs.space_, "operator+");
    return Operator(lhs.space_, lhs.data_ + rhs.data_);
}

Operator operator-(const Operator &lhs, const Operator &rhs) {
    require_same_space(lhs.space_, rhs.space_, "operator-");
    return Operator(lhs.space_, lhs.data_ - rhs.data_);
}

Operator operator*(const Operator &lhs, const Operator &rhs) {
    require_same_space(lhs.space_, rhs.space_, "operator*");
    return Operator(lhs.space_, lhs.data_ * rhs.data_);
}

Operator operator*(cplx scale, const Operator &op) {
    return Operator(op.space_, scale * op.data_);
}

Operator operator*(double scale, const Operator &op) {
    return Operator(op.space_, scale * op.data_);
}

QuantumState::QuantumState(SpaceDescriptor space, StateKind kind, Vector ket, Matrix rho)
    : space_(std::move(space)), kind_(kind), ket_(std::move(ket)), rho_(std::move(rho)) {
}

QuantumState QuantumState::ket(SpaceDescriptor space, Vector amplitudes) {
    if (amplitudes.size() != space.total()) {
        throw Error(ErrorCode::dimension_mismatch, "ket length does not match space dimension");
    }
    double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw Error(ErrorCode::invalid_state, "ket norm is " + std::to_string(norm));
    }
    return QuantumState(std::move(space), StateKind::ket, std::move(amplitudes), Matrix());
}

QuantumState QuantumState::density(SpaceDescriptor space, Matrix rho) {
    if (rho.rows() != space.total() || rho.cols() != space.total()) {
        throw Error(ErrorCode::dimension_mismatch, "density matrix size does not match space dimension");
    }
    if (hermiticity_defect(rho) > 1e-10) {
        throw Error(ErrorCode::invalid_state, "density matrix is not Hermitian");
    }
    double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-8) {
        throw Error(ErrorCode::invalid_state, "density matrix trace is " + std::to_string(trace));
    }
    double lowest = min_eigenvalue(rho);
    if (lowest < -1e-8) {
        throw Error(ErrorCode::invalid_state, "density matrix has eigenvalue " + std::to_string(lowest));
    }
    return QuantumState(std::move(space), StateKind::density, Vector(), std::move(rho));
}

const Vector &QuantumState::amplitudes() const {
    if (kind_ != StateKind::ket) {
        throw Error(ErrorCode::invalid_state, "state is a density matrix, not a ket");
    }
    return ket_;
}

Matrix QuantumState::density_matrix() const {
    if (kind_ == StateKind::ket) {
        return ket_ * ket_.adjoint();
    }
    return rho_;
}

QuantumState QuantumState::to_density() const {
    if (kind_ == StateKind::density) {
        return *this;
    }
    return QuantumState(space_, StateKind::density, Vector(), density_matrix());
}

Operator annihilation_op(int dim) {
    if (dim < 2) {
        throw Error(ErrorCode::invalid_dimension, "ladder operator needs dim >= 2, got " + std::to_string(dim));
    }
    Matrix b = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        b(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return Operator(SpaceDescriptor({dim}), std::move(b));
}

Operator creation_op(int dim) {
    return annihilation_op(dim).adjoint();
}

Operator number_op(int dim) {
    Operator b = annihilation_op(dim);
    return b.adjoint() * b;
}

Operator quadrature_op(int dim) {
    Operator b = annihilation_op(dim);
    return (1.0 / std::sqrt(2.0)) * (b + b.adjoint());
}

Operator embed(const Operator &op, const SpaceDescriptor &space, std::size_t slot) {
    if (slot >= space.factor_count()) {
        throw Error(
            ErrorCode::slot_out_of_range,
            "slot " + std::to_string(slot) + " in a space with " + std::to_string(space.factor_count()) + " factors");
    }
    if (op.rows() != space.dims()[slot]) {
        throw Error(
            ErrorCode::dimension_mismatch,
            "operator dimension " + std::to_string(op.rows()) + " does not match factor dimension " +
                std::to_string(space.dims()[slot]));
    }
    Eigen::Index before = 1;
    Eigen::Index after = 1;
    for (std::size_t k = 0; k < slot; ++k) {
        before *= space.dims()[k];
    }
    for (std::size_t k = slot + 1; k < space.factor_count(); ++k) {
        after *= space.dims()[k];
    }
    Matrix left = Eigen::kroneckerProduct(Matrix::Identity(before, before), op.data()).eval();
    Matrix full = Eigen::kroneckerProduct(left, Matrix::Identity(after, after)).eval();
    return Operator(space, std::move(full));
}

cplx expectation(const Operator &op, const QuantumState &state) {
    require_same_space(op.space(), state.space(), "expectation");
    if (state.is_ket()) {
        const Vector &psi = state.amplitudes();
        return psi.dot(op.data() * psi);
    }
    Matrix rho = state.density_matrix();
    return op.data().cwiseProduct(rho.transpose()).sum();
}

Matrix partial_trace_matrix(const SpaceDescriptor &space, const Matrix &rho, const std::vector<std::size_t> &keep) {
    const auto &dims = space.dims();
    if (keep.empty() || !std::is_sorted(keep.begin(), keep.end()) ||
        std::adjacent_find(keep.begin(), keep.end()) != keep.end() || keep.back() >= dims.size()) {
        throw Error(ErrorCode::invalid_keep_set, "keep must be a non-empty sorted list of distinct valid slots");
    }
    if (rho.rows() != space.total() || rho.cols() != space.total()) {
        throw Error(ErrorCode::dimension_mismatch, "matrix size does not match space dimension");
    }

    // Stride of every factor in the flattened index (last factor fastest).
    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        stride[k] = s;
        s *= dims[k];
    }

    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        kept[k] = true;
    }

    // Offset tables: full index = kept_offset[i] + traced_offset[t].
    auto offsets_for = [&](bool want_kept) {
        std::vector<Eigen::Index> out{0};
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k] != want_kept) {
                continue;
            }
            std::vector<Eigen::Index> next;
            next.reserve(out.size() * dims[k]);
            for (Eigen::Index base : out) {
                for (int n = 0; n < dims[k]; ++n) {
                    next.push_back(base + n * stride[k]);
                }
            }
            out = std::move(next);
        }
        return out;
    };
    std::vector<Eigen::Index> kept_offset = offsets_for(true);
    std::vector<Eigen::Index> traced_offset = offsets_for(false);

    auto out_dim = static_cast<Eigen::Index>(kept_offset.size());
    Matrix reduced = Matrix::Zero(out_dim, out_dim);
    for (Eigen::Index j = 0; j < out_dim; ++j) {
        for (Eigen::Index i = 0; i < out_dim; ++i) {
            cplx acc = 0.0;
            for (Eigen::Index t : traced_offset) {
                acc += rho(kept_offset[i] + t, kept_offset[j] + t);
            }
            reduced(i, j) = acc;
        }
    }
    return reduced;
}

QuantumState partial_trace(const QuantumState &state, const std::vector<std::size_t> &keep) {
    Matrix reduced = partial_trace_matrix(state.space(), state.density_matrix(), keep);
    std::vector<int> kept_dims;
    for (std::size_t k : keep) {
        kept_dims.push_back(state.space().dims()[k]);
    }
    return QuantumState::density(SpaceDescriptor(std::move(kept_dims)), std::move(reduced));
}

QuantumState fock_ket(const SpaceDescriptor &space, const std::vector<int> &occupations) {
    Vector psi = Vector::Zero(space.total());
    psi(space.index_of(occupations)) = 1.0;
    return QuantumState::ket(space, std::move(psi));
}

double min_eigenvalue(const Matrix &rho) {
    Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double hermiticity_defect(const Matrix &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace phonongate
