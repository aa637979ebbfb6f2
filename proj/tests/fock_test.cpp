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

#include <cmath>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace phonongate;
using namespace phonongate::testing;

namespace {

// Kronecker product written out index by index, independent of Eigen's module.
Matrix kron_loops(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

Matrix sigma_z() {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return z;
}

}  // namespace

TEST(fock, space_descriptor) {
    SpaceDescriptor s({3, 2, 4});
    ASSERT_EQ(s.total(), 24);
    ASSERT_EQ(s.factor_count(), 3u);
    ASSERT_EQ(s.index_of({0, 0, 0}), 0);
    ASSERT_EQ(s.index_of({0, 0, 1}), 1);
    ASSERT_EQ(s.index_of({0, 1, 0}), 4);
    ASSERT_EQ(s.index_of({1, 0, 0}), 8);
    ASSERT_EQ(s.index_of({2, 1, 3}), 23);
    EXPECT_PG_ERROR(SpaceDescriptor({3, 1}), ErrorCode::invalid_dimension);
    EXPECT_PG_ERROR(SpaceDescriptor(std::vector<int>{}), ErrorCode::invalid_dimension);
    EXPECT_PG_ERROR(s.dim(3), ErrorCode::slot_out_of_range);
}

TEST(fock, annihilation_op) {
    Matrix b2 = annihilation_op(2).data();
    Matrix expected2 = Matrix::Zero(2, 2);
    expected2(0, 1) = 1;
    ASSERT_LE(max_abs(b2 - expected2), 0.0);

    Matrix b3 = annihilation_op(3).data();
    ASSERT_EQ(b3(0, 1), cplx(1.0));
    ASSERT_NEAR(b3(1, 2).real(), std::sqrt(2.0), 1e-15);
    b3(0, 1) = 0;
    b3(1, 2) = 0;
    ASSERT_EQ(max_abs(b3), 0.0);

    Matrix n4 = (creation_op(4) * annihilation_op(4)).data();
    for (int n = 0; n < 4; ++n) {
        ASSERT_NEAR(n4(n, n).real(), n, 1e-14);
    }
    ASSERT_LE(max_abs(n4 - number_op(4).data()), 1e-14);

    EXPECT_PG_ERROR(annihilation_op(1), ErrorCode::invalid_dimension);
    EXPECT_PG_ERROR(quadrature_op(0), ErrorCode::invalid_dimension);
}

TEST(fock, commutator_truncation) {
    for (int dim : {2, 3, 5, 9}) {
        Operator b = annihilation_op(dim);
        Matrix c = (b * b.adjoint() - b.adjoint() * b).data();
        for (int n = 0; n < dim - 1; ++n) {
            ASSERT_NEAR(c(n, n).real(), 1.0, 1e-13);
        }
        // The top level carries the truncation artefact.
        ASSERT_NEAR(c(dim - 1, dim - 1).real(), 1.0 - dim, 1e-13);
    }
}

TEST(fock, quadrature_op) {
    Matrix x2 = quadrature_op(2).data();
    ASSERT_NEAR(x2(0, 1).real(), 1 / std::sqrt(2.0), 1e-15);
    ASSERT_NEAR(x2(1, 0).real(), 1 / std::sqrt(2.0), 1e-15);
    ASSERT_EQ(x2(0, 0), cplx(0.0));
    ASSERT_NEAR(quadrature_op(3).data()(1, 2).real(), 1.0, 1e-15);
    for (int dim = 2; dim < 12; ++dim) {
        ASSERT_TRUE(quadrature_op(dim).is_hermitian(0.0));
    }
}

TEST(fock, embed_sigma_z) {
    Operator z(SpaceDescriptor({2}), sigma_z());
    SpaceDescriptor s({2, 2});
    Eigen::VectorXcd d1 = embed(z, s, 1).data().diagonal();
    Eigen::VectorXcd d0 = embed(z, s, 0).data().diagonal();
    double e1[] = {1, -1, 1, -1};
    double e0[] = {1, 1, -1, -1};
    for (int k = 0; k < 4; ++k) {
        ASSERT_EQ(d1(k), cplx(e1[k]));
        ASSERT_EQ(d0(k), cplx(e0[k]));
    }
    ASSERT_LE(max_abs(embed(z, s, 1).data() - d1.asDiagonal().toDenseMatrix()), 0.0);
}

TEST(fock, embed_matches_explicit_kron) {
    std::mt19937_64 rng(11);
    SpaceDescriptor s({3, 2, 4});
    Matrix a = random_matrix(2, rng);
    Operator op(SpaceDescriptor({2}), a);
    Matrix expected = kron_loops(kron_loops(Matrix::Identity(3, 3), a), Matrix::Identity(4, 4));
    ASSERT_LE(max_abs(embed(op, s, 1).data() - expected), 1e-15);

    EXPECT_PG_ERROR(embed(op, s, 3), ErrorCode::slot_out_of_range);
    EXPECT_PG_ERROR(embed(op, s, 0), ErrorCode::dimension_mismatch);
}

TEST(fock, embed_commutes_across_slots) {
    SpaceDescriptor s({3, 2});
    Operator b0 = embed(annihilation_op(3), s, 0);
    Operator bd1 = embed(creation_op(2), s, 1);
    Matrix comm = (b0 * bd1 - bd1 * b0).data();
    ASSERT_LE(max_abs(comm), 1e-15);
    Matrix explicit_b0 = kron_loops(annihilation_op(3).data(), Matrix::Identity(2, 2));
    Matrix explicit_bd1 = kron_loops(Matrix::Identity(3, 3), creation_op(2).data());
    ASSERT_LE(max_abs((b0 * bd1).data() - explicit_b0 * explicit_bd1), 1e-15);
}

TEST(fock, embed_is_homomorphism) {
    std::mt19937_64 rng(5);
    SpaceDescriptor s({3, 3, 2});
    SpaceDescriptor one({3});
    for (int trial = 0; trial < 20; ++trial) {
        Operator a(one, random_matrix(3, rng));
        Operator b(one, random_matrix(3, rng));
        for (std::size_t slot : {0u, 1u}) {
            Matrix lhs = embed(a * b, s, slot).data();
            Matrix rhs = (embed(a, s, slot) * embed(b, s, slot)).data();
            ASSERT_LE(max_abs(lhs - rhs), 1e-12 * std::max(1.0, max_abs(lhs)));
        }
    }
}

TEST(fock, hermitian_check) {
    std::mt19937_64 rng(3);
    Matrix g = random_matrix(4, rng);
    SpaceDescriptor s({4});
    Operator h(s, g + g.adjoint());
    ASSERT_TRUE(h.is_hermitian());
    Operator nh(s, g);
    ASSERT_FALSE(nh.is_hermitian());
    EXPECT_PG_ERROR(nh.require_hermitian(), ErrorCode::not_hermitian);
    ASSERT_TRUE(Operator::zero(s).is_hermitian());
    EXPECT_PG_ERROR(Operator(s, Matrix::Zero(3, 3)), ErrorCode::dimension_mismatch);
}

TEST(fock, quantum_state_validation) {
    SpaceDescriptor s({2});
    Vector v(2);
    v << 1.0, 1.0;
    EXPECT_PG_ERROR(QuantumState::ket(s, v), ErrorCode::invalid_state);
    QuantumState ok = QuantumState::ket(s, v / std::sqrt(2.0));
    ASSERT_TRUE(ok.is_ket());
    ASSERT_NEAR(ok.density_matrix().trace().real(), 1.0, 1e-15);

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.2;
    bad(1, 1) = -0.2;
    EXPECT_PG_ERROR(QuantumState::density(s, bad), ErrorCode::invalid_state);
    Matrix half = Matrix::Identity(2, 2) * 0.6;
    EXPECT_PG_ERROR(QuantumState::density(s, half), ErrorCode::invalid_state);
    Matrix skew = Matrix::Identity(2, 2) * 0.5;
    skew(0, 1) = 0.1;
    EXPECT_PG_ERROR(QuantumState::density(s, skew), ErrorCode::invalid_state);
    EXPECT_PG_ERROR(QuantumState::density(s, half).amplitudes(), ErrorCode::invalid_state);
    EXPECT_PG_ERROR(QuantumState::density(s, Matrix::Identity(2, 2) * 0.5).amplitudes(), ErrorCode::invalid_state);
}

TEST(fock, expectation) {
    SpaceDescriptor s({4});
    ASSERT_NEAR(expectation(number_op(4), fock_ket(s, {1})).real(), 1.0, 1e-15);
    ASSERT_NEAR(std::abs(expectation(quadrature_op(4), fock_ket(s, {0}))), 0.0, 1e-15);

    std::mt19937_64 rng(8);
    SpaceDescriptor s3({3, 2});
    for (int trial = 0; trial < 10; ++trial) {
        QuantumState rho = QuantumState::density(s3, random_density(6, rng));
        ASSERT_NEAR(expectation(Operator::identity(s3), rho).real(), 1.0, 1e-12);
        Operator x = embed(quadrature_op(3), s3, 0);
        cplx value = expectation(x, rho);
        ASSERT_LE(std::abs(value.imag()), 1e-10 * std::max(1.0, std::abs(value)));
        ASSERT_NEAR(value.real(), (x.data() * rho.density_matrix()).trace().real(), 1e-13);
    }
    EXPECT_PG_ERROR(expectation(number_op(3), fock_ket(s, {1})), ErrorCode::dimension_mismatch);
}

TEST(fock, partial_trace_product_state) {
    std::mt19937_64 rng(2);
    Matrix rho_q = random_density(4, rng);
    Matrix cav = Matrix::Zero(3, 3);
    cav(1, 1) = 1;
    SpaceDescriptor s({3, 2, 2});
    QuantumState full = QuantumState::density(s, kron_loops(cav, rho_q));
    QuantumState reduced = partial_trace(full, {1, 2});
    ASSERT_EQ(reduced.space().dims(), (std::vector<int>{2, 2}));
    ASSERT_LE(max_abs(reduced.density_matrix() - rho_q), 1e-14);
    ASSERT_NEAR(partial_trace(full, {0}).density_matrix()(1, 1).real(), 1.0, 1e-14);
}

TEST(fock, partial_trace_bell_state) {
    SpaceDescriptor s({2, 2});
    Vector bell = Vector::Zero(4);
    bell(0) = 1 / std::sqrt(2.0);
    bell(3) = 1 / std::sqrt(2.0);
    QuantumState psi = QuantumState::ket(s, bell);
    for (std::size_t keep : {0u, 1u}) {
        Matrix r = partial_trace(psi, {keep}).density_matrix();
        ASSERT_LE(max_abs(r - Matrix::Identity(2, 2) * 0.5), 1e-15);
    }
}

TEST(fock, partial_trace_preserves_trace_and_marginals) {
    std::mt19937_64 rng(21);
    SpaceDescriptor s({3, 2, 3});
    for (int trial = 0; trial < 10; ++trial) {
        QuantumState rho = QuantumState::density(s, random_density(18, rng));
        for (const auto &keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
            Matrix r = partial_trace(rho, keep).density_matrix();
            ASSERT_NEAR(r.trace().real(), 1.0, 1e-10);
        }
        // Tr_rest(embed(A) rho) equals <A> on the slot marginal.
        Matrix a = random_matrix(2, rng);
        Operator op(SpaceDescriptor({2}), a);
        cplx full = (embed(op, s, 1).data() * rho.density_matrix()).trace();
        cplx marginal = (a * partial_trace(rho, {1}).density_matrix()).trace();
        ASSERT_LE(std::abs(full - marginal), 1e-10);
    }
    QuantumState rho = QuantumState::density(s, random_density(18, rng));
    EXPECT_PG_ERROR(partial_trace(rho, {}), ErrorCode::invalid_keep_set);
    EXPECT_PG_ERROR(partial_trace(rho, {2, 0}), ErrorCode::invalid_keep_set);
    EXPECT_PG_ERROR(partial_trace(rho, {1, 1}), ErrorCode::invalid_keep_set);
    EXPECT_PG_ERROR(partial_trace(rho, {3}), ErrorCode::invalid_keep_set);
}

TEST(fock, min_eigenvalue_and_hermiticity_defect) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 2;
    m(1, 1) = -0.5;
    m(2, 2) = 1;
    ASSERT_NEAR(min_eigenvalue(m), -0.5, 1e-14);
    m(0, 1) = cplx(0, 0.25);
    ASSERT_NEAR(hermiticity_defect(m), 0.25, 1e-15);
}
