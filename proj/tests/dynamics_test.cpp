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


#include "phonongate/dynamics.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "phonongate/units.hpp"
#include "test_util.hpp"

using namespace phonongate;
using namespace phonongate::testing;

namespace {

Matrix kron_loops(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Column-major vec generator assembled from the textbook superoperator identities
// vec(A X B) = (B^T (x) A) vec(X).
Matrix reference_liouvillian(const Matrix &h, const std::vector<Matrix> &cs) {
    Eigen::Index n = h.rows();
    Matrix id = Matrix::Identity(n, n);
    const cplx i(0, 1);
    Matrix l = -i * (kron_loops(id, h) - kron_loops(h.transpose(), id));
    for (const auto &c : cs) {
        Matrix cdc = c.adjoint() * c;
        l += kron_loops(c.conjugate(), c) - 0.5 * kron_loops(id, cdc) - 0.5 * kron_loops(cdc.transpose(), id);
    }
    return l;
}

Matrix unvec(const Vector &v, Eigen::Index n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

Vector vec(const Matrix &m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Operator random_hermitian(const SpaceDescriptor &s, std::mt19937_64 &rng, double scale = 1.0) {
    Matrix g = random_matrix(s.total(), rng);
    return Operator(s, scale * 0.5 * (g + g.adjoint()));
}

EvolveOptions fixed_options(double step_factor = 0.002) {
    EvolveOptions o;
    o.method = Integrator::fixed_step;
    o.step_factor = step_factor;
    return o;
}

}  // namespace

TEST(dynamics, thermal_occupation) {
    ASSERT_EQ(thermal_occupation(1e6, 0.0), 0.0);
    double T = 0.01;
    double omega = kBoltzmann * T * std::log(2.0) / kHbar;
    ASSERT_NEAR(thermal_occupation(omega, T), 1.0, 1e-12);
    double w = hz_to_rad(28.6e6);
    double x = kHbar * w / (kBoltzmann * 3e-3);
    ASSERT_NEAR(thermal_occupation(w, 3e-3), 1 / (std::exp(x) - 1), 1e-12);
    ASSERT_NEAR(thermal_occupation(w, 3e-3), 1.72, 0.01);
    EXPECT_PG_ERROR(thermal_occupation(0.0, 1.0), ErrorCode::invalid_argument);
    EXPECT_PG_ERROR(thermal_occupation(1.0, -1.0), ErrorCode::invalid_argument);
}

TEST(dynamics, mech_damping) {
    double w = hz_to_rad(28.6e6);
    ASSERT_NEAR(mech_damping(w, 5e6), 35.94, 0.01);
    ASSERT_EQ(mech_damping(w, 1.0), w);
    ASSERT_LT(mech_damping(w, 1e300), 1e-290);
    EXPECT_PG_ERROR(mech_damping(w, 0.0), ErrorCode::invalid_argument);
}

TEST(dynamics, collapse_set) {
    SpaceDescriptor s({3, 2, 2});
    ASSERT_EQ(optomechanical_collapse_set(s, 1.0, 2.0, 0.5).ops().size(), 5u);
    ASSERT_EQ(optomechanical_collapse_set(s, 1.0, 2.0, 0.0).ops().size(), 3u);
    ASSERT_EQ(optomechanical_collapse_set(s, 0.0, 0.0, 3.0).ops().size(), 0u);
    CollapseSet c = optomechanical_collapse_set(s, 4.0, 0.0, 0.0);
    ASSERT_LE(max_abs(c.ops()[0].data() - 2.0 * embed(annihilation_op(3), s, 0).data()), 1e-15);
    EXPECT_PG_ERROR(optomechanical_collapse_set(s, -1.0, 0.0, 0.0), ErrorCode::invalid_argument);
}

TEST(dynamics, lindblad_rhs_trivial) {
    std::mt19937_64 rng(4);
    SpaceDescriptor s({3});
    QuantumState rho = QuantumState::density(s, random_density(3, rng));
    ASSERT_EQ(max_abs(lindblad_rhs(Operator::zero(s), CollapseSet(), rho)), 0.0);

    SpaceDescriptor two({2});
    double kappa = 0.37;
    CollapseSet c({std::sqrt(kappa) * annihilation_op(2)});
    Matrix d = lindblad_rhs(Operator::zero(two), c, fock_ket(two, {1}));
    ASSERT_NEAR((number_op(2).data() * d).trace().real(), -kappa, 1e-15);
}

TEST(dynamics, lindblad_rhs_matches_reference_superoperator) {
    std::mt19937_64 rng(9);
    SpaceDescriptor s({2, 3});
    Operator h = random_hermitian(s, rng);
    CollapseSet c({
        Operator(s, random_matrix(6, rng) * 0.3),
        0.7 * embed(annihilation_op(3), s, 1),
    });
    std::vector<Matrix> raw;
    for (const auto &op : c.ops()) {
        raw.push_back(op.data());
    }
    Matrix l_ref = reference_liouvillian(h.data(), raw);
    Liouvillian l(h, c);
    ASSERT_LE(max_abs(Matrix(l.matrix()) - l_ref), 1e-13);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix rho = random_density(6, rng);
        Matrix d = lindblad_rhs(h, c, QuantumState::density(s, rho));
        ASSERT_LE(max_abs(d - unvec(l_ref * vec(rho), 6)), 1e-13);
        ASSERT_LE(std::abs(d.trace()), 1e-10 * max_abs(d));
        ASSERT_LE(hermiticity_defect(d), 1e-12);
        ASSERT_LE(max_abs(l.apply(rho) - d), 1e-14);
    }
    EXPECT_PG_ERROR(lindblad_rhs(h, c, fock_ket(SpaceDescriptor({6}), {0})), ErrorCode::dimension_mismatch);
}

TEST(dynamics, thermal_state_is_stationary) {
    const int dim = 7;
    const double gamma = 0.8, n_th = 0.6;
    SpaceDescriptor beam({dim});
    CollapseSet c;
    c.add(std::sqrt(gamma * n_th) * creation_op(dim));
    c.add(std::sqrt(gamma * (n_th + 1)) * annihilation_op(dim));
    Operator h = 1.3 * number_op(dim);

    // Brute force: the null vector of the reference generator.
    std::vector<Matrix> raw;
    for (const auto &op : c.ops()) {
        raw.push_back(op.data());
    }
    Matrix l_ref = reference_liouvillian(h.data(), raw);
    Eigen::JacobiSVD<Matrix> svd(l_ref, Eigen::ComputeFullV);
    Vector null = svd.matrixV().col(l_ref.cols() - 1);
    Matrix stationary = unvec(null, dim);
    stationary /= stationary.trace();
    ASSERT_LE(svd.singularValues()(l_ref.cols() - 1), 1e-12);

    // Truncated Bose-Einstein populations.
    double r = n_th / (n_th + 1);
    Matrix thermal = Matrix::Zero(dim, dim);
    double z = 0;
    for (int n = 0; n < dim; ++n) {
        thermal(n, n) = std::pow(r, n);
        z += std::pow(r, n);
    }
    thermal /= z;
    ASSERT_LE(max_abs(stationary - thermal), 1e-10);
    ASSERT_LE(max_abs(lindblad_rhs(h, c, QuantumState::density(beam, thermal))), 1e-13);
}

TEST(dynamics, real_coordinates_round_trip) {
    std::mt19937_64 rng(12);
    for (int n : {1, 2, 5}) {
        Matrix rho = random_density(n, rng);
        Eigen::VectorXd r = to_real_coordinates(rho);
        ASSERT_EQ(r.size(), n * n);
        ASSERT_LE(max_abs(from_real_coordinates(r, n) - rho), 1e-15);
        if (n > 1) {
            ASSERT_NEAR(r(0 + n * 1), rho(0, 1).real(), 1e-16);
            ASSERT_NEAR(r(1 + n * 0), rho(0, 1).imag(), 1e-16);
        }
    }
    EXPECT_PG_ERROR(from_real_coordinates(Eigen::VectorXd::Zero(5), 2), ErrorCode::dimension_mismatch);
}

TEST(dynamics, real_form_matches_complex_generator) {
    std::mt19937_64 rng(13);
    SpaceDescriptor s({3, 2});
    Operator h = random_hermitian(s, rng);
    CollapseSet c({0.5 * embed(annihilation_op(3), s, 0), 0.2 * embed(creation_op(2), s, 1)});
    Liouvillian l(h, c);
    const auto &form = l.real_form();
    std::size_t covered = 0;
    for (const auto &b : form.blocks) {
        covered += b.size();
    }
    ASSERT_EQ(covered, 36u);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix rho = random_density(6, rng);
        Eigen::VectorXd dr = form.matrix * to_real_coordinates(rho);
        ASSERT_LE(max_abs(from_real_coordinates(dr, 6) - l.apply(rho)), 1e-13);
    }
}

TEST(dynamics, parity_splits_real_form) {
    SpaceDescriptor s({3, 2, 2});
    Operator xc = embed(quadrature_op(3), s, 0);
    Operator h = embed(number_op(3), s, 0) + 0.3 * (xc * (embed(quadrature_op(2), s, 1) + embed(quadrature_op(2), s, 2)));
    CollapseSet c = optomechanical_collapse_set(s, 0.1, 0.05, 1.0);
    Liouvillian l(h, c);
    ASSERT_EQ(l.real_form().blocks.size(), 2u);
}

TEST(dynamics, cavity_decay) {
    const double kappa = hz_to_rad(523);
    SpaceDescriptor s({2});
    CollapseSet c({std::sqrt(kappa) * annihilation_op(2)});
    std::vector<double> grid = uniform_grid(3 / kappa, 61);
    for (Integrator method : {Integrator::fixed_step, Integrator::adaptive}) {
        EvolveOptions o;
        o.method = method;
        o.observables = {{"n", number_op(2)}};
        Trajectory t = evolve_master(Operator::zero(s), c, fock_ket(s, {1}), grid, o);
        const auto &n = t.series("n");
        for (std::size_t k = 0; k < grid.size(); ++k) {
            ASSERT_NEAR(n[k], std::exp(-kappa * grid[k]), 1e-6);
        }
        ASSERT_NEAR(n.back(), std::exp(-3.0), 1e-6);
        ASSERT_LE(t.stats.max_trace_drift, 1e-6);
        ASSERT_GE(t.stats.min_eigenvalue, -1e-6);
    }
}

TEST(dynamics, thermal_relaxation) {
    const int dim = 30;
    const double gamma = 0.05, n_th = thermal_occupation(hz_to_rad(28.6e6), 3e-3);
    SpaceDescriptor s({dim});
    CollapseSet c;
    Operator b = annihilation_op(dim);
    c.add(std::sqrt(gamma * n_th) * b.adjoint());
    c.add(std::sqrt(gamma * (n_th + 1)) * b);
    std::vector<double> grid = uniform_grid(10 / gamma, 11);
    for (Integrator method : {Integrator::fixed_step, Integrator::adaptive}) {
        EvolveOptions o;
        o.method = method;
        o.store_states = false;
        o.observables = {{"n", number_op(dim)}};
        Trajectory t = evolve_master(1.0 * number_op(dim), c, fock_ket(s, {0}), grid, o);
        ASSERT_NEAR(t.series("n").back() / n_th, 1.0, 0.01);
        // Exact mean relaxation n_th (1 - e^{-gamma t}) while truncation is negligible.
        ASSERT_NEAR(t.series("n")[1], n_th * (1 - std::exp(-gamma * grid[1])), 1e-3);
        ASSERT_LE(t.stats.max_trace_drift, 1e-6);
        ASSERT_GE(t.stats.min_eigenvalue, -1e-6);
    }
}

TEST(dynamics, closed_master_matches_unitary) {
    std::mt19937_64 rng(30);
    SpaceDescriptor s({3, 2});
    Operator h = random_hermitian(s, rng);
    QuantumState psi = QuantumState::ket(s, random_ket(6, rng));
    std::vector<double> grid = uniform_grid(6.0, 61);
    Trajectory u = evolve_unitary(h, psi, grid);
    for (Integrator method : {Integrator::fixed_step, Integrator::adaptive}) {
        EvolveOptions o;
        o.method = method;
        Trajectory m = evolve_master(h, CollapseSet(), psi, grid, o);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            ASSERT_LE(max_abs(m.states()[k].density_matrix() - u.states()[k].density_matrix()), 1e-8) << k;
        }
    }
}

TEST(dynamics, fixed_and_adaptive_agree) {
    std::mt19937_64 rng(31);
    SpaceDescriptor s({3, 2});
    Operator h = random_hermitian(s, rng);
    CollapseSet c = optomechanical_collapse_set(s, 0.4, 0.2, 1.5);
    QuantumState rho = QuantumState::density(s, random_density(6, rng));
    std::vector<double> grid = uniform_grid(4.0, 41);
    EvolveOptions fixed = fixed_options();
    EvolveOptions adaptive;
    Trajectory a = evolve_master(h, c, rho, grid, fixed);
    Trajectory b = evolve_master(h, c, rho, grid, adaptive);
    ASSERT_EQ(a.stats.method, "rk4-fixed");
    ASSERT_EQ(b.stats.method, "dormand-prince-5(4)");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ASSERT_LE(max_abs(a.states()[k].density_matrix() - b.states()[k].density_matrix()), 1e-8);
    }
}

TEST(dynamics, halving_fixed_step) {
    std::mt19937_64 rng(32);
    SpaceDescriptor s({3, 2, 2});
    Operator h = random_hermitian(s, rng);
    CollapseSet c = optomechanical_collapse_set(s, 0.3, 0.1, 1.7);
    Vector psi = random_ket(12, rng);
    std::vector<double> grid = uniform_grid(5.0, 11);
    Trajectory coarse = evolve_master(h, c, QuantumState::ket(s, psi), grid, fixed_options(0.002));
    Trajectory fine = evolve_master(h, c, QuantumState::ket(s, psi), grid, fixed_options(0.001));
    Matrix a = coarse.states().back().density_matrix();
    Matrix b = fine.states().back().density_matrix();
    ASSERT_LE(max_abs(a - b), 1e-8);
    double fa = (psi.adjoint() * a * psi)(0).real();
    double fb = (psi.adjoint() * b * psi)(0).real();
    ASSERT_LE(std::abs(fa - fb), 1e-8);
}

TEST(dynamics, fixed_step_is_deterministic) {
    std::mt19937_64 rng(33);
    SpaceDescriptor s({3, 2});
    Operator h = random_hermitian(s, rng);
    CollapseSet c = optomechanical_collapse_set(s, 0.3, 0.1, 1.7);
    QuantumState rho = QuantumState::density(s, random_density(6, rng));
    std::vector<double> grid = uniform_grid(2.0, 21);
    Trajectory a = evolve_master(h, c, rho, grid, fixed_options());
    Trajectory b = evolve_master(h, c, rho, grid, fixed_options());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ASSERT_TRUE(a.states()[k].density_matrix() == b.states()[k].density_matrix());
    }
}

TEST(dynamics, batch_independent_of_jobs) {
    std::mt19937_64 rng(34);
    SpaceDescriptor s({2, 2});
    Operator h = random_hermitian(s, rng);
    CollapseSet c = optomechanical_collapse_set(s, 0.3, 0.1, 0.5);
    Liouvillian l(h, c);
    std::vector<Matrix> initial;
    for (int k = 0; k < 7; ++k) {
        initial.push_back(random_density(4, rng));
    }
    std::vector<double> grid = uniform_grid(1.0, 6);
    auto run = [&](int jobs, std::size_t chunk) {
        std::vector<std::vector<Matrix>> out(initial.size(), std::vector<Matrix>(grid.size()));
        EvolveOptions o = fixed_options();
        o.jobs = jobs;
        o.chunk_size = chunk;
        evolve_master_batch(l, initial, grid, o, [&](std::size_t t, std::size_t m, const Matrix &rho) { out[m][t] = rho; });
        return out;
    };
    auto a = run(1, 3);
    auto b = run(3, 3);
    for (std::size_t m = 0; m < initial.size(); ++m) {
        for (std::size_t t = 0; t < grid.size(); ++t) {
            ASSERT_TRUE(a[m][t] == b[m][t]);
        }
        ASSERT_LE(max_abs(a[m][0] - initial[m]), 1e-15);
    }
}

TEST(dynamics, trace_tolerance_failure) {
    std::mt19937_64 rng(35);
    SpaceDescriptor s({3, 2});
    Operator h = random_hermitian(s, rng, 5.0);
    CollapseSet c = optomechanical_collapse_set(s, 0.3, 0.1, 1.7);
    QuantumState rho = fock_ket(s, {1, 0});
    // Rounding alone exceeds an absurd tolerance, so every retry fails.
    for (Integrator method : {Integrator::fixed_step, Integrator::adaptive}) {
        EvolveOptions o;
        o.method = method;
        o.trace_tol = 1e-300;
        o.max_halvings = 1;
        EXPECT_PG_ERROR(evolve_master(h, c, rho, uniform_grid(3.0, 31), o), ErrorCode::integration_failure);
    }
}

TEST(dynamics, grid_validation) {
    SpaceDescriptor s({2});
    std::vector<double> late = {0.5, 1.0};
    std::vector<double> flat = {0.0, 1.0, 1.0};
    EXPECT_PG_ERROR(evolve_master(Operator::zero(s), CollapseSet(), fock_ket(s, {0}), late), ErrorCode::invalid_argument);
    EXPECT_PG_ERROR(evolve_master(Operator::zero(s), CollapseSet(), fock_ket(s, {0}), flat), ErrorCode::invalid_argument);
    EXPECT_PG_ERROR(evolve_unitary(Operator::zero(s), fock_ket(s, {0}), late), ErrorCode::invalid_argument);
    std::vector<double> g = uniform_grid(2.0, 5);
    ASSERT_EQ(g, (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
    EXPECT_PG_ERROR(uniform_grid(1.0, 1), ErrorCode::invalid_argument);
}

TEST(dynamics, unitary_examples) {
    SpaceDescriptor q({2});
    double w = 1.7;
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = w / 2;
    z(1, 1) = -w / 2;
    std::vector<double> grid = {0.0, M_PI / w};
    Trajectory t = evolve_unitary(Operator(q, z), fock_ket(q, {0}), grid);
    Vector end = t.states().back().amplitudes();
    ASSERT_NEAR(std::abs(end(0)), 1.0, 1e-14);
    ASSERT_NEAR(std::arg(end(0)), -M_PI / 2, 1e-14);

    // Exchange: H = Omega(|01><10| + h.c.) sends |01> to -i|10> at Omega t = pi/2.
    double omega = 2.5;
    SpaceDescriptor s({2, 2});
    Matrix h = Matrix::Zero(4, 4);
    h(1, 2) = omega;
    h(2, 1) = omega;
    Trajectory ex = evolve_unitary(Operator(s, h), fock_ket(s, {0, 1}), std::vector<double>{0.0, M_PI / (2 * omega)});
    Vector out = ex.states().back().amplitudes();
    ASSERT_LE(std::abs(out(2) - cplx(0, -1)), 1e-14);
    ASSERT_LE(std::abs(out(1)), 1e-14);

    std::mt19937_64 rng(40);
    Operator hr = random_hermitian(SpaceDescriptor({5}), rng);
    Trajectory tr = evolve_unitary(hr, QuantumState::ket(SpaceDescriptor({5}), random_ket(5, rng)), uniform_grid(10.0, 101));
    double e0 = expectation(hr, tr.states()[0]).real();
    for (const auto &st : tr.states()) {
        ASSERT_NEAR(st.amplitudes().norm(), 1.0, 1e-10);
        ASSERT_NEAR(expectation(hr, st).real(), e0, 1e-10);
    }
    EXPECT_PG_ERROR(
        evolve_unitary(Operator(SpaceDescriptor({5}), random_matrix(5, rng)), fock_ket(SpaceDescriptor({5}), {0}), grid),
        ErrorCode::not_hermitian);
}
