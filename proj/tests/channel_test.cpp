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


#include "phonongate/channel.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "phonongate/units.hpp"
#include "test_util.hpp"

using namespace phonongate;
using namespace phonongate::testing;

namespace {

PhysicalParams small_params() {
    PhysicalParams p;
    p.Delta = hz_to_rad(2.0);
    p.g_G = hz_to_rad(0.9);
    p.G_tilde = hz_to_rad(0.2);
    p.omega_G = hz_to_rad(2.2);
    p.lambda = hz_to_rad(0.05);
    p.kappa = 0.3;
    p.gamma_m = 0.05;
    p.n_th = 0.8;
    return p;
}

EvolveOptions fixed() {
    EvolveOptions o;
    o.method = Integrator::fixed_step;
    o.store_states = false;
    return o;
}

// Direct evolution of cavity |n> (x) W psi, traced to the beams and compressed to the qubit basis.
std::vector<Matrix> direct_blocks(const ChannelSetup &setup, const Vector &psi, const std::vector<double> &grid) {
    SpaceDescriptor s({setup.n_cav, setup.n_b, setup.n_b});
    PhysicalParams p = setup.params;
    Operator h = system_hamiltonian(p, s);
    CollapseSet c = optomechanical_collapse_set(s, p.kappa, p.gamma_m, p.n_th);
    Matrix v = qubit_basis(p, setup.n_b);
    Matrix w(setup.n_b * setup.n_b, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int i = 0; i < setup.n_b; ++i) {
                for (int j = 0; j < setup.n_b; ++j) {
                    w(i * setup.n_b + j, 2 * a + b) = v(i, a) * v(j, b);
                }
            }
        }
    }
    Vector beams = w * psi;
    Vector full = Vector::Zero(s.total());
    for (Eigen::Index k = 0; k < beams.size(); ++k) {
        full(setup.cavity_fock * beams.size() + k) = beams(k);
    }
    EvolveOptions o;
    o.method = Integrator::fixed_step;
    Trajectory t = evolve_master(h, c, QuantumState::ket(s, full), grid, o);
    std::vector<Matrix> out;
    for (const auto &st : t.states()) {
        Matrix r = partial_trace(st, {1, 2}).density_matrix();
        out.push_back(w.adjoint() * r * w);
    }
    return out;
}

}  // namespace

TEST(channel, qubit_basis) {
    PhysicalParams p = small_params();
    ASSERT_LE(max_abs(qubit_basis(p, 2) - Matrix::Identity(2, 2)), 0.0);
    Matrix v = qubit_basis(p, 4);
    ASSERT_EQ(v.rows(), 4);
    ASSERT_EQ(v.cols(), 2);
    ASSERT_LE(max_abs(v.adjoint() * v - Matrix::Identity(2, 2)), 1e-13);
    Matrix h = (p.omega_G * number_op(4) + (p.lambda / 2) * quartic_quadrature(4)).data();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    for (int c = 0; c < 2; ++c) {
        ASSERT_LE((h * v.col(c) - es.eigenvalues()(c) * v.col(c)).norm(), 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
        ASSERT_GT(v(c, c).real(), 0.0);
    }
    EXPECT_PG_ERROR(qubit_basis(p, 1), ErrorCode::invalid_dimension);
}

TEST(channel, reconstruction_matches_direct_evolution) {
    std::mt19937_64 rng(77);
    std::vector<double> grid = uniform_grid(1.5, 16);
    for (int nb : {2, 4}) {
        ChannelSetup setup{small_params(), 3, nb, 1};
        QubitChannel ch = simulate_qubit_channel(setup, grid, fixed());
        ASSERT_EQ(ch.times(), grid);
        for (int trial = 0; trial < 3; ++trial) {
            Vector psi = random_ket(4, rng);
            std::vector<Matrix> direct = direct_blocks(setup, psi, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                ASSERT_LE(max_abs(ch.block(k, psi) - direct[k]), 1e-10) << nb << " " << k;
            }
            QubitChannel::Series s = ch.evaluate(psi, FidelityMeasure::overlap);
            Vector target = ideal_cnot().data() * psi;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double tr = direct[k].trace().real();
                ASSERT_NEAR(s.leakage[k], 1 - tr, 1e-10);
                ASSERT_NEAR(s.fidelity[k], target.dot(direct[k] * target).real() / tr, 1e-10);
            }
        }
    }
}

TEST(channel, two_level_beams_do_not_leak) {
    std::vector<double> grid = uniform_grid(2.0, 11);
    QubitChannel ch = simulate_qubit_channel(ChannelSetup{small_params(), 3, 2, 1}, grid, fixed());
    std::mt19937_64 rng(78);
    Vector psi = random_ket(4, rng);
    QubitChannel::Series s = ch.evaluate(psi, FidelityMeasure::overlap);
    for (double l : s.leakage) {
        ASSERT_LE(std::abs(l), 1e-9);
    }
    QubitChannel::Series r = ch.evaluate(psi, FidelityMeasure::root);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ASSERT_NEAR(r.fidelity[k], std::sqrt(s.fidelity[k]), 1e-12);
    }
}

TEST(channel, decoupled_system_is_identity) {
    PhysicalParams p;
    p.Delta = 1.0;
    p.omega_G = 1.0;
    std::vector<double> grid = uniform_grid(1.0, 5);
    QubitChannel ch = simulate_qubit_channel(ChannelSetup{p, 2, 2, 0}, grid, fixed());
    std::mt19937_64 rng(79);
    Vector psi = random_ket(4, rng);
    // Free evolution is diagonal in the Fock basis: |ab> picks up exp(-i omega (a + b) t).
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Vector phased = psi;
        phased(1) *= std::polar(1.0, -grid[k]);
        phased(2) *= std::polar(1.0, -grid[k]);
        phased(3) *= std::polar(1.0, -2 * grid[k]);
        ASSERT_LE(max_abs(ch.block(k, psi) - phased * phased.adjoint()), 1e-10);
    }
    QubitChannel::Series s = ch.evaluate(psi, FidelityMeasure::overlap);
    Vector target = ideal_cnot().data() * psi;
    ASSERT_NEAR(s.fidelity[0], std::norm(target.dot(psi)), 1e-12);
}

TEST(channel, validation) {
    std::vector<double> grid = uniform_grid(1.0, 3);
    EXPECT_PG_ERROR(simulate_qubit_channel(ChannelSetup{small_params(), 3, 2, 3}, grid, fixed()), ErrorCode::invalid_state);
    EXPECT_PG_ERROR(QubitChannel({0.0, 1.0}, {Matrix::Zero(16, 16)}), ErrorCode::grid_mismatch);
    QubitChannel ch({0.0}, {Matrix::Identity(16, 16)});
    Vector bad = Vector::Ones(4);
    EXPECT_PG_ERROR(ch.evaluate(bad, FidelityMeasure::overlap), ErrorCode::unnormalized_input);
    EXPECT_PG_ERROR(ch.block(0, Vector::Ones(3)), ErrorCode::invalid_dimension);
}
