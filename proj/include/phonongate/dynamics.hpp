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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "phonongate/fock.hpp"
#include "phonongate/trajectory.hpp"

namespace phonongate {

/// Bose-Einstein occupation 1 / (exp(hbar omega / k_B T) - 1); 0 at T = 0.
double thermal_occupation(double omega, double T);

/// gamma_m = omega / Q.
double mech_damping(double omega, double Q);

/// Lindblad channels with their rates folded in (each stored as sqrt(rate) C).
class CollapseSet {
   public:
    CollapseSet() = default;
    explicit CollapseSet(std::vector<Operator> ops);

    void add(Operator scaled_op);
    const std::vector<Operator> &ops() const noexcept {
        return ops_;
    }
    bool empty() const noexcept {
        return ops_.empty();
    }

   private:
    std::vector<Operator> ops_;
};

/// Cavity decay sqrt(kappa) a on slot 0 and, for every other slot,
/// sqrt(gamma_m n_th) b^dagger and sqrt(gamma_m (n_th + 1)) b. Zero-rate
/// channels are omitted.
CollapseSet optomechanical_collapse_set(const SpaceDescriptor &space, double kappa, double gamma_m, double n_th);

/// -i[H, rho] + sum_k (C rho C^dag - {C^dag C, rho}/2).
Matrix lindblad_rhs(const Operator &H, const CollapseSet &c, const QuantumState &rho);

/// Generator of the master equation acting on column-major vec(rho).
class Liouvillian {
   public:
    using Sparse = Eigen::SparseMatrix<cplx>;
    using RealSparse = Eigen::SparseMatrix<double>;

    /// Generator acting on the real coordinates of a Hermitian matrix
    /// (see to_real_coordinates), with its invariant coordinate blocks.
    struct RealForm {
        RealSparse matrix;
        std::vector<std::vector<Eigen::Index>> blocks;
    };

    Liouvillian(const Operator &H, const CollapseSet &c);

    Eigen::Index hilbert_dim() const noexcept {
        return n_;
    }
    const Sparse &matrix() const noexcept {
        return l_;
    }
    /// Dense direct form on an n x n density matrix.
    Matrix apply(const Matrix &rho) const;
    /// Upper estimate of the fastest rate in the generator: the spread of
    /// H's spectrum plus the summed collapse strengths.
    double rate_bound() const noexcept {
        return rate_bound_;
    }
    const RealForm &real_form() const noexcept {
        return real_;
    }

   private:
    Eigen::Index n_ = 0;
    Matrix h_eff_;
    std::vector<Matrix> c_;
    Sparse l_;
    RealForm real_;
    double rate_bound_ = 0.0;
};

/// Coordinates r of a Hermitian n x n matrix, laid out like its column-major
/// vec: r[i + n j] = Re rho_ij and r[j + n i] = Im rho_ij for i < j,
/// r[i + n i] = rho_ii.
Eigen::VectorXd to_real_coordinates(const Matrix &rho);
Matrix from_real_coordinates(const Eigen::Ref<const Eigen::VectorXd> &r, Eigen::Index n);

enum class Integrator {
    /// Dormand-Prince 5(4) with max-norm error control.
    adaptive,
    /// Classical RK4 with a fixed step aligned to the output grid.
    fixed_step,
};

struct EvolveOptions {
    Integrator method = Integrator::adaptive;
    double rtol = 1e-9;
    double atol = 1e-12;
    /// Fixed-step size is step_factor / rate_bound (or max_step when set),
    /// shrunk so each output interval holds an integer number of steps.
    double step_factor = 0.002;
    std::optional<double> max_step;
    double trace_tol = 1e-6;
    int max_halvings = 8;
    bool store_states = true;
    /// Check the smallest eigenvalue at every k-th output (0 disables).
    std::size_t positivity_stride = 1;
    /// Initial states are evolved in fixed-size chunks (result independent of `jobs`).
    std::size_t chunk_size = 16;
    int jobs = 1;
    /// Named observables recorded as Re<A> by evolve_master.
    std::vector<std::pair<std::string, Operator>> observables;
};

/// Called once per (output time, member). With jobs > 1 different members
/// may be reported concurrently; each call owns only its own member slot.
using MasterObserver = std::function<void(std::size_t time_index, std::size_t member, const Matrix &rho)>;

/// Evolves several initial density matrices under one generator.
IntegrationStats evolve_master_batch(
    const Liouvillian &generator,
    const std::vector<Matrix> &initial,
    std::span<const double> t_grid,
    const EvolveOptions &opts,
    const MasterObserver &observe);

/// Master-equation trajectory of one initial state (ket or density).
Trajectory evolve_master(
    const Operator &H,
    const CollapseSet &c,
    const QuantumState &rho0,
    std::span<const double> t_grid,
    const EvolveOptions &opts = {});

/// |psi(t)> = exp(-i H t)|psi0> via eigendecomposition of a Hermitian H.
Trajectory evolve_unitary(const Operator &H, const QuantumState &psi0, std::span<const double> t_grid);

/// Evenly spaced grid of `points` samples on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t points);

}  // namespace phonongate
