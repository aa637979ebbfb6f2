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

#include <array>
#include <span>
#include <vector>

#include "phonongate/dynamics.hpp"
#include "phonongate/fidelity.hpp"
#include "phonongate/hamiltonians.hpp"

namespace phonongate {

struct ChannelSetup {
    PhysicalParams params;
    int n_cav = 3;
    int n_b = 2;
    int cavity_fock = 1;
};

/// Two lowest eigenvectors of the single-beam Hamiltonian (n_b x 2); the
/// Fock states |0>, |1> when n_b = 2.
Matrix qubit_basis(const PhysicalParams &p, int n_b);

/// Open-system map taking a two-qubit input |psi><psi| (cavity in a Fock
/// state) to the unnormalized qubit-block density matrix at each time.
class QubitChannel {
   public:
    QubitChannel(std::vector<double> times, std::vector<Matrix> maps);

    const std::vector<double> &times() const noexcept {
        return times_;
    }
    /// 16 x 16 map on column-major vec of 4 x 4 matrices at time index k.
    const Matrix &map(std::size_t k) const {
        return maps_.at(k);
    }

    /// Unnormalized qubit block (trace = 1 - leakage) for input psi.
    Matrix block(std::size_t k, const Vector &psi) const;

    struct Series {
        std::vector<double> fidelity;
        std::vector<double> leakage;
    };
    /// Fidelity against CNOT|psi> of the renormalized qubit block.
    Series evaluate(const Vector &psi, FidelityMeasure measure) const;

    IntegrationStats stats;

   private:
    std::vector<double> times_;
    std::vector<Matrix> maps_;
};

/// Evolves the 16 tomographic inputs through the full cavity-beam-beam
/// master equation and assembles the qubit channel.
QubitChannel simulate_qubit_channel(const ChannelSetup &setup, std::span<const double> t_grid, const EvolveOptions &opts);

}  // namespace phonongate
