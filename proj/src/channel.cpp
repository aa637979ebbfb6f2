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
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "phonongate/duffing.hpp"
#include "phonongate/error.hpp"

namespace phonongate {

namespace {

// Pure inputs spanning all 4 x 4 operators: |j> (4), (|j>+|k>)/sqrt2 (6), (|j>+i|k>)/sqrt2 (6).
struct Probe {
    int j;
    int k;
    int kind;  // 0 diagonal, 1 real superposition, 2 imaginary superposition
};

std::vector<Probe> probes() {
    std::vector<Probe> out;
    for (int j = 0; j < 4; ++j) {
        out.push_back({j, j, 0});
    }
    for (int j = 0; j < 4; ++j) {
        for (int k = j + 1; k < 4; ++k) {
            out.push_back({j, k, 1});
            out.push_back({j, k, 2});
        }
    }
    return out;
}

Vector probe_state(const Probe &p) {
    Vector v = Vector::Zero(4);
    v(p.j) = 1.0;
    if (p.kind == 1) {
        v(p.k) = 1.0;
    } else if (p.kind == 2) {
        v(p.k) = cplx(0.0, 1.0);
    }
    return v / v.norm();
}

}  // namespace

Matrix qubit_basis(const PhysicalParams &p, int n_b) {
    if (n_b < 2) {
        throw Error(ErrorCode::invalid_dimension, "beam truncation must be at least 2");
    }
    if (n_b == 2) {
        return Matrix::Identity(2, 2);
    }
    Operator beam = p.omega_G * number_op(n_b) + (p.lambda / 2.0) * quartic_quadrature(n_b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(beam.data());
    Matrix v = es.eigenvectors().leftCols(2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        Eigen::Index pivot = c;
        if (std::abs(v(pivot, c)) < 1e-12) {
            v.col(c).cwiseAbs().maxCoeff(&pivot);
        }
        v.col(c) *= std::polar(1.0, -std::arg(v(pivot, c)));
    }
    return v;
}

QubitChannel::QubitChannel(std::vector<double> times, std::vector<Matrix> maps)
    : times_(std::move(times)), maps_(std::move(maps)) {
    if (times_.size() != maps_.size()) {
        throw Error(ErrorCode::grid_mismatch, "one channel map per time is required");
    }
    for (const Matrix &m : maps_) {
        if (m.rows() != 16 || m.cols() != 16) {
            throw Error(ErrorCode::invalid_dimension, "two-qubit channel maps are 16 x 16");
        }
    }
}

Matrix QubitChannel::block(std::size_t k, const Vector &psi) const {
    if (psi.size() != 4) {
        throw Error(ErrorCode::invalid_dimension, "two-qubit input expected");
    }
    Matrix in = psi * psi.adjoint();
    Vector out = map(k) * Eigen::Map<const Vector>(in.data(), 16);
    return Eigen::Map<const Matrix>(out.data(), 4, 4);
}

QubitChannel::Series QubitChannel::evaluate(const Vector &psi, FidelityMeasure measure) const {
    if (psi.size() != 4) {
        throw Error(ErrorCode::invalid_dimension, "two-qubit input expected");
    }
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::unnormalized_input, "input state is not normalized");
    }
    Vector target = ideal_cnot().data() * psi;
    Matrix in = psi * psi.adjoint();
    Matrix tt = target * target.adjoint();
    Eigen::Map<const Vector> vin(in.data(), 16);
    // tr(T S) = sum conj(vec(T)) . vec(S) since T is Hermitian.
    Eigen::Map<const Vector> vt(tt.data(), 16);
    Vector vid = Vector::Zero(16);
    for (int d = 0; d < 4; ++d) {
        vid(5 * d) = 1.0;
    }
    Series s;
    s.fidelity.resize(times_.size());
    s.leakage.resize(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
        Vector out = maps_[k] * vin;
        double trace = vid.dot(out).real();
        double overlap = vt.dot(out).real();
        s.leakage[k] = 1.0 - trace;
        s.fidelity[k] = apply_measure(trace > 0.0 ? overlap / trace : 0.0, measure);
    }
    return s;
}

QubitChannel simulate_qubit_channel(const ChannelSetup &setup, std::span<const double> t_grid, const EvolveOptions &opts) {
    if (setup.cavity_fock < 0 || setup.cavity_fock >= setup.n_cav) {
        throw Error(ErrorCode::invalid_state, "cavity Fock index outside the truncation");
    }
    PhysicalParams p = setup.params.with_derived_damping();
    p.validate();
    SpaceDescriptor space({setup.n_cav, setup.n_b, setup.n_b});
    Operator h = system_hamiltonian(p, space);
    CollapseSet collapse = optomechanical_collapse_set(space, p.kappa, p.gamma_m, p.n_th);
    Liouvillian generator(h, collapse);

    Matrix v = qubit_basis(p, setup.n_b);
    Matrix w = Eigen::kroneckerProduct(v, v);  // n_b^2 x 4
    Vector cavity = Vector::Zero(setup.n_cav);
    cavity(setup.cavity_fock) = 1.0;

    const std::vector<Probe> plist = probes();
    std::vector<Matrix> initial;
    initial.reserve(plist.size());
    for (const Probe &pr : plist) {
        Vector full = Eigen::kroneckerProduct(cavity, Vector(w * probe_state(pr)));
        initial.push_back(full * full.adjoint());
    }

    const std::size_t points = t_grid.size();
    std::vector<std::vector<Matrix>> blocks(points, std::vector<Matrix>(plist.size()));
    EvolveOptions local = opts;
    local.chunk_size = plist.size();
    IntegrationStats stats = evolve_master_batch(
        generator, initial, t_grid, local, [&](std::size_t t, std::size_t m, const Matrix &rho) {
            Matrix beams = partial_trace_matrix(space, rho, {1, 2});
            blocks[t][m] = w.adjoint() * beams * w;
        });

    std::vector<Matrix> maps(points, Matrix::Zero(16, 16));
    for (std::size_t t = 0; t < points; ++t) {
        // Images of |j><k| in the qubit block.
        std::array<std::array<Matrix, 4>, 4> e;
        std::array<Matrix, 4> diag;
        std::size_t idx = 0;
        for (const Probe &pr : plist) {
            if (pr.kind == 0) {
                diag[pr.j] = blocks[t][idx];
            }
            ++idx;
        }
        idx = 0;
        Matrix a;
        for (const Probe &pr : plist) {
            const Matrix &r = blocks[t][idx++];
            if (pr.kind == 0) {
                e[pr.j][pr.j] = r;
            } else if (pr.kind == 1) {
                a = 2.0 * r - diag[pr.j] - diag[pr.k];
            } else {
                Matrix b = 2.0 * r - diag[pr.j] - diag[pr.k];
                e[pr.j][pr.k] = 0.5 * (a + cplx(0.0, 1.0) * b);
                e[pr.k][pr.j] = 0.5 * (a - cplx(0.0, 1.0) * b);
            }
        }
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                // Column j + 4k of the map is vec(E(|j><k|)).
                maps[t].col(j + 4 * k) = Eigen::Map<const Vector>(e[j][k].data(), 16);
            }
        }
    }
    QubitChannel channel(std::vector<double>(t_grid.begin(), t_grid.end()), std::move(maps));
    channel.stats = stats;
    return channel;
}

}  // namespace phonongate
