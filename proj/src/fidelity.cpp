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

#include "phonongate/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phonongate/error.hpp"
#include "phonongate/parallel.hpp"

namespace phonongate {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kRangeTol = 1e-9;

Vector basis_ket(std::initializer_list<int> members) {
    Vector v = Vector::Zero(4);
    for (int m : members) {
        v(m) = 1.0;
    }
    return v / v.norm();
}

std::vector<std::pair<double, double>> theta_phi_nodes(const BlochGrid &grid) {
    const double pi = std::numbers::pi;
    std::vector<std::pair<double, double>> nodes;
    nodes.reserve(static_cast<std::size_t>(grid.n_theta) * static_cast<std::size_t>(grid.n_phi));
    for (int i = 0; i < grid.n_theta; ++i) {
        double theta = pi * i / (grid.n_theta - 1);
        double w = std::sin(theta) * ((i == 0 || i == grid.n_theta - 1) ? 0.5 : 1.0);
        for (int j = 0; j < grid.n_phi; ++j) {
            nodes.emplace_back(theta, w);
        }
    }
    return nodes;
}

}  // namespace

std::string_view to_string(FidelityMeasure m) {
    return m == FidelityMeasure::overlap ? "overlap" : "root";
}

FidelityMeasure parse_fidelity_measure(std::string_view text) {
    if (text == "overlap") {
        return FidelityMeasure::overlap;
    }
    if (text == "root") {
        return FidelityMeasure::root;
    }
    throw Error(ErrorCode::invalid_argument, "unknown fidelity measure '" + std::string(text) + "'");
}

double overlap_fidelity(const Matrix &rho, const Vector &target) {
    if (rho.rows() != target.size() || rho.cols() != target.size()) {
        throw Error(ErrorCode::dimension_mismatch, "state and target differ in dimension");
    }
    return target.dot(rho * target).real();
}

double apply_measure(double overlap, FidelityMeasure measure) {
    double clamped = std::clamp(overlap, 0.0, 1.0);
    return measure == FidelityMeasure::root ? std::sqrt(clamped) : clamped;
}

double state_fidelity(const QuantumState &rho, const QuantumState &target) {
    if (!(rho.space() == target.space())) {
        throw Error(ErrorCode::dimension_mismatch, "state and target live on different spaces");
    }
    if (!target.is_ket()) {
        throw Error(ErrorCode::invalid_state, "target must be a pure state");
    }
    double f = overlap_fidelity(rho.density_matrix(), target.amplitudes());
    if (f < -kRangeTol || f > 1.0 + kRangeTol) {
        throw Error(ErrorCode::invalid_state, "fidelity " + std::to_string(f) + " outside [0, 1]");
    }
    return std::clamp(f, 0.0, 1.0);
}

double gate_fidelity_closed(cplx a, cplx b, cplx c, cplx d, double Omega_t) {
    double norm = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    if (std::abs(norm - 1.0) > kNormTol) {
        throw Error(ErrorCode::unnormalized_input, "amplitudes have squared norm " + std::to_string(norm));
    }
    const cplx i(0.0, 1.0);
    const cplx as = std::conj(a), bs = std::conj(b), cs = std::conj(c), ds = std::conj(d);
    const double x = Omega_t;
    cplx sum = std::norm(a) + std::norm(d) - i * a * bs + i * d * cs;
    sum += ((d - i * c) * as - (c - i * d) * bs + (i * a + b) * cs - (a + i * b) * ds) * std::cos(x);
    sum -= (std::norm(b) - i * b * as + c * (cs + i * ds)) * std::cos(2.0 * x);
    sum += (norm + i * (b * as + a * bs - d * cs - c * ds)) * std::sin(x);
    sum += (i * c * as - c * bs + b * (cs + i * ds)) * std::sin(2.0 * x);
    return 0.25 * std::norm(sum);
}

double gate_fidelity_matrix(const Vector &psi, const GateMatrix &u) {
    if (psi.size() != 4 || u.dim() != 4) {
        throw Error(ErrorCode::invalid_dimension, "two-qubit state and gate expected");
    }
    if (std::abs(psi.squaredNorm() - 1.0) > kNormTol) {
        throw Error(ErrorCode::unnormalized_input, "input state is not normalized");
    }
    Vector target = ideal_cnot().data() * psi;
    return std::norm(target.dot(u.data() * psi));
}

double avg_fidelity_entangled(double x) {
    return (6.0 * std::sin(x) - std::cos(2.0 * x) + 5.0) / 12.0;
}

double avg_fidelity_separable(double x) {
    return (12.0 * std::sin(x) - 4.0 * std::sin(3.0 * x) - 7.0 * std::cos(2.0 * x) + std::cos(4.0 * x) + 12.0) / 36.0;
}

std::vector<NamedState> fixed_list(FixedList list) {
    switch (list) {
        case FixedList::basis:
            return {{"00", basis_ket({0})}, {"01", basis_ket({1})}, {"10", basis_ket({2})}, {"11", basis_ket({3})}};
        case FixedList::basis_without_10:
            return {{"00", basis_ket({0})}, {"01", basis_ket({1})}, {"11", basis_ket({3})}};
        case FixedList::pairs:
            return {
                {"psi1", basis_ket({0, 1})},
                {"psi2", basis_ket({0, 2})},
                {"psi3", basis_ket({1, 3})},
                {"psi4", basis_ket({2, 3})}};
        case FixedList::triples:
            return {
                {"varphi1", basis_ket({0, 1, 2})},
                {"varphi2", basis_ket({0, 1, 3})},
                {"varphi3", basis_ket({0, 2, 3})},
                {"varphi4", basis_ket({1, 2, 3})}};
        case FixedList::uniform:
            break;
    }
    return {{"phi", basis_ket({0, 1, 2, 3})}};
}

Trajectory average_over_list(std::span<const Trajectory> members, std::string_view series) {
    if (members.empty()) {
        throw Error(ErrorCode::invalid_argument, "cannot average an empty list");
    }
    const std::vector<double> &times = members.front().times();
    std::vector<double> mean(times.size(), 0.0);
    for (const Trajectory &m : members) {
        if (m.times() != times) {
            throw Error(ErrorCode::grid_mismatch, "members use different time grids");
        }
        const std::vector<double> &values = m.series(series);
        for (std::size_t k = 0; k < mean.size(); ++k) {
            mean[k] += values[k];
        }
    }
    for (double &v : mean) {
        v /= static_cast<double>(members.size());
    }
    Trajectory out(times);
    out.add_series(std::string(series), std::move(mean));
    return out;
}

std::string_view to_string(BlochFamily f) {
    switch (f) {
        case BlochFamily::schmidt:
            return "schmidt";
        case BlochFamily::separable:
            return "separable";
        case BlochFamily::Phi1:
            return "Phi1";
        case BlochFamily::Phi2:
            return "Phi2";
        case BlochFamily::Phi3:
            return "Phi3";
        case BlochFamily::Phi4:
            return "Phi4";
        case BlochFamily::Psi:
            break;
    }
    return "Psi";
}

BlochFamily parse_bloch_family(std::string_view text) {
    for (BlochFamily f :
         {BlochFamily::schmidt,
          BlochFamily::separable,
          BlochFamily::Phi1,
          BlochFamily::Phi2,
          BlochFamily::Phi3,
          BlochFamily::Phi4,
          BlochFamily::Psi}) {
        if (text == to_string(f)) {
            return f;
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown state family '" + std::string(text) + "'");
}

int angle_count(BlochFamily f) {
    return f == BlochFamily::separable ? 4 : 2;
}

Vector family_state(BlochFamily f, std::span<const double> angles) {
    if (static_cast<int>(angles.size()) != angle_count(f)) {
        throw Error(ErrorCode::invalid_argument, "wrong number of angles for " + std::string(to_string(f)));
    }
    const double s = std::sin(0.5 * angles[0]);
    const double c = std::cos(0.5 * angles[0]);
    const cplx ep = std::polar(1.0, angles[1]);
    const cplx em = std::conj(ep);
    const double r = 1.0 / std::sqrt(2.0);
    Vector v = Vector::Zero(4);
    switch (f) {
        case BlochFamily::schmidt:
            v(0) = c;
            v(3) = ep * s;
            break;
        case BlochFamily::separable: {
            Vector q1(2), q2(2);
            q1 << c, ep * s;
            q2 << std::cos(0.5 * angles[2]), std::polar(1.0, angles[3]) * std::sin(0.5 * angles[2]);
            v << q1(0) * q2(0), q1(0) * q2(1), q1(1) * q2(0), q1(1) * q2(1);
            break;
        }
        case BlochFamily::Phi1:
            v(0) = s;
            v(1) = v(2) = r * em * c;
            break;
        case BlochFamily::Phi2:
            v(0) = s;
            v(1) = v(3) = r * em * c;
            break;
        case BlochFamily::Phi3:
            v(0) = s;
            v(2) = v(3) = r * em * c;
            break;
        case BlochFamily::Phi4:
            v(1) = s;
            v(2) = v(3) = r * em * c;
            break;
        case BlochFamily::Psi:
            v(0) = v(1) = r * s;
            v(2) = v(3) = r * em * c;
            break;
    }
    return v / v.norm();
}

std::vector<BlochSample> bloch_samples(BlochFamily f, const BlochGrid &grid) {
    if (grid.n_theta < 8 || grid.n_phi < 8) {
        throw Error(ErrorCode::degenerate_grid, "Bloch grids need at least 8 points per angle");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    auto nodes = theta_phi_nodes(grid);
    std::vector<std::pair<double, double>> angles;  // (theta, phi) per node
    angles.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        angles.emplace_back(nodes[k].first, two_pi * static_cast<double>(k % grid.n_phi) / grid.n_phi);
    }

    std::vector<BlochSample> out;
    double total = 0.0;
    if (f == BlochFamily::separable) {
        out.reserve(nodes.size() * nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                double w = nodes[i].second * nodes[j].second;
                if (w == 0.0) {
                    continue;
                }
                const double a[4] = {angles[i].first, angles[i].second, angles[j].first, angles[j].second};
                out.push_back({family_state(f, a), w});
                total += w;
            }
        }
    } else {
        out.reserve(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].second == 0.0) {
                continue;
            }
            const double a[2] = {angles[i].first, angles[i].second};
            out.push_back({family_state(f, a), nodes[i].second});
            total += nodes[i].second;
        }
    }
    for (auto &s : out) {
        s.weight /= total;
    }
    return out;
}

Trajectory bloch_average(
    BlochFamily f,
    std::vector<double> times,
    const StateEvaluator &evaluator,
    const BlochGrid &grid,
    int jobs,
    std::string_view series) {
    std::vector<BlochSample> samples = bloch_samples(f, grid);
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (samples.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(times.size(), 0.0));
    parallel_for(chunks, jobs, [&](std::size_t c) {
        std::size_t end = std::min(samples.size(), (c + 1) * kChunk);
        for (std::size_t s = c * kChunk; s < end; ++s) {
            std::vector<double> values = evaluator(samples[s].state);
            if (values.size() != times.size()) {
                throw Error(ErrorCode::grid_mismatch, "evaluator returned a series of the wrong length");
            }
            for (std::size_t k = 0; k < values.size(); ++k) {
                partial[c][k] += samples[s].weight * values[k];
            }
        }
    });
    std::vector<double> mean(times.size(), 0.0);
    for (const auto &p : partial) {
        for (std::size_t k = 0; k < mean.size(); ++k) {
            mean[k] += p[k];
        }
    }
    Trajectory out(std::move(times));
    out.add_series(std::string(series), std::move(mean));
    return out;
}

}  // namespace phonongate
