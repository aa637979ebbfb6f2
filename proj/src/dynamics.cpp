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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "phonongate/error.hpp"
#include "phonongate/parallel.hpp"
#include "phonongate/units.hpp"

namespace phonongate {

namespace {

using Sparse = Liouvillian::Sparse;

// Above this Liouville dimension the dense interval propagator is not built
// and fixed-step RK4 steps the sparse generator directly.
constexpr Eigen::Index kPropagatorLimit = 2500;

Sparse sparse_identity(Eigen::Index n) {
    Sparse id(n, n);
    id.setIdentity();
    return id;
}

void validate_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) {
        throw Error(ErrorCode::invalid_argument, "time grid is empty");
    }
    if (t_grid.front() != 0.0) {
        throw Error(ErrorCode::invalid_argument, "time grid must start at 0");
    }
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) {
            throw Error(ErrorCode::invalid_argument, "time grid must be strictly ascending");
        }
    }
}

// Shared per-output work: symmetrize every member, track drift, report.
class OutputStage {
   public:
    OutputStage(
        Eigen::Index n,
        std::size_t member_offset,
        std::size_t outputs,
        const EvolveOptions &opts,
        const MasterObserver &observe,
        IntegrationStats &stats)
        : n_(n), member_offset_(member_offset), outputs_(outputs), opts_(opts), observe_(observe), stats_(stats) {
    }

    // Returns false when the trace drifted beyond opts.trace_tol.
    bool emit(std::size_t time_index, Matrix &columns) {
        symmetrize(columns);
        for (Eigen::Index j = 0; j < columns.cols(); ++j) {
            Eigen::Map<Matrix> rho(columns.col(j).data(), n_, n_);
            double drift = std::abs(rho.trace() - cplx(1.0, 0.0));
            stats_.max_trace_drift = std::max(stats_.max_trace_drift, drift);
            if (drift > opts_.trace_tol) {
                return false;
            }
            std::size_t stride = opts_.positivity_stride;
            if (stride > 0 && (time_index % stride == 0 || time_index + 1 == outputs_)) {
                stats_.min_eigenvalue = std::min(stats_.min_eigenvalue, min_eigenvalue(rho));
            }
            if (observe_) {
                observe_(time_index, member_offset_ + static_cast<std::size_t>(j), Matrix(rho));
            }
        }
        return true;
    }

    void symmetrize(Matrix &columns) {
        for (Eigen::Index j = 0; j < columns.cols(); ++j) {
            Eigen::Map<Matrix> rho(columns.col(j).data(), n_, n_);
            stats_.max_hermiticity_drift = std::max(stats_.max_hermiticity_drift, hermiticity_defect(rho));
            Matrix sym = 0.5 * (rho + rho.adjoint());
            rho = sym;
        }
    }

   private:
    Eigen::Index n_;
    std::size_t member_offset_;
    std::size_t outputs_;
    const EvolveOptions &opts_;
    const MasterObserver &observe_;
    IntegrationStats &stats_;
};

using RealMatrix = Eigen::MatrixXd;
using RealSparse = Liouvillian::RealSparse;

// Classical RK4 step map I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, squared
// `doublings` times.
RealMatrix rk4_interval_propagator(const RealMatrix &l, double h, int doublings) {
    const Eigen::Index dim = l.rows();
    RealMatrix id = RealMatrix::Identity(dim, dim);
    RealMatrix step = id;
    RealMatrix tmp(dim, dim);
    for (int j = 4; j >= 1; --j) {
        tmp.noalias() = (h / j) * (l * step);
        step = id + tmp;
    }
    for (int d = 0; d < doublings; ++d) {
        tmp.noalias() = step * step;
        step.swap(tmp);
    }
    return step;
}

RealMatrix dense_block(const RealSparse &l, const std::vector<Eigen::Index> &block) {
    std::vector<Eigen::Index> local(static_cast<std::size_t>(l.rows()), -1);
    for (std::size_t i = 0; i < block.size(); ++i) {
        local[static_cast<std::size_t>(block[i])] = static_cast<Eigen::Index>(i);
    }
    auto d = static_cast<Eigen::Index>(block.size());
    RealMatrix out = RealMatrix::Zero(d, d);
    for (std::size_t c = 0; c < block.size(); ++c) {
        for (RealSparse::InnerIterator it(l, block[c]); it; ++it) {
            out(local[static_cast<std::size_t>(it.row())], static_cast<Eigen::Index>(c)) = it.value();
        }
    }
    return out;
}

// Fixed-step RK4 on the real coordinates. Each invariant block small enough
// gets a dense interval propagator; otherwise the sparse generator is stepped.
bool run_fixed_step(
    const Liouvillian &gen,
    const Matrix &y0,
    std::span<const double> t_grid,
    double h_target,
    OutputStage &out,
    IntegrationStats &stats) {
    const Liouvillian::RealForm &form = gen.real_form();
    const Eigen::Index n = gen.hilbert_dim();
    const Eigen::Index members = y0.cols();
    bool dense = true;
    for (const auto &block : form.blocks) {
        dense = dense && static_cast<Eigen::Index>(block.size()) <= kPropagatorLimit;
    }

    RealMatrix y(n * n, members);
    for (Eigen::Index j = 0; j < members; ++j) {
        y.col(j) = to_real_coordinates(Eigen::Map<const Matrix>(y0.col(j).data(), n, n));
    }
    std::vector<RealMatrix> block_l;
    std::vector<RealMatrix> block_y;
    if (dense) {
        for (const auto &block : form.blocks) {
            block_l.push_back(dense_block(form.matrix, block));
            RealMatrix yb(static_cast<Eigen::Index>(block.size()), members);
            for (std::size_t i = 0; i < block.size(); ++i) {
                yb.row(static_cast<Eigen::Index>(i)) = y.row(block[i]);
            }
            block_y.push_back(std::move(yb));
        }
    }

    // Intervals equal to within rounding share one set of propagators.
    struct Cached {
        double interval;
        std::vector<RealMatrix> propagators;
    };
    std::vector<Cached> cache;
    Matrix columns(n * n, members);
    RealMatrix next;
    stats.steps = 0;
    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k) {
        double interval = t_grid[k + 1] - t_grid[k];
        auto match = std::find_if(cache.begin(), cache.end(), [&](const Cached &c) {
            return std::abs(c.interval - interval) <= 1e-11 * c.interval;
        });
        if (dense && match != cache.end()) {
            interval = match->interval;
        }
        auto m = static_cast<std::size_t>(std::ceil(interval / h_target - 1e-9));
        m = std::max<std::size_t>(m, 1);
        int doublings = 0;
        if (dense) {
            // Power-of-two step counts let the interval map be built by squaring alone.
            while ((std::size_t{1} << doublings) < m) {
                ++doublings;
            }
            m = std::size_t{1} << doublings;
        }
        double h = interval / static_cast<double>(m);
        stats.dt = h;
        stats.steps += m;
        if (dense) {
            if (match == cache.end()) {
                if (cache.size() >= 4) {
                    cache.erase(cache.begin());
                }
                Cached entry{interval, {}};
                for (const RealMatrix &lb : block_l) {
                    entry.propagators.push_back(rk4_interval_propagator(lb, h, doublings));
                }
                cache.push_back(std::move(entry));
                match = cache.end() - 1;
            }
            for (std::size_t b = 0; b < block_y.size(); ++b) {
                next.noalias() = match->propagators[b] * block_y[b];
                block_y[b].swap(next);
                const auto &block = form.blocks[b];
                for (std::size_t i = 0; i < block.size(); ++i) {
                    y.row(block[i]) = block_y[b].row(static_cast<Eigen::Index>(i));
                }
            }
        } else {
            const RealSparse &l = form.matrix;
            for (std::size_t s = 0; s < m; ++s) {
                RealMatrix k1 = l * y;
                RealMatrix k2 = l * (y + (0.5 * h) * k1);
                RealMatrix k3 = l * (y + (0.5 * h) * k2);
                RealMatrix k4 = l * (y + h * k3);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        for (Eigen::Index j = 0; j < members; ++j) {
            columns.col(j) = Eigen::Map<const Vector>(from_real_coordinates(y.col(j), n).data(), n * n);
        }
        if (!out.emit(k + 1, columns)) {
            return false;
        }
    }
    return true;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

bool run_adaptive(
    const Liouvillian &gen,
    const Matrix &y0,
    std::span<const double> t_grid,
    double rtol,
    double atol,
    OutputStage &out,
    IntegrationStats &stats) {
    const Sparse &l = gen.matrix();
    const double rate = std::max(gen.rate_bound(), 1e-300);
    const double horizon = t_grid.back();
    constexpr std::size_t kMaxSteps = 50'000'000;

    Matrix y = y0;
    Matrix k1 = l * y;
    double t = 0.0;
    double h = std::min(0.01 / rate, horizon > 0.0 ? horizon : 1.0);
    stats.steps = 0;
    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k) {
        const double target = t_grid[k + 1];
        while (t < target) {
            bool last = false;
            double step = h;
            if (t + step >= target) {
                step = target - t;
                last = true;
            }
            Matrix k2 = l * (y + step * a21 * k1);
            Matrix k3 = l * (y + step * (a31 * k1 + a32 * k2));
            Matrix k4 = l * (y + step * (a41 * k1 + a42 * k2 + a43 * k3));
            Matrix k5 = l * (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            Matrix k6 = l * (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            Matrix y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            Matrix k7 = l * y_new;
            Matrix err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err_norm = 0.0;
            for (Eigen::Index i = 0; i < err.size(); ++i) {
                double scale = atol + rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
                err_norm = std::max(err_norm, std::abs(err(i)) / scale);
            }
            double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
            factor = std::clamp(factor, 0.2, 5.0);

            if (err_norm <= 1.0) {
                t = last ? target : t + step;
                y.swap(y_new);
                out.symmetrize(y);
                k1 = l * y;
                ++stats.steps;
                stats.dt = step;
                if (!last || factor > 1.0) {
                    h = step * factor;
                }
            } else {
                ++stats.rejected;
                h = step * factor;
                if (h < 1e-14 * std::max(horizon, 1.0 / rate)) {
                    throw Error(
                        ErrorCode::integration_failure,
                        "adaptive step underflow at t = " + std::to_string(t) + " s (h = " + std::to_string(h) + ")");
                }
            }
            if (stats.steps + stats.rejected > kMaxSteps) {
                throw Error(ErrorCode::integration_failure, "step budget exhausted at t = " + std::to_string(t));
            }
        }
        if (!out.emit(k + 1, y)) {
            return false;
        }
    }
    return true;
}

IntegrationStats run_chunk(
    const Liouvillian &gen,
    const Matrix &y0,
    std::span<const double> t_grid,
    const EvolveOptions &opts,
    const MasterObserver &observe,
    std::size_t member_offset) {
    const double rate = std::max(gen.rate_bound(), 1e-300);
    double h_target = opts.max_step ? *opts.max_step : opts.step_factor / rate;
    double rtol = opts.rtol;
    double atol = opts.atol;
    double last_drift = 0.0;
    for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
        IntegrationStats stats;
        stats.method = opts.method == Integrator::adaptive ? "dormand-prince-5(4)" : "rk4-fixed";
        stats.halvings = attempt;
        OutputStage out(gen.hilbert_dim(), member_offset, t_grid.size(), opts, observe, stats);
        Matrix y = y0;
        if (!out.emit(0, y)) {
            throw Error(ErrorCode::invalid_state, "initial density matrix does not have unit trace");
        }
        bool ok = opts.method == Integrator::adaptive ? run_adaptive(gen, y0, t_grid, rtol, atol, out, stats)
                                                      : run_fixed_step(gen, y0, t_grid, h_target, out, stats);
        if (ok) {
            return stats;
        }
        last_drift = stats.max_trace_drift;
        h_target *= 0.5;
        rtol *= 0.1;
        atol *= 0.1;
    }
    throw Error(
        ErrorCode::integration_failure,
        "trace drift " + std::to_string(last_drift) + " exceeds " + std::to_string(opts.trace_tol) + " after " +
            std::to_string(opts.max_halvings) + " step reductions");
}

// Re(A L B): B maps real coordinates to vec(rho), A reads them back.
Liouvillian::RealForm build_real_form(const Sparse &l, Eigen::Index n) {
    const Eigen::Index nn = n * n;
    const cplx i(0.0, 1.0);
    std::vector<Eigen::Triplet<cplx>> a_entries;
    std::vector<Eigen::Triplet<cplx>> b_entries;
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index row = 0; row < n; ++row) {
            Eigen::Index upper = row + n * col;
            Eigen::Index lower = col + n * row;
            if (row == col) {
                a_entries.emplace_back(upper, upper, 1.0);
                b_entries.emplace_back(upper, upper, 1.0);
            } else if (row < col) {
                a_entries.emplace_back(upper, upper, 1.0);
                a_entries.emplace_back(lower, upper, -i);
                b_entries.emplace_back(upper, upper, 1.0);
                b_entries.emplace_back(lower, upper, 1.0);
                b_entries.emplace_back(upper, lower, i);
                b_entries.emplace_back(lower, lower, -i);
            }
        }
    }
    Sparse a(nn, nn);
    Sparse b(nn, nn);
    a.setFromTriplets(a_entries.begin(), a_entries.end());
    b.setFromTriplets(b_entries.begin(), b_entries.end());
    Sparse full = a * l * b;

    double scale = 0.0;
    for (Eigen::Index k = 0; k < full.outerSize(); ++k) {
        for (Sparse::InnerIterator it(full, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value().real()));
        }
    }
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(nn));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (Eigen::Index k = 0; k < full.outerSize(); ++k) {
        for (Sparse::InnerIterator it(full, k); it; ++it) {
            double v = it.value().real();
            if (std::abs(v) <= 1e-14 * scale) {
                continue;
            }
            entries.emplace_back(it.row(), it.col(), v);
            Eigen::Index ra = find(it.row());
            Eigen::Index rb = find(it.col());
            if (ra != rb) {
                parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
            }
        }
    }
    Liouvillian::RealForm form;
    form.matrix.resize(nn, nn);
    form.matrix.setFromTriplets(entries.begin(), entries.end());
    form.matrix.makeCompressed();

    std::vector<Eigen::Index> slot(static_cast<std::size_t>(nn), -1);
    for (Eigen::Index x = 0; x < nn; ++x) {
        Eigen::Index root = find(x);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<Eigen::Index>(form.blocks.size());
            form.blocks.emplace_back();
        }
        form.blocks[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(x);
    }
    return form;
}

}  // namespace

Eigen::VectorXd to_real_coordinates(const Matrix &rho) {
    const Eigen::Index n = rho.rows();
    if (rho.cols() != n) {
        throw Error(ErrorCode::invalid_dimension, "square matrix expected");
    }
    Eigen::VectorXd r(n * n);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index row = 0; row <= col; ++row) {
            cplx v = 0.5 * (rho(row, col) + std::conj(rho(col, row)));
            r(row + n * col) = v.real();
            if (row != col) {
                r(col + n * row) = v.imag();
            }
        }
    }
    return r;
}

Matrix from_real_coordinates(const Eigen::Ref<const Eigen::VectorXd> &r, Eigen::Index n) {
    if (r.size() != n * n) {
        throw Error(ErrorCode::dimension_mismatch, "coordinate vector does not match the dimension");
    }
    Matrix rho(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        rho(col, col) = r(col + n * col);
        for (Eigen::Index row = 0; row < col; ++row) {
            cplx v(r(row + n * col), r(col + n * row));
            rho(row, col) = v;
            rho(col, row) = std::conj(v);
        }
    }
    return rho;
}

double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "omega must be positive");
    }
    if (!(T >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "temperature must be non-negative");
    }
    if (T == 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * T));
}

double mech_damping(double omega, double Q) {
    if (!(Q > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "Q must be positive");
    }
    return omega / Q;
}

CollapseSet::CollapseSet(std::vector<Operator> ops) : ops_(std::move(ops)) {
}

void CollapseSet::add(Operator scaled_op) {
    ops_.push_back(std::move(scaled_op));
}

CollapseSet optomechanical_collapse_set(const SpaceDescriptor &space, double kappa, double gamma_m, double n_th) {
    if (!(kappa >= 0.0) || !(gamma_m >= 0.0) || !(n_th >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "rates and occupation must be non-negative");
    }
    CollapseSet c;
    if (kappa > 0.0) {
        c.add(std::sqrt(kappa) * embed(annihilation_op(space.dim(0)), space, 0));
    }
    for (std::size_t slot = 1; slot < space.factor_count(); ++slot) {
        Operator b = embed(annihilation_op(space.dim(slot)), space, slot);
        if (gamma_m * n_th > 0.0) {
            c.add(std::sqrt(gamma_m * n_th) * b.adjoint());
        }
        if (gamma_m > 0.0) {
            c.add(std::sqrt(gamma_m * (n_th + 1.0)) * b);
        }
    }
    return c;
}

Matrix lindblad_rhs(const Operator &H, const CollapseSet &c, const QuantumState &rho) {
    if (!(H.space() == rho.space())) {
        throw Error(ErrorCode::dimension_mismatch, "Hamiltonian and state live on different spaces");
    }
    return Liouvillian(H, c).apply(rho.density_matrix());
}

Liouvillian::Liouvillian(const Operator &H, const CollapseSet &c) : n_(H.rows()) {
    Matrix decay = Matrix::Zero(n_, n_);
    double collapse_rate = 0.0;
    for (const Operator &op : c.ops()) {
        if (!(op.space() == H.space())) {
            throw Error(ErrorCode::dimension_mismatch, "collapse operator does not match the system space");
        }
        Matrix cdc = op.data().adjoint() * op.data();
        decay += cdc;
        Eigen::SelfAdjointEigenSolver<Matrix> es(cdc, Eigen::EigenvaluesOnly);
        collapse_rate += es.eigenvalues().maxCoeff();
        c_.push_back(op.data());
    }
    h_eff_ = H.data() - cplx(0.0, 0.5) * decay;

    const cplx i(0.0, 1.0);
    Sparse id = sparse_identity(n_);
    Sparse h_eff = h_eff_.sparseView();
    Sparse h_eff_conj = Matrix(h_eff_.conjugate()).sparseView();
    l_ = Sparse(Eigen::kroneckerProduct(id, h_eff)) * (-i) + Sparse(Eigen::kroneckerProduct(h_eff_conj, id)) * i;
    for (const Matrix &cm : c_) {
        Sparse s = cm.sparseView();
        Sparse s_conj = Matrix(cm.conjugate()).sparseView();
        l_ += Sparse(Eigen::kroneckerProduct(s_conj, s));
    }
    l_.makeCompressed();
    real_ = build_real_form(l_, n_);

    Eigen::SelfAdjointEigenSolver<Matrix> hs(0.5 * (H.data() + H.data().adjoint()), Eigen::EigenvaluesOnly);
    rate_bound_ = (hs.eigenvalues().maxCoeff() - hs.eigenvalues().minCoeff()) + collapse_rate;
}

Matrix Liouvillian::apply(const Matrix &rho) const {
    if (rho.rows() != n_ || rho.cols() != n_) {
        throw Error(ErrorCode::dimension_mismatch, "density matrix size does not match the generator");
    }
    const cplx i(0.0, 1.0);
    Matrix out = -i * (h_eff_ * rho - rho * h_eff_.adjoint());
    for (const Matrix &cm : c_) {
        out += cm * rho * cm.adjoint();
    }
    return out;
}

IntegrationStats evolve_master_batch(
    const Liouvillian &generator,
    const std::vector<Matrix> &initial,
    std::span<const double> t_grid,
    const EvolveOptions &opts,
    const MasterObserver &observe) {
    validate_grid(t_grid);
    if (opts.chunk_size == 0) {
        throw Error(ErrorCode::invalid_argument, "chunk_size must be positive");
    }
    const Eigen::Index n = generator.hilbert_dim();
    for (const Matrix &rho : initial) {
        if (rho.rows() != n || rho.cols() != n) {
            throw Error(ErrorCode::dimension_mismatch, "initial state does not match the generator");
        }
    }
    const std::size_t members = initial.size();
    const std::size_t chunks = (members + opts.chunk_size - 1) / opts.chunk_size;
    std::vector<IntegrationStats> per_chunk(chunks);
    parallel_for(chunks, opts.jobs, [&](std::size_t c) {
        std::size_t begin = c * opts.chunk_size;
        std::size_t end = std::min(members, begin + opts.chunk_size);
        Matrix y(n * n, static_cast<Eigen::Index>(end - begin));
        for (std::size_t m = begin; m < end; ++m) {
            y.col(static_cast<Eigen::Index>(m - begin)) = Eigen::Map<const Vector>(initial[m].data(), n * n);
        }
        per_chunk[c] = run_chunk(generator, y, t_grid, opts, observe, begin);
    });

    IntegrationStats total;
    total.method = opts.method == Integrator::adaptive ? "dormand-prince-5(4)" : "rk4-fixed";
    for (const auto &s : per_chunk) {
        total.steps = std::max(total.steps, s.steps);
        total.rejected += s.rejected;
        total.halvings = std::max(total.halvings, s.halvings);
        total.dt = s.dt;
        total.max_trace_drift = std::max(total.max_trace_drift, s.max_trace_drift);
        total.max_hermiticity_drift = std::max(total.max_hermiticity_drift, s.max_hermiticity_drift);
        total.min_eigenvalue = std::min(total.min_eigenvalue, s.min_eigenvalue);
    }
    return total;
}

Trajectory evolve_master(
    const Operator &H,
    const CollapseSet &c,
    const QuantumState &rho0,
    std::span<const double> t_grid,
    const EvolveOptions &opts) {
    if (!(H.space() == rho0.space())) {
        throw Error(ErrorCode::dimension_mismatch, "Hamiltonian and state live on different spaces");
    }
    Liouvillian generator(H, c);
    const std::size_t points = t_grid.size();
    std::vector<Matrix> rhos(opts.store_states ? points : 0);
    std::vector<std::vector<double>> values(opts.observables.size(), std::vector<double>(points));

    EvolveOptions local = opts;
    local.chunk_size = 1;
    local.jobs = 1;
    IntegrationStats stats = evolve_master_batch(
        generator, {rho0.density_matrix()}, t_grid, local, [&](std::size_t k, std::size_t, const Matrix &rho) {
            if (opts.store_states) {
                rhos[k] = rho;
            }
            for (std::size_t o = 0; o < opts.observables.size(); ++o) {
                values[o][k] = opts.observables[o].second.data().cwiseProduct(rho.transpose()).sum().real();
            }
        });

    Trajectory traj(std::vector<double>(t_grid.begin(), t_grid.end()));
    if (opts.store_states) {
        std::vector<QuantumState> states;
        states.reserve(points);
        for (auto &rho : rhos) {
            states.push_back(QuantumState::density(H.space(), std::move(rho)));
        }
        traj.set_states(std::move(states));
    }
    for (std::size_t o = 0; o < opts.observables.size(); ++o) {
        traj.add_series(opts.observables[o].first, std::move(values[o]));
    }
    traj.stats = stats;
    return traj;
}

Trajectory evolve_unitary(const Operator &H, const QuantumState &psi0, std::span<const double> t_grid) {
    H.require_hermitian(1e-12);
    if (!(H.space() == psi0.space())) {
        throw Error(ErrorCode::dimension_mismatch, "Hamiltonian and state live on different spaces");
    }
    validate_grid(t_grid);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (H.data() + H.data().adjoint()));
    const Matrix &v = solver.eigenvectors();
    const Eigen::VectorXd &e = solver.eigenvalues();
    Vector coeffs = v.adjoint() * psi0.amplitudes();

    std::vector<QuantumState> states;
    states.reserve(t_grid.size());
    for (double t : t_grid) {
        Vector phased(coeffs.size());
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            phased(k) = std::polar(1.0, -e(k) * t) * coeffs(k);
        }
        states.push_back(QuantumState::ket(H.space(), v * phased));
    }
    Trajectory traj(std::vector<double>(t_grid.begin(), t_grid.end()));
    traj.set_states(std::move(states));
    traj.stats.method = "eigendecomposition";
    return traj;
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
    if (points < 2 || !(t_max > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "grid needs t_max > 0 and at least 2 points");
    }
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = t_max * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

}  // namespace phonongate
