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

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phonongate/csv.hpp"
#include "phonongate/fock.hpp"

namespace phonongate {

/// Bookkeeping reported by the time integrators.
struct IntegrationStats {
    std::string method;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    int halvings = 0;
    double dt = 0.0;  ///< fixed step, or the last accepted adaptive step
    double max_trace_drift = 0.0;
    double max_hermiticity_drift = 0.0;  ///< before symmetrization
    double min_eigenvalue = std::numeric_limits<double>::infinity();
};

/// Time grid plus optional states and named real series on that grid.
class Trajectory {
   public:
    Trajectory() = default;
    explicit Trajectory(std::vector<double> times);

    const std::vector<double> &times() const noexcept {
        return times_;
    }

    void add_series(std::string name, std::vector<double> values);
    bool has_series(std::string_view name) const;
    const std::vector<double> &series(std::string_view name) const;
    const std::vector<std::pair<std::string, std::vector<double>>> &all_series() const noexcept {
        return series_;
    }

    void set_states(std::vector<QuantumState> states);
    const std::vector<QuantumState> &states() const noexcept {
        return states_;
    }

    IntegrationStats stats;

    /// `t_s` column followed by one column per series, in insertion order.
    CsvTable to_table() const;
    void write_csv(const std::filesystem::path &path) const;

   private:
    std::vector<double> times_;
    std::vector<QuantumState> states_;
    std::vector<std::pair<std::string, std::vector<double>>> series_;
};

}  // namespace phonongate
