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

#include "phonongate/trajectory.hpp"

#include "phonongate/error.hpp"

namespace phonongate {

Trajectory::Trajectory(std::vector<double> times) : times_(std::move(times)) {
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) {
            throw Error(ErrorCode::invalid_argument, "trajectory times must be strictly ascending");
        }
    }
}

void Trajectory::add_series(std::string name, std::vector<double> values) {
    if (values.size() != times_.size()) {
        throw Error(ErrorCode::grid_mismatch, "series '" + name + "' does not match the time grid");
    }
    if (has_series(name)) {
        throw Error(ErrorCode::invalid_argument, "duplicate series '" + name + "'");
    }
    series_.emplace_back(std::move(name), std::move(values));
}

bool Trajectory::has_series(std::string_view name) const {
    for (const auto &s : series_) {
        if (s.first == name) {
            return true;
        }
    }
    return false;
}

const std::vector<double> &Trajectory::series(std::string_view name) const {
    for (const auto &s : series_) {
        if (s.first == name) {
            return s.second;
        }
    }
    throw Error(ErrorCode::invalid_argument, "no series named '" + std::string(name) + "'");
}

void Trajectory::set_states(std::vector<QuantumState> states) {
    if (!states.empty() && states.size() != times_.size()) {
        throw Error(ErrorCode::grid_mismatch, "state count does not match the time grid");
    }
    states_ = std::move(states);
}

CsvTable Trajectory::to_table() const {
    CsvTable table;
    table.header.push_back("t_s");
    for (const auto &s : series_) {
        table.header.push_back(s.first);
    }
    table.rows.reserve(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
        std::vector<double> row;
        row.reserve(series_.size() + 1);
        row.push_back(times_[k]);
        for (const auto &s : series_) {
            row.push_back(s.second[k]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void Trajectory::write_csv(const std::filesystem::path &path) const {
    write_file_atomic(path, to_csv(to_table()));
}

}  // namespace phonongate
