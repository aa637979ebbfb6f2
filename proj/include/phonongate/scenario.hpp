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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "phonongate/dynamics.hpp"
#include "phonongate/fidelity.hpp"
#include "phonongate/hamiltonians.hpp"
#include "phonongate/trajectory.hpp"

namespace phonongate {

enum class ScenarioMode { analytic, master };

struct InitialSet {
    enum class Kind { list, bloch, amplitudes };
    Kind kind = Kind::list;
    FixedList list = FixedList::basis;
    BlochFamily family = BlochFamily::schmidt;
    BlochGrid grid{};
    Vector amplitudes;
    std::string label;
    /// Emit one column per member (lists only).
    bool members = true;
    /// Emit the uniform mean over members (lists only).
    bool average = true;
};

struct ScenarioConfig {
    std::string name = "custom";
    ScenarioMode mode = ScenarioMode::master;
    PhysicalParams params;
    int n_cav = 3;
    int n_b = 2;
    int cavity_fock = 1;
    std::vector<InitialSet> initial;
    /// Column reported as the headline fidelity; empty picks the first mean.
    std::string primary;
    double t_max_us = 10.0;
    std::size_t n_steps = 2001;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    Integrator integrator = Integrator::fixed_step;
    double step_factor = 0.002;
    double rtol = 1e-9;
    double atol = 1e-12;
    double trace_tol = 1e-6;
    FidelityMeasure measure = FidelityMeasure::overlap;
    std::optional<double> analytic_Omega;
    std::optional<double> analytic_x_g;
    /// Fully merged document the config was parsed from.
    nlohmann::json source;
};

/// Names accepted by `preset`.
std::vector<std::string> preset_names();
nlohmann::json preset_document(std::string_view name);

/// Merges the named preset (document key "preset") under the document and
/// validates every field. Frequencies use the `_hz` suffix and are converted
/// to angular units; times are in microseconds.
ScenarioConfig parse_config(const nlohmann::json &doc);
ScenarioConfig load_config(const std::filesystem::path &path);

/// Resolves `preset` (if any) and merges it under the document.
nlohmann::json merged_document(const nlohmann::json &doc);

/// Locates a sweepable key and returns its JSON pointer; a leading '/' is
/// taken as a pointer verbatim.
nlohmann::json::json_pointer parameter_pointer(const nlohmann::json &merged, std::string_view name);

struct RunResult {
    Trajectory trajectory;
    nlohmann::json summary;
};

RunResult run_scenario(const ScenarioConfig &config, int jobs = 1);

/// Writes trajectory.csv and summary.json into `dir` atomically.
void write_run(const RunResult &result, const std::filesystem::path &dir);

/// Explicit directory, else $PHONONGATE_OUTDIR, else ./phonongate-out.
std::filesystem::path resolve_output_root(const std::optional<std::string> &explicit_dir);

std::vector<std::string> figure_ids();

/// Scenario document behind a figure, built on the given base preset.
nlohmann::json figure_document(std::string_view id, std::string_view preset = "paper_v1");

struct SweepPoint {
    nlohmann::json value;
    std::filesystem::path dir;
    nlohmann::json summary;
};

/// One run per value of the named parameter, fanned out over `jobs` workers.
std::vector<SweepPoint> sweep(
    const nlohmann::json &doc,
    std::string_view parameter,
    const std::vector<nlohmann::json> &values,
    const std::filesystem::path &out_dir,
    int jobs);

}  // namespace phonongate
