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

#include <numbers>

#include "phonongate/error.hpp"
#include "phonongate/scenario.hpp"

namespace phonongate {

using nlohmann::json;

namespace {

constexpr int kFigureBlochGrid = 32;

json bloch_set(const char *family) {
    return {{"bloch", family}, {"n_theta", kFigureBlochGrid}, {"n_phi", kFigureBlochGrid}};
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

json figure_document(std::string_view id, std::string_view preset) {
    if (id == "fig2") {
        // Closed-system CNOT fidelity of the four basis inputs at t = pi / (2 Omega).
        json doc = preset_document("paper_v1_analytic");
        doc["initial"] = {{"sets", json::array({{{"list", "basis"}, {"average", false}}})}};
        doc["n_steps"] = 2;
        RunResult r = run_scenario(parse_config(doc));
        double omega = r.summary["derived"]["Omega_rad_s"].get<double>();
        doc["t_max_us"] = 0.5 * std::numbers::pi / std::abs(omega) * 1e6;
        doc["name"] = "fig2";
        return doc;
    }

    json sets;
    std::string primary;
    if (id == "fig3") {
        sets = json::array({{{"list", "basis"}, {"average", false}},
                            {{"list", "basis_without_10"}, {"members", false}, {"label", "fig3"}}});
        primary = "F_mean_fig3";
    } else if (id == "fig4") {
        sets = json::array({{{"list", "pairs"}, {"average", false}}});
    } else if (id == "fig5") {
        sets = json::array({{{"list", "pairs"}, {"members", false}}});
    } else if (id == "fig6") {
        sets = json::array({{{"list", "triples"}, {"average", false}}});
    } else if (id == "fig7") {
        sets = json::array({{{"list", "triples"}, {"members", false}}});
    } else if (id == "fig8") {
        sets = json::array({{{"list", "uniform"}, {"average", false}}});
    } else if (id == "fig9") {
        sets = json::array({bloch_set("Phi1"), bloch_set("Phi2"), bloch_set("Phi3"), bloch_set("Phi4")});
    } else if (id == "fig10") {
        sets = json::array({bloch_set("Psi")});
    } else {
        throw Error(ErrorCode::unknown_figure, "unknown figure '" + std::string(id) + "'");
    }
    json doc = preset_document(preset);
    doc["name"] = std::string(id);
    doc["initial"]["sets"] = sets;
    if (!primary.empty()) {
        doc["primary"] = primary;
    }
    return doc;
}

}  // namespace phonongate
