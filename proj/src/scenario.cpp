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

#include "phonongate/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <numbers>
#include <set>
#include <sstream>

#include "phonongate/channel.hpp"
#include "phonongate/csv.hpp"
#include "phonongate/duffing.hpp"
#include "phonongate/error.hpp"
#include "phonongate/gates.hpp"
#include "phonongate/parallel.hpp"
#include "phonongate/units.hpp"

namespace phonongate {

using nlohmann::json;

namespace {

constexpr double kNearPeakTol = 0.01;

[[noreturn]] void config_error(const std::string &message) {
    throw Error(ErrorCode::invalid_config, message);
}

// Typed access to one JSON object; every key must be consumed.
class ObjectReader {
   public:
    ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            config_error(path_ + " must be an object");
        }
    }

    bool has(const std::string &key) const {
        return obj_.contains(key) && !obj_.at(key).is_null();
    }

    const json &raw(const std::string &key) {
        used_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string &key) {
        if (!has(key)) {
            config_error(where(key) + " is required");
        }
        const json &v = raw(key);
        if (!v.is_number()) {
            config_error(where(key) + " must be a number");
        }
        double d = v.get<double>();
        if (!std::isfinite(d)) {
            config_error(where(key) + " must be finite");
        }
        return d;
    }

    double number_or(const std::string &key, double fallback) {
        used_.insert(key);
        return has(key) ? number(key) : fallback;
    }

    std::optional<double> optional_number(const std::string &key) {
        used_.insert(key);
        if (!has(key)) {
            return std::nullopt;
        }
        return number(key);
    }

    long long integer_or(const std::string &key, long long fallback) {
        used_.insert(key);
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_number_integer()) {
            config_error(where(key) + " must be an integer");
        }
        return v.get<long long>();
    }

    std::string string_or(const std::string &key, const std::string &fallback) {
        used_.insert(key);
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_string()) {
            config_error(where(key) + " must be a string");
        }
        return v.get<std::string>();
    }

    bool boolean_or(const std::string &key, bool fallback) {
        used_.insert(key);
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_boolean()) {
            config_error(where(key) + " must be true or false");
        }
        return v.get<bool>();
    }

    void finish() const {
        for (const auto &[key, value] : obj_.items()) {
            if (!used_.count(key)) {
                config_error("unknown key " + where(key));
            }
        }
    }

    std::string where(const std::string &key) const {
        return path_ + "/" + key;
    }

   private:
    const json &obj_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename F>
auto as_config_error(const std::string &where, F &&f) {
    try {
        return f();
    } catch (const Error &e) {
        config_error(where + ": " + e.what());
    }
}

json paper_v1() {
    return {
        {"name", "paper_v1"},
        {"mode", "master"},
        {"params",
         {{"Delta_hz", 28e6},
          {"g_G_hz", 9e6},
          {"G_tilde_hz", 2e6},
          {"omega_G_hz", 28.6e6},
          {"lambda_hz", 209e3},
          {"kappa_hz", 523.0},
          {"Q", 5e6},
          {"T_K", 3e-3},
          {"eps_L", 9.34e5},
          {"quadrature_convention", "symmetric"}}},
        {"dims", {{"n_cav", 3}, {"n_b", 2}}},
        {"initial", {{"cavity_fock", 1}, {"sets", json::array({{{"list", "basis_without_10"}}})}}},
        {"t_max_us", 10.0},
        {"n_steps", 2001},
        {"integrator",
         {{"method", "fixed_step"}, {"step_factor", 0.002}, {"rtol", 1e-9}, {"atol", 1e-12}, {"trace_tol", 1e-6}}},
        {"fidelity_measure", "overlap"},
        {"seed", 0},
    };
}

json paper_v1_analytic() {
    return {
        {"name", "paper_v1_analytic"},
        {"mode", "analytic"},
        {"params", {{"Delta_hz", 49.9e6}, {"g_G_hz", 21e3}, {"omega_G_hz", 36.6e6}, {"lambda_hz", 209e3}}},
        {"analytic", {{"x_g", 0.5}}},
        {"initial",
         {{"sets", json::array({{{"list", "basis"}}, {{"bloch", "schmidt"}}, {{"bloch", "separable"}, {"n_theta", 24}, {"n_phi", 24}}})}}},
        {"t_max_us", 210000.0},
        {"n_steps", 2001},
        {"fidelity_measure", "overlap"},
        {"seed", 0},
    };
}

const std::vector<std::pair<std::string, FixedList>> &list_names() {
    static const std::vector<std::pair<std::string, FixedList>> names = {
        {"basis", FixedList::basis},
        {"basis_without_10", FixedList::basis_without_10},
        {"pairs", FixedList::pairs},
        {"triples", FixedList::triples},
        {"uniform", FixedList::uniform},
    };
    return names;
}

cplx parse_amplitude(const json &v, const std::string &where) {
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    config_error(where + " entries must be numbers or [re, im] pairs");
}

InitialSet parse_set(const json &obj, const std::string &where) {
    ObjectReader r(obj, where);
    InitialSet set;
    int kinds = int(r.has("list")) + int(r.has("bloch")) + int(r.has("amplitudes"));
    if (kinds != 1) {
        config_error(where + " needs exactly one of list, bloch, amplitudes");
    }
    if (r.has("list")) {
        set.kind = InitialSet::Kind::list;
        std::string name = r.string_or("list", "");
        auto it = std::find_if(list_names().begin(), list_names().end(), [&](const auto &p) { return p.first == name; });
        if (it == list_names().end()) {
            config_error(r.where("list") + ": unknown list '" + name + "'");
        }
        set.list = it->second;
        set.label = name;
    } else if (r.has("bloch")) {
        set.kind = InitialSet::Kind::bloch;
        std::string name = r.string_or("bloch", "");
        set.family = as_config_error(r.where("bloch"), [&] { return parse_bloch_family(name); });
        set.label = name;
    } else {
        set.kind = InitialSet::Kind::amplitudes;
        const json &a = r.raw("amplitudes");
        if (!a.is_array() || a.size() != 4) {
            config_error(r.where("amplitudes") + " must list four amplitudes");
        }
        set.amplitudes = Vector(4);
        for (int k = 0; k < 4; ++k) {
            set.amplitudes(k) = parse_amplitude(a[static_cast<std::size_t>(k)], r.where("amplitudes"));
        }
        double norm = set.amplitudes.squaredNorm();
        if (std::abs(norm - 1.0) > 1e-10) {
            throw Error(
                ErrorCode::unnormalized_input, r.where("amplitudes") + " has squared norm " + std::to_string(norm));
        }
        set.label = "custom";
    }
    set.label = r.string_or("label", set.label);
    set.members = r.boolean_or("members", true);
    set.average = r.boolean_or("average", true);
    set.grid.n_theta = static_cast<int>(r.integer_or("n_theta", set.grid.n_theta));
    set.grid.n_phi = static_cast<int>(r.integer_or("n_phi", set.grid.n_phi));
    if (set.grid.n_theta < 8 || set.grid.n_phi < 8) {
        throw Error(ErrorCode::degenerate_grid, where + ": Bloch grids need at least 8 points per angle");
    }
    if (set.kind == InitialSet::Kind::list && !set.members && !set.average) {
        config_error(where + " emits no columns");
    }
    r.finish();
    return set;
}

struct Column {
    std::string name;
    const InitialSet *set;
    int member;  // -1 for the mean or a whole-family column
};

std::vector<Column> planned_columns(const ScenarioConfig &c) {
    std::vector<Column> cols;
    for (const InitialSet &set : c.initial) {
        switch (set.kind) {
            case InitialSet::Kind::list: {
                auto members = fixed_list(set.list);
                if (set.members) {
                    for (std::size_t m = 0; m < members.size(); ++m) {
                        cols.push_back({"F_" + members[m].name, &set, static_cast<int>(m)});
                    }
                }
                if (set.average) {
                    cols.push_back({"F_mean_" + set.label, &set, -1});
                }
                break;
            }
            case InitialSet::Kind::bloch:
                cols.push_back({"F_bloch_" + set.label, &set, -1});
                break;
            case InitialSet::Kind::amplitudes:
                cols.push_back({"F_" + set.label, &set, -1});
                break;
        }
    }
    if (c.mode == ScenarioMode::master) {
        cols.push_back({"leakage_max", nullptr, -1});
    }
    return cols;
}

std::string default_primary(const std::vector<Column> &cols) {
    for (const Column &c : cols) {
        if (c.name.rfind("F_mean_", 0) == 0 || c.name.rfind("F_bloch_", 0) == 0) {
            return c.name;
        }
    }
    return cols.front().name;
}

PhysicalParams parse_params(ObjectReader &r, ScenarioMode mode) {
    PhysicalParams p;
    p.Delta = hz_to_rad(r.number("Delta_hz"));
    p.g_G = hz_to_rad(r.number("g_G_hz"));
    p.omega_G = hz_to_rad(r.number("omega_G_hz"));
    p.G_tilde = hz_to_rad(r.number_or("G_tilde_hz", 0.0));
    p.lambda = hz_to_rad(r.number_or("lambda_hz", 0.0));
    p.kappa = hz_to_rad(r.number_or("kappa_hz", 0.0));
    auto gamma = r.optional_number("gamma_m_hz");
    auto n_th = r.optional_number("n_th");
    p.Q = r.optional_number("Q");
    p.T = r.optional_number("T_K");
    if (gamma && p.Q) {
        config_error("params: give gamma_m_hz or Q, not both");
    }
    if (n_th && p.T) {
        config_error("params: give n_th or T_K, not both");
    }
    if (p.Q && !(*p.Q > 0.0)) {
        config_error("params/Q must be positive");
    }
    p.gamma_m = gamma ? hz_to_rad(*gamma) : 0.0;
    p.n_th = n_th.value_or(0.0);
    p.eps_L = r.optional_number("eps_L");
    if (auto w = r.optional_number("omega_L_hz")) {
        p.omega_L = hz_to_rad(*w);
    }
    p.P_in = r.optional_number("P_in_W");
    if (auto g0 = r.optional_number("g0_hz")) {
        p.g0 = hz_to_rad(*g0);
    }
    std::string conv = r.string_or("quadrature_convention", "symmetric");
    p.quadrature = as_config_error(r.where("quadrature_convention"), [&] { return parse_quadrature_convention(conv); });
    if (mode == ScenarioMode::master && !(p.omega_G > 0.0)) {
        config_error("params/omega_G_hz must be positive");
    }
    as_config_error("params", [&] {
        p.with_derived_damping().validate();
        return 0;
    });
    return p;
}

double resolve_omega(const ScenarioConfig &c, std::string &source) {
    if (c.analytic_Omega) {
        source = "config";
        return *c.analytic_Omega;
    }
    const PhysicalParams &p = c.params;
    if (c.analytic_x_g) {
        source = "rabi_rate";
        return rabi_rate(p.Delta, p.g_G, p.omega_G, *c.analytic_x_g);
    }
    source = "spectrum";
    return effective_gate_hamiltonian(duffing_spectrum(p.omega_G, p.lambda), p.g_G, p.Delta).Omega;
}

json stats_json(const IntegrationStats &s) {
    return {
        {"method", s.method},
        {"steps", s.steps},
        {"rejected", s.rejected},
        {"halvings", s.halvings},
        {"dt_s", s.dt},
        {"max_trace_drift", s.max_trace_drift},
        {"max_hermiticity_drift", s.max_hermiticity_drift},
        {"min_eigenvalue", std::isfinite(s.min_eigenvalue) ? json(s.min_eigenvalue) : json(nullptr)},
    };
}

json peak_json(const std::vector<double> &t, const std::vector<double> &v) {
    if (v.empty()) {
        return nullptr;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[best]) {
            best = k;
        }
    }
    json maxima = json::array();
    json near = json::array();
    for (std::size_t k = 0; k < v.size(); ++k) {
        bool left = k == 0 || v[k] >= v[k - 1];
        bool right = k + 1 == v.size() || v[k] > v[k + 1];
        if (left && right) {
            maxima.push_back({{"t_us", t[k] * 1e6}, {"value", v[k]}});
            if (v[k] >= v[best] - kNearPeakTol) {
                near.push_back(t[k] * 1e6);
            }
        }
    }
    return {
        {"peak", v[best]},
        {"peak_time_us", t[best] * 1e6},
        {"near_peak_times_us", near},
        {"local_maxima", maxima},
    };
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"paper_v1", "paper_v1_analytic"};
}

json preset_document(std::string_view name) {
    if (name == "paper_v1") {
        return paper_v1();
    }
    if (name == "paper_v1_analytic") {
        return paper_v1_analytic();
    }
    config_error("unknown preset '" + std::string(name) + "'");
}

json merged_document(const json &doc) {
    if (!doc.is_object()) {
        config_error("config must be a JSON object");
    }
    if (!doc.contains("preset") || doc.at("preset").is_null()) {
        return doc;
    }
    if (!doc.at("preset").is_string()) {
        config_error("/preset must be a string");
    }
    std::string name = doc.at("preset").get<std::string>();
    json merged = preset_document(name);
    json patch = doc;
    patch.erase("preset");
    merged.merge_patch(patch);
    merged["preset"] = name;
    return merged;
}

ScenarioConfig parse_config(const json &doc) {
    json merged = merged_document(doc);
    ObjectReader r(merged, "");
    ScenarioConfig c;
    c.source = merged;
    r.string_or("preset", "");
    c.name = r.string_or("name", "custom");
    std::string mode = r.string_or("mode", "master");
    if (mode == "master") {
        c.mode = ScenarioMode::master;
    } else if (mode == "analytic") {
        c.mode = ScenarioMode::analytic;
    } else {
        config_error("/mode must be 'master' or 'analytic'");
    }
    if (!r.has("params")) {
        config_error("/params is required");
    }
    {
        ObjectReader pr(r.raw("params"), "/params");
        c.params = parse_params(pr, c.mode);
        pr.finish();
    }
    if (r.has("dims")) {
        ObjectReader dr(r.raw("dims"), "/dims");
        c.n_cav = static_cast<int>(dr.integer_or("n_cav", c.n_cav));
        c.n_b = static_cast<int>(dr.integer_or("n_b", c.n_b));
        dr.finish();
    }
    if (c.n_cav < 2 || c.n_b < 2) {
        throw Error(ErrorCode::invalid_dimension, "/dims: n_cav and n_b must be at least 2");
    }
    if (!r.has("initial")) {
        config_error("/initial is required");
    }
    {
        ObjectReader ir(r.raw("initial"), "/initial");
        c.cavity_fock = static_cast<int>(ir.integer_or("cavity_fock", c.cavity_fock));
        if (c.cavity_fock < 0 || c.cavity_fock >= c.n_cav) {
            throw Error(ErrorCode::invalid_state, "/initial/cavity_fock must lie in [0, n_cav)");
        }
        if (!ir.has("sets")) {
            config_error("/initial/sets is required");
        }
        const json &sets = ir.raw("sets");
        if (!sets.is_array() || sets.empty()) {
            config_error("/initial/sets must be a non-empty array");
        }
        for (std::size_t k = 0; k < sets.size(); ++k) {
            c.initial.push_back(parse_set(sets[k], "/initial/sets/" + std::to_string(k)));
        }
        ir.finish();
    }
    c.t_max_us = r.number_or("t_max_us", c.t_max_us);
    if (!(c.t_max_us > 0.0)) {
        config_error("/t_max_us must be positive");
    }
    long long steps = r.integer_or("n_steps", static_cast<long long>(c.n_steps));
    if (steps < 2) {
        config_error("/n_steps must be at least 2");
    }
    c.n_steps = static_cast<std::size_t>(steps);
    long long seed = r.integer_or("seed", 0);
    if (seed < 0) {
        config_error("/seed must be non-negative");
    }
    c.seed = static_cast<std::uint64_t>(seed);
    if (r.has("integrator")) {
        ObjectReader gr(r.raw("integrator"), "/integrator");
        std::string method = gr.string_or("method", "fixed_step");
        if (method == "fixed_step") {
            c.integrator = Integrator::fixed_step;
        } else if (method == "adaptive") {
            c.integrator = Integrator::adaptive;
        } else {
            config_error("/integrator/method must be 'fixed_step' or 'adaptive'");
        }
        c.step_factor = gr.number_or("step_factor", c.step_factor);
        c.rtol = gr.number_or("rtol", c.rtol);
        c.atol = gr.number_or("atol", c.atol);
        c.trace_tol = gr.number_or("trace_tol", c.trace_tol);
        if (!(c.step_factor > 0.0) || !(c.rtol > 0.0) || !(c.atol > 0.0) || !(c.trace_tol > 0.0)) {
            config_error("/integrator tolerances must be positive");
        }
        gr.finish();
    }
    std::string measure = r.string_or("fidelity_measure", "overlap");
    c.measure = as_config_error("/fidelity_measure", [&] { return parse_fidelity_measure(measure); });
    if (r.has("analytic")) {
        ObjectReader ar(r.raw("analytic"), "/analytic");
        c.analytic_Omega = ar.optional_number("Omega_rad_s");
        c.analytic_x_g = ar.optional_number("x_g");
        if (c.analytic_Omega && c.analytic_x_g) {
            config_error("/analytic: give Omega_rad_s or x_g, not both");
        }
        if (c.analytic_x_g && !(*c.analytic_x_g > 0.0)) {
            config_error("/analytic/x_g must be positive");
        }
        ar.finish();
    }

    std::vector<Column> cols = planned_columns(c);
    std::set<std::string> names;
    for (const Column &col : cols) {
        if (!names.insert(col.name).second) {
            config_error("duplicate output column '" + col.name + "'; set distinct labels");
        }
    }
    c.primary = r.string_or("primary", default_primary(cols));
    if (!names.count(c.primary)) {
        config_error("/primary names no output column: '" + c.primary + "'");
    }
    if (r.has("outputs")) {
        const json &outs = r.raw("outputs");
        if (!outs.is_array()) {
            config_error("/outputs must be an array of column names");
        }
        for (const json &o : outs) {
            if (!o.is_string() || !names.count(o.get<std::string>())) {
                config_error("/outputs: unknown column " + o.dump());
            }
            c.outputs.push_back(o.get<std::string>());
        }
    }
    if (c.mode == ScenarioMode::analytic) {
        std::string source;
        double omega = as_config_error("/analytic", [&] { return resolve_omega(c, source); });
        if (!std::isfinite(omega) || omega == 0.0) {
            config_error("/analytic: exchange rate must be finite and nonzero");
        }
    }
    r.finish();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        config_error(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json::json_pointer parameter_pointer(const json &merged, std::string_view name) {
    if (!name.empty() && name.front() == '/') {
        return json::json_pointer(std::string(name));
    }
    static const std::vector<std::pair<std::string, std::vector<std::string>>> sections = {
        {"/params",
         {"Delta_hz",
          "g_G_hz",
          "G_tilde_hz",
          "omega_G_hz",
          "lambda_hz",
          "kappa_hz",
          "gamma_m_hz",
          "n_th",
          "Q",
          "T_K",
          "eps_L",
          "omega_L_hz",
          "P_in_W",
          "g0_hz",
          "quadrature_convention"}},
        {"/dims", {"n_cav", "n_b"}},
        {"/initial", {"cavity_fock"}},
        {"/integrator", {"method", "step_factor", "rtol", "atol", "trace_tol"}},
        {"/analytic", {"Omega_rad_s", "x_g"}},
        {"", {"t_max_us", "n_steps", "fidelity_measure", "seed", "mode"}},
    };
    (void)merged;
    for (const auto &[section, keys] : sections) {
        if (std::find(keys.begin(), keys.end(), name) != keys.end()) {
            return json::json_pointer(section + "/" + std::string(name));
        }
    }
    config_error("unknown sweep parameter '" + std::string(name) + "'");
}

namespace {

struct Columns {
    Trajectory traj;
    std::optional<IntegrationStats> stats;
    std::vector<double> leakage_max;
    double omega = 0.0;
    std::string omega_source;
};

Columns compute_columns(
    const ScenarioConfig &c, const std::vector<double> &grid, const std::vector<Column> &cols, int jobs, bool diagnostics = true) {
    Columns out;
    std::function<std::vector<double>(const Vector &)> evaluate;
    std::optional<QubitChannel> channel;
    bool want_leakage = std::any_of(cols.begin(), cols.end(), [](const Column &col) { return col.set == nullptr; });
    if (c.mode == ScenarioMode::master) {
        EvolveOptions opts;
        opts.method = c.integrator;
        opts.step_factor = c.step_factor;
        opts.rtol = c.rtol;
        opts.atol = c.atol;
        opts.trace_tol = c.trace_tol;
        opts.store_states = false;
        if (!diagnostics) {
            opts.positivity_stride = 0;
        }
        channel.emplace(simulate_qubit_channel(ChannelSetup{c.params, c.n_cav, c.n_b, c.cavity_fock}, grid, opts));
        evaluate = [&](const Vector &psi) { return channel->evaluate(psi, c.measure).fidelity; };
        out.stats = channel->stats;
        if (want_leakage) {
            // Worst case over all qubit inputs: 1 - smallest eigenvalue of the
            // retained-trace form G_kj = tr E(|j><k|).
            out.leakage_max.resize(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k) {
                Matrix g(4, 4);
                for (int j = 0; j < 4; ++j) {
                    for (int l = 0; l < 4; ++l) {
                        cplx tr = 0.0;
                        for (int d = 0; d < 4; ++d) {
                            tr += channel->map(k)(5 * d, j + 4 * l);
                        }
                        g(l, j) = tr;
                    }
                }
                Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly);
                out.leakage_max[k] = std::max(0.0, 1.0 - es.eigenvalues().minCoeff());
            }
        }
    } else {
        out.omega = resolve_omega(c, out.omega_source);
        evaluate = [&, omega = out.omega](const Vector &psi) {
            std::vector<double> v(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k) {
                v[k] = apply_measure(gate_fidelity_closed(psi(0), psi(1), psi(2), psi(3), omega * grid[k]), c.measure);
            }
            return v;
        };
    }

    out.traj = Trajectory(grid);
    std::map<const InitialSet *, std::vector<std::vector<double>>> member_cache;
    for (const Column &col : cols) {
        std::vector<double> values;
        if (col.set == nullptr) {
            values = out.leakage_max;
        } else if (col.set->kind == InitialSet::Kind::list) {
            auto &cache = member_cache[col.set];
            auto members = fixed_list(col.set->list);
            if (cache.empty()) {
                for (const NamedState &m : members) {
                    cache.push_back(evaluate(m.amplitudes));
                }
            }
            if (col.member >= 0) {
                values = cache[static_cast<std::size_t>(col.member)];
            } else {
                values.assign(grid.size(), 0.0);
                for (const auto &series : cache) {
                    for (std::size_t k = 0; k < grid.size(); ++k) {
                        values[k] += series[k];
                    }
                }
                for (double &v : values) {
                    v /= static_cast<double>(cache.size());
                }
            }
        } else if (col.set->kind == InitialSet::Kind::amplitudes) {
            values = evaluate(col.set->amplitudes);
        } else if (
            c.mode == ScenarioMode::analytic && c.measure == FidelityMeasure::overlap &&
            (col.set->family == BlochFamily::schmidt || col.set->family == BlochFamily::separable)) {
            values.resize(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double x = out.omega * grid[k];
                values[k] = col.set->family == BlochFamily::schmidt ? avg_fidelity_entangled(x) : avg_fidelity_separable(x);
            }
        } else {
            values = bloch_average(col.set->family, grid, evaluate, col.set->grid, jobs).series("fidelity");
        }
        out.traj.add_series(col.name, std::move(values));
    }
    return out;
}

struct Peak {
    double value;
    double time;
};

// Continuous-time maxima of the fidelity columns. The coarse samples only
// bound the peak from below when the curves oscillate faster than the grid,
// so the best local maxima are re-evaluated on two successively finer
// windows. All times sit on an integer lattice of spacing dt / kSub^2,
// which keeps the number of distinct step lengths at three.
std::map<std::string, Peak> refine_peaks(
    const ScenarioConfig &c, const std::vector<Column> &cols, const Trajectory &coarse, int jobs) {
    constexpr long long kSub = 32;
    constexpr double kCandidateMargin = 0.03;
    constexpr std::size_t kFinalists = 2;
    const std::vector<double> &grid = coarse.times();
    const long long coarse_step = kSub * kSub;
    const long long last = coarse_step * static_cast<long long>(grid.size() - 1);
    const double unit = (grid.back() / static_cast<double>(grid.size() - 1)) / static_cast<double>(coarse_step);

    std::vector<Column> fid;
    std::map<std::string, Peak> best;
    std::map<std::string, std::vector<long long>> centers;
    for (const Column &col : cols) {
        if (col.set == nullptr) {
            continue;
        }
        fid.push_back(col);
        const std::vector<double> &v = coarse.series(col.name);
        auto top = std::max_element(v.begin(), v.end());
        best[col.name] = {*top, grid[static_cast<std::size_t>(top - v.begin())]};
        for (std::size_t k = 0; k < v.size(); ++k) {
            bool left = k == 0 || v[k] >= v[k - 1];
            bool right = k + 1 == v.size() || v[k] >= v[k + 1];
            if (left && right && v[k] >= *top - kCandidateMargin) {
                centers[col.name].push_back(coarse_step * static_cast<long long>(k));
            }
        }
    }
    if (fid.empty() || grid.size() < 2) {
        return best;
    }

    long long half = coarse_step;
    long long previous = coarse_step;
    for (int round = 0; round < 2; ++round) {
        const long long spacing = 2 * half / kSub;
        // Windows on the `spacing` lattice, joined to the coarse grid by
        // stepping stones at the previous resolution.
        std::set<long long> lattice;
        long long reach = 0;
        for (const auto &[name, list] : centers) {
            for (long long center : list) {
                long long lo = std::max(0LL, center - half);
                long long hi = std::min(last, center + half);
                for (long long n = lo; n <= hi; n += spacing) {
                    lattice.insert(n);
                }
                for (long long n = lo - lo % coarse_step; n < lo; n += previous) {
                    lattice.insert(n);
                }
                long long ceil_hi = std::min(last, (hi + coarse_step - 1) / coarse_step * coarse_step);
                for (long long n = hi; n <= ceil_hi; n += previous) {
                    lattice.insert(n);
                }
                reach = std::max(reach, ceil_hi);
            }
        }
        for (long long n = 0; n <= reach; n += coarse_step) {
            lattice.insert(n);
        }
        lattice.insert(0);
        std::vector<long long> index(lattice.begin(), lattice.end());
        std::vector<double> times(index.size());
        for (std::size_t k = 0; k < index.size(); ++k) {
            times[k] = static_cast<double>(index[k]) * unit;
        }
        Columns fine = compute_columns(c, times, fid, jobs, false);
        for (const Column &col : fid) {
            const std::vector<double> &f = fine.traj.series(col.name);
            std::vector<std::size_t> order(f.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return f[x] > f[y]; });
            Peak &p = best[col.name];
            if (f[order.front()] > p.value) {
                p = {f[order.front()], times[order.front()]};
            }
            auto &list = centers[col.name];
            list.clear();
            for (std::size_t k = 0; k < std::min(kFinalists, order.size()); ++k) {
                list.push_back(index[order[k]]);
            }
        }
        previous = spacing;
        half = spacing;
    }
    return best;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig &c, int jobs) {
    auto start = std::chrono::steady_clock::now();
    std::vector<double> grid = uniform_grid(c.t_max_us * 1e-6, c.n_steps);
    std::vector<Column> cols = planned_columns(c);
    json summary;
    summary["name"] = c.name;
    summary["mode"] = c.mode == ScenarioMode::master ? "master" : "analytic";
    summary["fidelity_measure"] = to_string(c.measure);

    Columns computed = compute_columns(c, grid, cols, jobs);
    Trajectory &traj = computed.traj;
    const std::vector<double> &leakage_max = computed.leakage_max;
    if (c.mode == ScenarioMode::master) {
        PhysicalParams derived = c.params.with_derived_damping();
        summary["derived"] = {{"gamma_m_rad_s", derived.gamma_m}, {"n_th", derived.n_th}};
        summary["dims"] = {{"n_cav", c.n_cav}, {"n_b", c.n_b}};
        summary["integrator"] = stats_json(*computed.stats);
    } else {
        summary["derived"] = {
            {"Omega_rad_s", computed.omega},
            {"Omega_source", computed.omega_source},
            {"t_cnot_s", 0.5 * std::numbers::pi / std::abs(computed.omega)}};
    }

    std::map<std::string, Peak> refined = refine_peaks(c, cols, traj, jobs);
    json series = json::object();
    for (const Column &col : cols) {
        json p = peak_json(grid, traj.series(col.name));
        p.erase("local_maxima");
        if (auto it = refined.find(col.name); it != refined.end()) {
            p["grid_peak"] = p["peak"];
            p["grid_peak_time_us"] = p["peak_time_us"];
            p["peak"] = it->second.value;
            p["peak_time_us"] = it->second.time * 1e6;
        }
        series[col.name] = p;
    }
    summary["primary"] = c.primary;
    if (traj.has_series(c.primary)) {
        const json &p = series[c.primary];
        json grid_peak = peak_json(grid, traj.series(c.primary));
        summary["peak_fidelity"] = p["peak"];
        summary["peak_time_us"] = p["peak_time_us"];
        summary["grid_peak_fidelity"] = grid_peak["peak"];
        summary["grid_peak_time_us"] = grid_peak["peak_time_us"];
        summary["near_peak_times_us"] = grid_peak["near_peak_times_us"];
        summary["near_peak_tolerance"] = kNearPeakTol;
        summary["local_maxima"] = grid_peak["local_maxima"];
    }

    if (!c.outputs.empty()) {
        Trajectory filtered(grid);
        for (const std::string &name : c.outputs) {
            filtered.add_series(name, traj.series(name));
        }
        traj = std::move(filtered);
    }
    if (computed.stats) {
        traj.stats = *computed.stats;
    }
    summary["series"] = series;
    summary["leakage_max"] =
        leakage_max.empty() ? json(nullptr) : json(*std::max_element(leakage_max.begin(), leakage_max.end()));
    summary["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    summary["config"] = c.source;
    return {std::move(traj), std::move(summary)};
}

void write_run(const RunResult &result, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
    }
    write_files_atomic({
        {dir / "trajectory.csv", to_csv(result.trajectory.to_table())},
        {dir / "summary.json", result.summary.dump(2) + "\n"},
    });
}

std::filesystem::path resolve_output_root(const std::optional<std::string> &explicit_dir) {
    if (explicit_dir && !explicit_dir->empty()) {
        return *explicit_dir;
    }
    if (const char *env = std::getenv("PHONONGATE_OUTDIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "phonongate-out";
}

std::vector<SweepPoint> sweep(
    const json &doc, std::string_view parameter, const std::vector<json> &values, const std::filesystem::path &out_dir, int jobs) {
    if (values.empty()) {
        config_error("sweep needs at least one value");
    }
    json merged = merged_document(doc);
    json::json_pointer ptr = parameter_pointer(merged, parameter);
    std::string base_name = merged.value("name", std::string("custom"));
    std::string tag(parameter);
    std::replace(tag.begin(), tag.end(), '/', '_');
    if (!tag.empty() && tag.front() == '_') {
        tag.erase(0, 1);
    }

    std::vector<ScenarioConfig> configs;
    std::vector<SweepPoint> points;
    for (std::size_t k = 0; k < values.size(); ++k) {
        json d = merged;
        d[ptr] = values[k];
        d["name"] = base_name + "[" + tag + "=" + values[k].dump() + "]";
        configs.push_back(parse_config(d));
        std::ostringstream dir;
        dir << tag << "_" << k;
        points.push_back({values[k], out_dir / dir.str(), {}});
    }
    parallel_for(configs.size(), jobs, [&](std::size_t k) {
        RunResult r = run_scenario(configs[k], 1);
        write_run(r, points[k].dir);
        points[k].summary = std::move(r.summary);
    });

    json report = json::array();
    for (const SweepPoint &p : points) {
        report.push_back({
            {"value", p.value},
            {"dir", p.dir.filename().string()},
            {"peak_fidelity", p.summary.value("peak_fidelity", json(nullptr))},
            {"peak_time_us", p.summary.value("peak_time_us", json(nullptr))},
            {"leakage_max", p.summary.value("leakage_max", json(nullptr))},
            {"runtime_s", p.summary.value("runtime_s", json(nullptr))},
        });
    }
    write_file_atomic(out_dir / "sweep.json", json{{"parameter", tag}, {"points", report}}.dump(2) + "\n");
    return points;
}

}  // namespace phonongate
