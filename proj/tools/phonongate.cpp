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

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phonongate/csv.hpp"
#include "phonongate/duffing.hpp"
#include "phonongate/error.hpp"
#include "phonongate/fidelity.hpp"
#include "phonongate/gates.hpp"
#include "phonongate/scenario.hpp"
#include "phonongate/units.hpp"

using nlohmann::json;
using namespace phonongate;

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::string> out;
    std::string preset;
    int jobs = 0;
    bool fixed_step = false;
    int nb = 0;
};

void add_common(CLI::App *cmd, CommonOptions &o, bool with_run_flags) {
    cmd->add_option("--config", o.config, "JSON scenario file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output root (default: $PHONONGATE_OUTDIR or ./phonongate-out)");
    cmd->add_option("--preset", o.preset, "Base parameter preset");
    if (with_run_flags) {
        cmd->add_option("--jobs", o.jobs, "Worker threads (default: logical processors)")->check(CLI::NonNegativeNumber);
        cmd->add_flag("--fixed-step", o.fixed_step, "Force the fixed-step integrator");
        cmd->add_option("--nb", o.nb, "Levels kept per beam")->check(CLI::IsMember({2, 4}));
    }
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::invalid_config, path + ": " + e.what());
    }
}

// Config file (or the default preset), then command-line overrides.
json build_document(const CommonOptions &o, const std::string &default_preset) {
    json doc = o.config.empty() ? json::object() : read_json_file(o.config);
    if (!doc.is_object()) {
        throw Error(ErrorCode::invalid_config, "config must be a JSON object");
    }
    if (!doc.contains("preset")) {
        if (!o.preset.empty()) {
            doc["preset"] = o.preset;
        } else if (o.config.empty()) {
            doc["preset"] = default_preset;
        }
    }
    doc = merged_document(doc);
    if (o.nb != 0) {
        doc["dims"]["n_b"] = o.nb;
    }
    if (o.fixed_step) {
        doc["integrator"]["method"] = "fixed_step";
    }
    return doc;
}

std::filesystem::path run_dir(const CommonOptions &o, const std::string &name) {
    return resolve_output_root(o.out) / name;
}

json run_and_write(const json &doc, const CommonOptions &o) {
    ScenarioConfig config = parse_config(doc);
    RunResult result = run_scenario(config, o.jobs);
    std::filesystem::path dir = run_dir(o, config.name);
    write_run(result, dir);
    json brief = {
        {"name", config.name},
        {"dir", dir.string()},
        {"primary", result.summary["primary"]},
        {"peak_fidelity", result.summary.value("peak_fidelity", json(nullptr))},
        {"peak_time_us", result.summary.value("peak_time_us", json(nullptr))},
        {"leakage_max", result.summary["leakage_max"]},
        {"runtime_s", result.summary["runtime_s"]},
    };
    return brief;
}

json parse_sweep_value(const std::string &text) {
    try {
        json v = json::parse(text);
        if (v.is_primitive()) {
            return v;
        }
    } catch (const json::exception &) {
    }
    return text;
}

void print_error(const std::string &code, const std::string &message) {
    std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phononic CNOT gate simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "phonongate 0.1.0");

    CommonOptions common;

    auto *spectrum_cmd = app.add_subcommand("spectrum", "Duffing spectrum and qubit matrix elements of one beam");
    add_common(spectrum_cmd, common, false);
    std::optional<double> omega_hz;
    std::optional<double> lambda_hz;
    int dim = 16;
    int trust = 4;
    spectrum_cmd->add_option("--omega-hz", omega_hz, "Beam frequency (Hz)");
    spectrum_cmd->add_option("--lambda-hz", lambda_hz, "Duffing rate (Hz)");
    spectrum_cmd->add_option("--dim", dim, "Fock truncation")->check(CLI::Range(5, 400));
    spectrum_cmd->add_option("--trust", trust, "Levels reported")->check(CLI::Range(1, 396));

    auto *gatecheck_cmd = app.add_subcommand("gatecheck", "Compare the exchange CNOT sequence with the ideal gate");
    add_common(gatecheck_cmd, common, false);
    std::optional<double> omega_rad;
    gatecheck_cmd->add_option("--omega", omega_rad, "Exchange rate (rad/s); default from the analytic preset");

    auto *analytic_cmd = app.add_subcommand("analytic", "Closed-system fidelity curves");
    add_common(analytic_cmd, common, true);

    auto *evolve_cmd = app.add_subcommand("evolve", "Master-equation run of one scenario");
    add_common(evolve_cmd, common, true);

    auto *figure_cmd = app.add_subcommand("figure", "Data behind one figure, or all of them");
    add_common(figure_cmd, common, true);
    std::string figure_id;
    figure_cmd->add_option("id", figure_id, "fig2 ... fig10, or all")->required();

    auto *sweep_cmd = app.add_subcommand("sweep", "One run per value of a named parameter");
    add_common(sweep_cmd, common, true);
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    sweep_cmd->add_option("--param", sweep_param, "Parameter name (e.g. g_G_hz, n_b, quadrature_convention)")->required();
    sweep_cmd->add_option("--values", sweep_values, "Values to try")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (spectrum_cmd->parsed()) {
            double omega;
            double lambda;
            if (omega_hz) {
                omega = hz_to_rad(*omega_hz);
                lambda = hz_to_rad(lambda_hz.value_or(0.0));
            } else {
                ScenarioConfig c = parse_config(build_document(common, "paper_v1"));
                omega = c.params.omega_G;
                lambda = lambda_hz ? hz_to_rad(*lambda_hz) : c.params.lambda;
            }
            DuffingSpectrum s = duffing_spectrum(omega, lambda, dim, trust);
            QubitSubspace q = qubit_subspace(s);
            json energies = json::array();
            for (int n = 0; n < trust; ++n) {
                energies.push_back(s.energies[static_cast<std::size_t>(n)]);
            }
            json report = {
                {"omega_rad_s", omega},
                {"lambda_rad_s", lambda},
                {"dim", dim},
                {"energies_rad_s", energies},
                {"omega_q_rad_s", q.omega_q},
                {"x10", q.x10},
                {"x11", q.x11},
                {"z_coeff", q.z_coeff},
            };
            if (dim > 12 && trust <= 8) {
                report["truncation_change"] = truncation_convergence(omega, lambda, 12, dim, trust).max_relative_change;
            }
            // One row per trusted level: E_n, delta_n0 and the X_nm row.
            CsvTable table;
            table.header = {"n", "E_rad_s", "delta_n0_rad_s"};
            for (int m = 0; m < trust; ++m) {
                table.header.push_back("X_n" + std::to_string(m));
            }
            for (int n = 0; n < trust; ++n) {
                std::vector<double> row = {static_cast<double>(n), s.energies[static_cast<std::size_t>(n)], s.delta(n, 0)};
                for (int m = 0; m < trust; ++m) {
                    row.push_back(s.x(n, m).real());
                }
                table.rows.push_back(std::move(row));
            }
            std::filesystem::path dir = resolve_output_root(common.out) / "spectrum";
            std::filesystem::create_directories(dir);
            report["dir"] = dir.string();
            write_files_atomic({{dir / "spectrum.csv", to_csv(table)}, {dir / "summary.json", report.dump(2) + "\n"}});
            std::cout << report.dump(2) << std::endl;
            return 0;
        }
        if (gatecheck_cmd->parsed()) {
            double omega;
            if (omega_rad) {
                omega = *omega_rad;
            } else {
                ScenarioConfig c = parse_config(build_document(common, "paper_v1_analytic"));
                omega = c.analytic_Omega ? *c.analytic_Omega
                                         : rabi_rate(c.params.Delta, c.params.g_G, c.params.omega_G, c.analytic_x_g.value_or(0.5));
            }
            if (!(omega > 0.0) || !std::isfinite(omega)) {
                throw Error(ErrorCode::invalid_argument, "exchange rate must be positive");
            }
            double t = 0.5 * std::numbers::pi / omega;
            double cnot = phase_aligned_distance(cnot_sequence(omega, t), ideal_cnot());
            Matrix iswap = Matrix::Zero(4, 4);
            iswap(0, 0) = 1.0;
            iswap(3, 3) = 1.0;
            iswap(1, 2) = cplx(0.0, 1.0);
            iswap(2, 1) = cplx(0.0, 1.0);
            double iswap_d = phase_aligned_distance(exchange_unitary(omega, t).data(), iswap);
            json report = {
                {"Omega_rad_s", omega},
                {"t_cnot_s", t},
                {"cnot_distance", cnot},
                {"iswap_distance", iswap_d},
                {"pass", cnot <= 1e-10 && iswap_d <= 1e-10},
            };
            std::cout << report.dump(2) << std::endl;
            return report["pass"].get<bool>() ? 0 : 1;
        }
        if (analytic_cmd->parsed()) {
            json doc = build_document(common, "paper_v1_analytic");
            doc["mode"] = "analytic";
            std::cout << run_and_write(doc, common).dump(2) << std::endl;
            return 0;
        }
        if (evolve_cmd->parsed()) {
            json doc = build_document(common, "paper_v1");
            doc["mode"] = "master";
            std::cout << run_and_write(doc, common).dump(2) << std::endl;
            return 0;
        }
        if (figure_cmd->parsed()) {
            std::vector<std::string> ids = figure_id == "all" ? figure_ids() : std::vector<std::string>{figure_id};
            std::string preset = common.preset.empty() ? "paper_v1" : common.preset;
            json reports = json::array();
            for (const std::string &id : ids) {
                json doc = figure_document(id, id == "fig2" ? "paper_v1_analytic" : preset);
                if (id != "fig2") {
                    if (common.nb != 0) {
                        doc["dims"]["n_b"] = common.nb;
                    }
                    doc["integrator"]["method"] = "fixed_step";
                }
                reports.push_back(run_and_write(doc, common));
            }
            std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << std::endl;
            return 0;
        }
        if (sweep_cmd->parsed()) {
            json doc = build_document(common, "paper_v1");
            std::vector<json> values;
            for (const std::string &v : sweep_values) {
                values.push_back(parse_sweep_value(v));
            }
            std::string tag = sweep_param;
            std::replace(tag.begin(), tag.end(), '/', '_');
            std::string name = doc.value("name", std::string("custom")) + "_sweep_" + tag;
            std::filesystem::path dir = run_dir(common, name);
            auto points = sweep(doc, sweep_param, values, dir, common.jobs);
            json report = json::array();
            for (const auto &p : points) {
                report.push_back(
                    {{"value", p.value},
                     {"dir", p.dir.string()},
                     {"peak_fidelity", p.summary.value("peak_fidelity", json(nullptr))}});
            }
            std::cout << report.dump(2) << std::endl;
            return 0;
        }
    } catch (const Error &e) {
        print_error(std::string(to_string(e.code())), e.detail());
        return 1;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return 1;
    }
    return 0;
}
