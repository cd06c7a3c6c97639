// Copyright 2026 The Coherence Verification Authors
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

#include "coherence/app.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "coherence/error.hpp"
#include "coherence/io.hpp"
#include "coherence/tomo.hpp"

namespace coherence {

namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

const std::vector<std::string> kConfigKeys{"pair_rate", "duration_per_setting", "num_trials",          "visibility",
                                           "seed",      "efficiency",           "bootstrap_replicates", "counts_per_setting"};

/// Collects emitted files for the manifest.
class OutputDir {
   public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) {
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec) throw IoError("cannot create output directory '" + root_.string() + "': " + ec.message());
    }

    void write(const std::string &name, std::string_view text) {
        const fs::path path = root_ / name;
        write_text_file(path, text);
        files_.push_back(path);
    }
    void write_csv(const std::string &name, const CsvTable &csv) { write(name, csv.to_string()); }
    void write_json(const std::string &name, const nlohmann::json &doc) { write(name, doc.dump(2) + "\n"); }

    const fs::path &root() const { return root_; }
    const std::vector<fs::path> &files() const { return files_; }

   private:
    fs::path root_;
    std::vector<fs::path> files_;
};

std::string option(const CommandOptions &opts, const std::string &key, const std::string &fallback) {
    const auto it = opts.find(key);
    return it == opts.end() ? fallback : it->second;
}

void check_known_options(const CommandOptions &opts, std::initializer_list<const char *> allowed) {
    std::set<std::string> known(kConfigKeys.begin(), kConfigKeys.end());
    known.insert("config");
    for (const char *k : allowed) known.insert(k);
    for (const auto &[key, value] : opts) {
        require(known.count(key) > 0, "unknown option '" + key + "'");
    }
}

bool parse_mode(const CommandOptions &opts, const std::string &fallback) {
    const std::string mode = option(opts, "mode", fallback);
    if (mode == "exact") return false;
    if (mode == "simulated") return true;
    throw InvalidArgument("mode must be exact or simulated, got '" + mode + "'");
}

double parse_tol(const CommandOptions &opts) {
    const double tol = parse_angle(option(opts, "tol", "1e-10"));
    require(tol >= 0.0, "tol must be non-negative");
    return tol;
}

Axis parse_paradox_axis(const std::string &text) {
    require(text.size() == 1, "axis must be X or Y");
    const Axis axis = parse_axis(text[0]);
    require(axis == Axis::X || axis == Axis::Y, "axis must be X or Y");
    return axis;
}

std::string angle_tag(double theta) {
    for (int den : {1, 2, 3, 4, 6, 8, 12}) {
        for (int num = 1; num <= 2 * den; ++num) {
            if (std::abs(theta - num * pi / den) < 1e-12) {
                std::string tag = (num == 1 ? "" : std::to_string(num)) + "pi";
                if (den != 1) tag += "_" + std::to_string(den);
                return tag;
            }
        }
    }
    if (theta == 0.0) return "0";
    return format_number(theta);
}

std::string source_name(const std::string &label, double theta) {
    return label == "00" ? "psi00@" + angle_tag(theta) : "psi" + label;
}

DensityOperator source_state(const std::string &label, double theta) {
    return density_from_state(epr_family(theta, parse_source_label(label)));
}

CountTable simulate_source(const std::string &label, double theta, const Setting &setting, const ExperimentConfig &cfg) {
    const std::string name = source_name(label, theta);
    return simulate_counts(source_state(label, theta), setting, cfg, stream_id(name, setting));
}

Setting setting_of(const ObservableChain &obs) {
    require(obs.num_qubits() == 2, "two-party setting needs a two-qubit chain");
    return Setting{obs.axes()[0], obs.axes()[1]};
}

/// Noise-model consistency: |estimate - v * theory| within four standard errors.
bool consistent_with_noise(double estimate, double std_err, double theory, double visibility) {
    return std::abs(estimate - visibility * theory) <= 4.0 * std_err + 1e-12;
}

OutcomeRow empirical_row(const CountTable &table) {
    const auto n = table.pooled();
    const double total = static_cast<double>(table.total());
    require(total > 0.0, "empirical distribution needs positive counts");
    return {static_cast<double>(n[0]) / total, static_cast<double>(n[1]) / total, static_cast<double>(n[2]) / total,
            static_cast<double>(n[3]) / total};
}

nlohmann::json p_value_json(const PValue &p) {
    return {{"p_value", p.value}, {"log10_p_value", p.log10}, {"scaled_gap", p.scaled_gap}, {"weights", p.weights},
            {"method", "Hoeffding bound under the best convex mixture of component sources"}};
}

// ----------------------------------------------------------------------------
// tables

CsvTable paradox_csv(const ParadoxRun &run, double theta, bool simulate, double visibility) {
    CsvTable csv;
    csv.header = {"source", "observable", "theta", "theoretical"};
    if (simulate) {
        for (const char *h : {"simulated", "std_err", "delta_std_err", "n_total", "consistent"}) csv.header.push_back(h);
    }
    for (const ParadoxRowResult &row : run.rows) {
        std::vector<std::string> cells{row.constraint.source_label, row.constraint.observable.to_string(),
                                       row.constraint.source_label == "00" ? format_number(theta) : "",
                                       format_number(row.constraint.expected_value)};
        if (simulate) {
            const EstimatedCorrelator &e = *row.simulated;
            cells.push_back(format_number(e.value));
            cells.push_back(format_number(e.std_err));
            cells.push_back(format_number(e.delta_std_err));
            cells.push_back(std::to_string(e.n_total));
            cells.push_back(consistent_with_noise(e.value, e.std_err, row.constraint.expected_value, visibility) ? "1"
                                                                                                                 : "0");
        }
        csv.add_row(std::move(cells));
    }
    return csv;
}

nlohmann::json paradox_json(const ParadoxRun &run) {
    nlohmann::json doc;
    doc["spec"] = to_json(run.spec);
    doc["exact_verdict"] = to_json(run.exact_verdict);
    if (run.simulated_verdict) doc["simulated_verdict"] = to_json(*run.simulated_verdict);
    if (run.p_value) doc["p_value"] = p_value_json(*run.p_value);
    return doc;
}

/// Table S1/S2 layout: shared component rows plus one mixed row per theta.
CsvTable generalized_paradox_table(Axis axis, const std::vector<double> &thetas, const ExperimentConfig &cfg,
                                   std::vector<ParadoxRun> *runs_out) {
    CsvTable csv{{"correlator", "source", "theta", "experimental", "std_err", "theoretical", "consistent", "p_value",
                  "log10_p_value"},
                 {}};
    bool first = true;
    for (double theta : thetas) {
        ParadoxRun run = evaluate_paradox(theta, axis, true, cfg, 1e-10);
        for (const ParadoxRowResult &row : run.rows) {
            const bool mixed = row.constraint.source_label == "00";
            if (!mixed && !first) continue;
            const EstimatedCorrelator &e = *row.simulated;
            csv.add_row({row.constraint.observable.to_string(), row.constraint.source_label,
                         mixed ? format_number(theta) : "", format_number(e.value), format_number(e.std_err),
                         format_number(row.constraint.expected_value),
                         consistent_with_noise(e.value, e.std_err, row.constraint.expected_value, cfg.visibility) ? "1"
                                                                                                                  : "0",
                         mixed ? format_number(run.p_value->value) : "",
                         mixed ? format_number(run.p_value->log10) : ""});
        }
        first = false;
        if (runs_out != nullptr) runs_out->push_back(std::move(run));
    }
    return csv;
}

CsvTable game_table(GameStrategy strategy, const std::vector<double> &thetas, const ExperimentConfig &cfg) {
    const char axis = strategy == GameStrategy::kPauliX ? 'X' : 'Z';
    const std::string chain{axis, axis};
    CsvTable csv{{"source", "theta", "experimental_correlator", "correlator_std_err", "theoretical_correlator",
                  "experimental_p_win", "p_win_std_err", "theoretical_p_win", "classical_p_win", "consistent"},
                 {}};
    const Setting setting{parse_axis(axis), parse_axis(axis)};
    for (const std::string label : {"01", "10"}) {
        const EstimatedCorrelator e = correlator_from_counts(simulate_source(label, 0.0, setting, cfg));
        const double theory = expectation(source_state(label, 0.0), ObservableChain::parse(chain));
        csv.add_row({label, "", format_number(e.value), format_number(e.std_err), format_number(theory), "", "", "", "",
                     consistent_with_noise(e.value, e.std_err, theory, cfg.visibility) ? "1" : "0"});
    }
    for (double theta : thetas) {
        const GamePoint pt = evaluate_game_point(theta, strategy, true, cfg);
        const EstimatedCorrelator &e = *pt.correlator_simulated;
        const double noisy_p = 0.5 + cfg.visibility * (pt.exact.p_win - 0.5);
        const bool ok = consistent_with_noise(e.value, e.std_err, pt.correlator_exact, cfg.visibility) &&
                        std::abs(pt.simulated->p_win - noisy_p) <= 4.0 * pt.simulated_std_err + 1e-12;
        csv.add_row({"00", format_number(theta), format_number(e.value), format_number(e.std_err),
                     format_number(pt.correlator_exact), format_number(pt.simulated->p_win),
                     format_number(pt.simulated_std_err), format_number(pt.exact.p_win), "0.5", ok ? "1" : "0"});
    }
    return csv;
}

void write_tomography(OutputDir &out, const std::vector<TomographyRecord> &records) {
    CsvTable table{{"state", "theta", "visibility", "fidelity", "fidelity_std_err", "closed_form_fidelity",
                    "clip_magnitude", "max_abs_imag"},
                   {}};
    nlohmann::json doc = nlohmann::json::array();
    for (const TomographyRecord &rec : records) {
        const CMatrix &rho = rec.result.rho_hat.matrix();
        const double max_imag = rho.imag().cwiseAbs().maxCoeff();
        table.add_row({rec.state.name, format_number(rec.state.theta), format_number(rec.state.visibility),
                       format_number(*rec.result.fidelity_to_target), format_number(rec.fidelity_std_err),
                       format_number(rec.closed_form_fidelity), format_number(rec.result.clip_magnitude),
                       format_number(max_imag)});
        out.write_csv("rho_" + rec.state.name + ".csv", density_to_csv(rho));
        doc.push_back({{"state", rec.state.name},
                       {"theta", rec.state.theta},
                       {"visibility", rec.state.visibility},
                       {"fidelity", *rec.result.fidelity_to_target},
                       {"fidelity_std_err", rec.fidelity_std_err},
                       {"closed_form_fidelity", rec.closed_form_fidelity},
                       {"clip_magnitude", rec.result.clip_magnitude},
                       {"rho_hat", density_to_json(rho)}});
    }
    out.write_csv("tomography_fidelity.csv", table);
    out.write_json("tomography.json", doc);
}

std::vector<double> default_scan_grid(int points) {
    require(points >= 1, "scan needs at least one point");
    std::vector<double> grid;
    for (int k = 0; k < points; ++k) {
        grid.push_back(points == 1 ? 0.0 : pi * static_cast<double>(k) / static_cast<double>(points - 1));
    }
    return grid;
}

VisibilityScan epr_scan(double fixed, int points, const ExperimentConfig &cfg, bool simulate) {
    const std::vector<double> grid = default_scan_grid(points);
    return visibility_scan(density_from_state(epr_family(pi / 4, SourceLabel::k00)), fixed, grid, cfg, simulate);
}

std::string table_text(const CsvTable &csv) {
    std::ostringstream out;
    for (const auto &h : csv.header) out << h << '\t';
    out << '\n';
    for (const auto &row : csv.rows) {
        for (const auto &cell : row) out << cell << '\t';
        out << '\n';
    }
    return out.str();
}

// ----------------------------------------------------------------------------
// commands

std::string cmd_paradox(const CommandOptions &opts, const ExperimentConfig &cfg, OutputDir &out) {
    check_known_options(opts, {"theta", "axis", "mode", "tol"});
    const double theta = parse_angle(option(opts, "theta", "pi/4"));
    const Axis axis = parse_paradox_axis(option(opts, "axis", "X"));
    const bool simulate = parse_mode(opts, "exact");
    const ParadoxRun run = evaluate_paradox(theta, axis, simulate, cfg, parse_tol(opts));
    const CsvTable csv = paradox_csv(run, theta, simulate, cfg.visibility);
    out.write_csv("paradox.csv", csv);
    out.write_json("paradox_spec.json", to_json(run.spec));
    out.write_json("verdict.json", paradox_json(run));
    if (simulate) {
        for (const auto &[key, table] : run.counts) {
            out.write_csv("counts_" + key.first + "_" + key.second + ".csv", counts_to_csv(table));
        }
    }
    std::ostringstream s;
    s << table_text(csv) << "exact verdict: " << (run.exact_verdict.lhv_feasible ? "LHV-feasible" : "LHV-infeasible")
      << " (gap " << format_number(run.exact_verdict.violation_gap) << ")\n";
    if (run.p_value) s << "p-value bound: " << format_number(run.p_value->value) << " (log10 " << format_number(run.p_value->log10) << ")\n";
    return s.str();
}

std::string cmd_game(const CommandOptions &opts, const ExperimentConfig &cfg, OutputDir &out) {
    check_known_options(opts, {"theta_grid", "strategy", "mode"});
    const std::vector<double> grid = parse_angle_list(option(opts, "theta_grid", "pi/12,pi/8,pi/6,pi/4"));
    const GameStrategy strategy = parse_game_strategy(option(opts, "strategy", "x"));
    const bool simulate = parse_mode(opts, "exact");
    CsvTable csv{{"theta", "p_win", "i00", "i11"}, {}};
    if (simulate) {
        for (const char *h : {"p_win_simulated", "p_win_std_err", "i00_simulated", "i11_simulated"}) csv.header.push_back(h);
    }
    nlohmann::json doc = nlohmann::json::array();
    for (double theta : grid) {
        const GamePoint pt = evaluate_game_point(theta, strategy, simulate, cfg);
        std::vector<std::string> row{format_number(theta), format_number(pt.exact.p_win),
                                     format_number(pt.exact.i_terms[0][0]), format_number(pt.exact.i_terms[1][1])};
        nlohmann::json entry{{"theta", theta}, {"exact", to_json(pt.exact)}};
        if (simulate) {
            row.push_back(format_number(pt.simulated->p_win));
            row.push_back(format_number(pt.simulated_std_err));
            row.push_back(format_number(pt.simulated->i_terms[0][0]));
            row.push_back(format_number(pt.simulated->i_terms[1][1]));
            entry["simulated"] = to_json(*pt.simulated);
            entry["simulated_std_err"] = pt.simulated_std_err;
        }
        csv.add_row(std::move(row));
        doc.push_back(std::move(entry));
    }
    out.write_csv("game.csv", csv);
    out.write_json("game.json", doc);
    return table_text(csv);
}

std::string cmd_tomo(const CommandOptions &opts, const ExperimentConfig &cfg, OutputDir &out) {
    check_known_options(opts, {"states"});
    const std::string which = option(opts, "states", "all");
    // An explicit visibility option overrides the per-state noise levels.
    std::optional<double> forced;
    if (opts.count("visibility") > 0) forced = cfg.visibility;
    std::vector<PreparedState> states = reference_states(forced);
    if (which != "all") {
        std::vector<PreparedState> chosen;
        for (double theta : parse_angle_list(which)) {
            require(theta > 0.0 && theta < pi / 2, "tomography angles must lie in (0, pi/2)");
            const double v = forced ? *forced : cfg.visibility;
            chosen.push_back({"psi00_" + angle_tag(theta), theta, epr_family(theta, SourceLabel::k00), v});
        }
        states = std::move(chosen);
    }
    const std::vector<TomographyRecord> records = tomography_report(states, cfg);
    write_tomography(out, records);
    std::ostringstream s;
    for (const TomographyRecord &rec : records) {
        s << rec.state.name << "\tF = " << format_number(*rec.result.fidelity_to_target) << " +- "
          << format_number(rec.fidelity_std_err) << "\t(closed form " << format_number(rec.closed_form_fidelity) << ")\n";
    }
    return s.str();
}

std::string cmd_dicke(const CommandOptions &opts, const ExperimentConfig &, OutputDir &out) {
    check_known_options(opts, {"n", "tol"});
    const std::string n_text = option(opts, "n", "3");
    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(n_text, &used);
        require(used == n_text.size(), "");
    } catch (const std::exception &) {
        throw InvalidArgument("n must be an integer, got '" + n_text + "'");
    }
    const double tol = parse_tol(opts);
    CsvTable constraints{{"z_position", "source", "observable", "expected_value"}, {}};
    CsvTable summary{{"z_position", "final_value", "claimed_value", "lhv_feasible", "violation_gap"}, {}};
    for (int z = 0; z < n; ++z) {
        const ParadoxSpec spec = dicke_paradox(n, z);
        for (const Constraint &c : spec.constraints()) {
            constraints.add_row({std::to_string(z), c.source_label, c.observable.to_string(), format_number(c.expected_value)});
        }
        const ParadoxVerdict verdict = lhv_mixture_test(spec, observations_from_spec(spec), tol);
        summary.add_row({std::to_string(z), format_number(spec.constraints().back().expected_value),
                         format_number(static_cast<double>(n - 1) / n), verdict.lhv_feasible ? "1" : "0",
                         format_number(verdict.violation_gap)});
        out.write_json("dicke_spec_z" + std::to_string(z) + ".json",
                       {{"spec", to_json(spec)}, {"verdict", to_json(verdict)}});
    }
    out.write_csv("dicke.csv", constraints);
    out.write_csv("dicke_summary.csv", summary);
    return table_text(summary);
}

std::string cmd_visibility(const CommandOptions &opts, const ExperimentConfig &cfg, OutputDir &out) {
    check_known_options(opts, {"fixed", "mode", "points"});
    const double fixed = parse_angle(option(opts, "fixed", "0"));
    const bool simulate = parse_mode(opts, "simulated");
    const std::string points_text = option(opts, "points", "73");
    int points = 0;
    try {
        points = std::stoi(points_text);
    } catch (const std::exception &) {
        throw InvalidArgument("points must be an integer");
    }
    const VisibilityScan scan = epr_scan(fixed, points, cfg, simulate);
    out.write_csv("visibility_" + angle_tag(fixed) + ".csv", scan_to_csv(scan));
    out.write_json("visibility.json", to_json(scan));
    std::ostringstream s;
    s << "V = " << format_number(scan.visibility) << (scan.exceeds_classical_bound ? " > " : " <= ")
      << kClassicalVisibilityBound << " (classical bound)\n";
    return s.str();
}

std::string cmd_report(const CommandOptions &opts, const ExperimentConfig &cfg, OutputDir &out) {
    check_known_options(opts, {});
    const std::vector<double> thetas{pi / 12, pi / 8, pi / 6, pi / 4};
    std::ostringstream s;

    const ParadoxRun table1 = evaluate_paradox(pi / 4, Axis::X, true, cfg, 1e-10);
    out.write_csv("table1.csv", paradox_csv(table1, pi / 4, true, cfg.visibility));
    out.write_json("table1_verdict.json", paradox_json(table1));
    s << "Table 1: p-value bound " << format_number(table1.p_value->value) << " (log10 "
      << format_number(table1.p_value->log10) << ")\n";

    std::vector<ParadoxRun> runs_x, runs_y;
    out.write_csv("table_s1.csv", generalized_paradox_table(Axis::X, thetas, cfg, &runs_x));
    out.write_csv("table_s2.csv", generalized_paradox_table(Axis::Y, thetas, cfg, &runs_y));
    out.write_csv("table_s3.csv", game_table(GameStrategy::kPauliX, thetas, cfg));
    out.write_csv("table_s4.csv", game_table(GameStrategy::kPauliZ, thetas, cfg));

    CsvTable fig3{{"panel", "theta", "source", "observable", "value", "std_err", "theoretical"}, {}};
    for (const auto *runs : {&runs_x, &runs_y}) {
        for (std::size_t k = 0; k < runs->size(); ++k) {
            for (const ParadoxRowResult &row : (*runs)[k].rows) {
                fig3.add_row({runs == &runs_x ? "XZ" : "YZ", format_number(thetas[k]), row.constraint.source_label,
                              row.constraint.observable.to_string(), format_number(row.simulated->value),
                              format_number(row.simulated->std_err), format_number(row.constraint.expected_value)});
            }
        }
    }
    out.write_csv("figure3.csv", fig3);

    CsvTable curve{{"theta", "p_win_x", "p_win_z", "p_win_classical"}, {}};
    for (int deg = 1; deg < 90; ++deg) {
        const double theta = deg * pi / 180.0;
        curve.add_row({format_number(theta), format_number(evaluate_strategy(theta, GameStrategy::kPauliX).p_win),
                       format_number(evaluate_strategy(theta, GameStrategy::kPauliZ).p_win), "0.5"});
    }
    out.write_csv("figure4_curve.csv", curve);
    CsvTable points{{"strategy", "theta", "p_win", "std_err", "theoretical"}, {}};
    for (GameStrategy strategy : {GameStrategy::kPauliX, GameStrategy::kPauliZ}) {
        for (double theta : thetas) {
            const GamePoint pt = evaluate_game_point(theta, strategy, true, cfg);
            points.add_row({strategy == GameStrategy::kPauliX ? "x" : "z", format_number(theta),
                            format_number(pt.simulated->p_win), format_number(pt.simulated_std_err),
                            format_number(pt.exact.p_win)});
        }
    }
    out.write_csv("figure4_points.csv", points);

    const std::vector<TomographyRecord> records = tomography_report(reference_states(), cfg);
    write_tomography(out, records);

    nlohmann::json scans;
    for (double fixed : {0.0, 3.0 * pi / 4.0}) {
        const VisibilityScan scan = epr_scan(fixed, 73, cfg, true);
        out.write_csv("visibility_" + angle_tag(fixed) + ".csv", scan_to_csv(scan));
        scans[angle_tag(fixed)] = to_json(scan);
        s << "visibility (fixed " << angle_tag(fixed) << "): " << format_number(scan.visibility) << "\n";
    }
    out.write_json("visibility.json", scans);
    s << "wrote " << out.files().size() << " files\n";
    return s.str();
}

}  // namespace

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names{"paradox", "game", "tomo", "dicke", "visibility", "report"};
    return names;
}

ExperimentConfig resolve_config(const CommandOptions &options) {
    ExperimentConfig cfg;
    if (const auto it = options.find("config"); it != options.end() && !it->second.empty()) {
        cfg = load_config_file(it->second);
    }
    for (const std::string &key : kConfigKeys) {
        if (key == "counts_per_setting") continue;
        if (const auto it = options.find(key); it != options.end()) apply_config_entry(cfg, key, it->second);
    }
    if (const auto it = options.find("counts_per_setting"); it != options.end()) {
        apply_config_entry(cfg, "counts_per_setting", it->second);
    }
    cfg.validate();
    return cfg;
}

ParadoxRun evaluate_paradox(double theta, Axis axis, bool simulate, const ExperimentConfig &cfg, double tol) {
    ParadoxSpec spec = coherence_paradox(theta, axis);
    const Observations born = born_observations(spec, epr_family(theta, SourceLabel::k00));
    ParadoxRun run{spec, {}, lhv_mixture_test(spec, born, tol), std::nullopt, std::nullopt, {}};
    Observations simulated;
    for (const Constraint &c : spec.constraints()) {
        ParadoxRowResult row{c, born.at({c.source_label, c.observable.to_string()}), std::nullopt};
        if (std::abs(row.born_value - c.expected_value) > kEqualityTolerance) {
            throw NumericalError("Born-rule value of <" + c.observable.to_string() + "> on " + c.source_label +
                                 " disagrees with the paradox constraint");
        }
        if (simulate) {
            CountTable table = simulate_source(c.source_label, theta, setting_of(c.observable), cfg);
            row.simulated = correlator_from_counts(table);
            simulated[{c.source_label, c.observable.to_string()}] = row.simulated->value;
            run.counts.emplace(std::make_pair(c.source_label, c.observable.to_string()), std::move(table));
        }
        run.rows.push_back(std::move(row));
    }
    if (simulate) {
        run.simulated_verdict = lhv_mixture_test(spec, simulated, tol);
        run.p_value = paradox_p_value(spec, run.counts);
    }
    return run;
}

GamePoint evaluate_game_point(double theta, GameStrategy strategy, bool simulate, const ExperimentConfig &cfg) {
    GamePoint pt;
    pt.theta = theta;
    pt.exact = evaluate_strategy(theta, strategy);
    const LocalObservable m = strategy_observable(strategy);
    const ObservableChain chain({m.axis, m.axis});
    pt.correlator_exact = expectation(epr_family(theta, SourceLabel::k00), chain);
    if (!simulate) return pt;

    const Setting setting{m.axis, m.axis};
    const CountTable t00 = simulate_source("00", theta, setting, cfg);
    const CountTable t01 = simulate_source("01", theta, setting, cfg);
    const CountTable t10 = simulate_source("10", theta, setting, cfg);
    const EstimatedCorrelator e00 = correlator_from_counts(t00);
    const EstimatedCorrelator e01 = correlator_from_counts(t01);
    const EstimatedCorrelator e10 = correlator_from_counts(t10);
    const JointDistribution dist({empirical_row(t00), empirical_row(t01), empirical_row(t10), kUniformRow});
    GameEvaluation sim = winning_probability(dist);
    sim.strategy_note = pt.exact.strategy_note + " (simulated counts)";
    pt.simulated = sim;
    pt.simulated_std_err =
        std::sqrt(e00.std_err * e00.std_err + e01.std_err * e01.std_err + e10.std_err * e10.std_err) / 8.0;
    pt.correlator_simulated = e00;
    return pt;
}

RunRecord run_command(std::string_view command, const CommandOptions &options, const fs::path &out_dir) {
    const auto started = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = resolve_config(options);
    OutputDir out(out_dir);
    RunRecord record;
    record.command = std::string(command);
    if (command == "paradox") {
        record.summary = cmd_paradox(options, cfg, out);
    } else if (command == "game") {
        record.summary = cmd_game(options, cfg, out);
    } else if (command == "tomo") {
        record.summary = cmd_tomo(options, cfg, out);
    } else if (command == "dicke") {
        record.summary = cmd_dicke(options, cfg, out);
    } else if (command == "visibility") {
        record.summary = cmd_visibility(options, cfg, out);
    } else if (command == "report") {
        record.summary = cmd_report(options, cfg, out);
    } else {
        throw InvalidArgument("unknown command '" + std::string(command) + "'");
    }
    record.files = out.files();

    // Resolved options make the manifest self-contained for replay.
    nlohmann::json resolved = nlohmann::json::object();
    for (const auto &[key, value] : options) {
        if (key == "config" || key == "counts_per_setting") continue;
        resolved[key] = value;
    }
    std::istringstream cfg_text(config_to_text(cfg));
    for (std::string line; std::getline(cfg_text, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) resolved[line.substr(0, eq)] = line.substr(eq + 3);
    }
    nlohmann::json files = nlohmann::json::array();
    for (const fs::path &p : record.files) files.push_back(p.filename().string());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const nlohmann::json manifest{{"command", record.command},
                                  {"version", kVersion},
                                  {"seed", cfg.seed},
                                  {"options", options},
                                  {"resolved_options", resolved},
                                  {"config", to_json(cfg)},
                                  {"files", files},
                                  {"wall_clock_seconds", wall}};
    record.manifest = out_dir / "manifest.json";
    write_text_file(record.manifest, manifest.dump(2) + "\n");
    return record;
}

RunRecord replay_manifest(const fs::path &manifest, const fs::path &out_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(manifest));
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
    CommandOptions options;
    try {
        for (const auto &[key, value] : doc.at("resolved_options").items()) options[key] = value.get<std::string>();
        return run_command(doc.at("command").get<std::string>(), options, out_dir);
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

}  // namespace coherence
