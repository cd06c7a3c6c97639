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

#include "coherence/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coherence/error.hpp"

namespace coherence {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_plain_double(std::string_view text, double &out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double cell_double(const std::string &cell) {
    double v = 0.0;
    if (!parse_plain_double(cell, v)) throw IoError("expected a number in CSV cell, got '" + cell + "'");
    return v;
}

std::uint64_t cell_u64(const std::string &cell) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw IoError("expected a non-negative integer in CSV cell, got '" + cell + "'");
    }
    return v;
}

}  // namespace

double parse_angle(std::string_view text) {
    const std::string original(text);
    text = trim(text);
    require(!text.empty(), "empty angle");
    double value = 0.0;
    if (parse_plain_double(text, value)) {
        require(std::isfinite(value), "angle must be finite");
        return value;
    }
    double sign = 1.0;
    if (text.front() == '-' || text.front() == '+') {
        sign = text.front() == '-' ? -1.0 : 1.0;
        text.remove_prefix(1);
    }
    const auto pi_pos = text.find("pi");
    require(pi_pos != std::string_view::npos, "cannot parse angle '" + original + "'");
    std::string_view coef_text = text.substr(0, pi_pos);
    std::string_view rest = text.substr(pi_pos + 2);
    if (!coef_text.empty() && coef_text.back() == '*') coef_text.remove_suffix(1);
    double coef = 1.0;
    if (!coef_text.empty()) {
        require(parse_plain_double(coef_text, coef), "cannot parse angle '" + original + "'");
    }
    double denom = 1.0;
    if (!rest.empty()) {
        require(rest.front() == '/', "cannot parse angle '" + original + "'");
        rest.remove_prefix(1);
        require(parse_plain_double(rest, denom) && denom != 0.0, "cannot parse angle '" + original + "'");
    }
    return sign * coef * std::numbers::pi / denom;
}

std::vector<double> parse_angle_list(std::string_view text) {
    require(!trim(text).empty(), "angle list is empty");
    std::vector<double> out;
    for (std::string_view part : split(text, ',')) out.push_back(parse_angle(part));
    return out;
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf.data(), ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
    require(row.size() == header.size(), "CSV row width does not match the header");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    emit(header);
    for (const auto &row : rows) emit(row);
    return out;
}

CsvTable CsvTable::parse(std::string_view text) {
    CsvTable table;
    bool first = true;
    for (std::string_view line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        for (std::string_view cell : split(line, ',')) cells.emplace_back(cell);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) throw IoError("CSV row width does not match the header");
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw IoError("CSV text has no header");
    return table;
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

nlohmann::json to_json(const ParadoxSpec &spec) {
    nlohmann::json doc;
    doc["constraints"] = nlohmann::json::array();
    for (const Constraint &c : spec.constraints()) {
        doc["constraints"].push_back(
            {{"source", c.source_label}, {"observable", c.observable.to_string()}, {"expected_value", c.expected_value}});
    }
    const MixtureClaim &claim = spec.mixture_claim();
    doc["mixture_claim"] = {
        {"mixed_label", claim.mixed_label}, {"component_labels", claim.component_labels}, {"note", claim.note}};
    return doc;
}

ParadoxSpec paradox_spec_from_json(const nlohmann::json &doc) {
    try {
        std::vector<Constraint> constraints;
        for (const auto &c : doc.at("constraints")) {
            constraints.push_back({c.at("source").get<std::string>(),
                                   ObservableChain::parse(c.at("observable").get<std::string>()),
                                   c.at("expected_value").get<double>()});
        }
        const auto &claim_doc = doc.at("mixture_claim");
        MixtureClaim claim{claim_doc.at("mixed_label").get<std::string>(),
                           claim_doc.at("component_labels").get<std::vector<std::string>>(),
                           claim_doc.value("note", std::string{})};
        return ParadoxSpec(std::move(constraints), std::move(claim));
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("malformed paradox document: ") + e.what());
    }
}

nlohmann::json to_json(const ParadoxVerdict &verdict) {
    return {{"per_constraint_values", verdict.per_constraint_values},
            {"lhv_feasible", verdict.lhv_feasible},
            {"violation_gap", verdict.violation_gap},
            {"witness_weights", verdict.witness_weights}};
}

nlohmann::json to_json(const GameEvaluation &eval) {
    return {{"p_win", eval.p_win},
            {"i_terms", {{"00", eval.i_terms[0][0]}, {"01", eval.i_terms[0][1]}, {"10", eval.i_terms[1][0]},
                         {"11", eval.i_terms[1][1]}}},
            {"strategy_note", eval.strategy_note}};
}

nlohmann::json to_json(const ExperimentConfig &cfg) {
    return {{"pair_rate", cfg.pair_rate},
            {"duration_per_setting", cfg.duration_per_setting},
            {"num_trials", cfg.num_trials},
            {"visibility", cfg.visibility},
            {"seed", cfg.seed},
            {"efficiency", cfg.efficiency},
            {"bootstrap_replicates", cfg.bootstrap_replicates},
            {"expected_counts_per_setting", cfg.expected_counts_per_setting()}};
}

nlohmann::json to_json(const VisibilityScan &scan) {
    return {{"fixed_angle", scan.fixed_angle},
            {"visibility", scan.visibility},
            {"classical_bound", kClassicalVisibilityBound},
            {"exceeds_classical_bound", scan.exceeds_classical_bound},
            {"fit", {{"offset", scan.fit[0]}, {"cos2", scan.fit[1]}, {"sin2", scan.fit[2]}}},
            {"num_points", scan.points.size()}};
}

nlohmann::json density_to_json(const CMatrix &matrix) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        std::vector<double> re_row, im_row;
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
            re_row.push_back(matrix(r, c).real());
            im_row.push_back(matrix(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    return {{"re", re}, {"im", im}};
}

CsvTable counts_to_csv(const CountTable &table) {
    CsvTable csv{{"u", "v", "a", "b", "trial", "count"}, {}};
    const std::string u(1, axis_char(table.setting.a));
    const std::string v(1, axis_char(table.setting.b));
    for (std::size_t t = 0; t < table.per_trial.size(); ++t) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                csv.add_row({u, v, std::to_string(a), std::to_string(b), std::to_string(t),
                             std::to_string(table.per_trial[t][static_cast<std::size_t>(2 * a + b)])});
            }
        }
    }
    return csv;
}

CountTable counts_from_csv(const CsvTable &csv, const ExperimentConfig &cfg) {
    const std::vector<std::string> expected{"u", "v", "a", "b", "trial", "count"};
    if (csv.header != expected) throw IoError("count CSV header must be u,v,a,b,trial,count");
    if (csv.rows.empty()) throw IoError("count CSV has no rows");
    CountTable table;
    table.config = cfg;
    table.setting = parse_setting(csv.rows.front()[0] + csv.rows.front()[1]);
    for (const auto &row : csv.rows) {
        if (parse_setting(row[0] + row[1]) != table.setting) throw IoError("count CSV mixes several settings");
        const auto a = cell_u64(row[2]);
        const auto b = cell_u64(row[3]);
        const auto trial = cell_u64(row[4]);
        if (a > 1 || b > 1) throw IoError("outcomes in count CSV must be 0 or 1");
        if (trial >= table.per_trial.size()) table.per_trial.resize(trial + 1, {0, 0, 0, 0});
        table.per_trial[trial][2 * a + b] = cell_u64(row[5]);
    }
    table.config.num_trials = static_cast<int>(table.per_trial.size());
    return table;
}

CsvTable density_to_csv(const CMatrix &matrix) {
    CsvTable csv;
    csv.header = {"block", "row"};
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) csv.header.push_back("c" + std::to_string(c));
    for (const char *block : {"re", "im"}) {
        const bool real = std::string_view(block) == "re";
        for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
            std::vector<std::string> row{block, std::to_string(r)};
            for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                row.push_back(format_number(real ? matrix(r, c).real() : matrix(r, c).imag()));
            }
            csv.add_row(std::move(row));
        }
    }
    return csv;
}

CMatrix density_from_csv(const CsvTable &csv) {
    if (csv.header.size() < 3 || csv.header[0] != "block" || csv.header[1] != "row") {
        throw IoError("density CSV header must start with block,row");
    }
    const auto dim = static_cast<Eigen::Index>(csv.header.size() - 2);
    if (csv.rows.size() != static_cast<std::size_t>(2 * dim)) throw IoError("density CSV needs re and im blocks");
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto &row : csv.rows) {
        const auto r = static_cast<Eigen::Index>(cell_u64(row[1]));
        if (r >= dim) throw IoError("density CSV row index out of range");
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double v = cell_double(row[static_cast<std::size_t>(c + 2)]);
            if (row[0] == "re") {
                m(r, c).real(v);
            } else if (row[0] == "im") {
                m(r, c).imag(v);
            } else {
                throw IoError("density CSV block must be re or im");
            }
        }
    }
    return m;
}

CsvTable scan_to_csv(const VisibilityScan &scan) {
    CsvTable csv{{"angle", "probability", "rate", "counts"}, {}};
    for (const ScanPoint &p : scan.points) {
        csv.add_row({format_number(p.angle), format_number(p.probability), format_number(p.rate),
                     std::to_string(p.counts)});
    }
    return csv;
}

}  // namespace coherence
