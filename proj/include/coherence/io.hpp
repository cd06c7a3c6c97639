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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coherence/expsim.hpp"
#include "coherence/game.hpp"
#include "coherence/lhv.hpp"
#include "coherence/qstate.hpp"

namespace coherence {

/// Accepts decimals ("0.5", "-1e-3") and fractions of pi ("pi", "pi/12",
/// "3pi/4", "3*pi/4", "-pi/8").
double parse_angle(std::string_view text);
/// Comma-separated angle list; empty input is an error.
std::vector<double> parse_angle_list(std::string_view text);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

/// Minimal CSV table: a header plus rows of already-formatted cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_string() const;
    /// Parses text produced by to_string (no quoting support).
    static CsvTable parse(std::string_view text);
};

void write_text_file(const std::filesystem::path &path, std::string_view text);
std::string read_text_file(const std::filesystem::path &path);

nlohmann::json to_json(const ParadoxSpec &spec);
ParadoxSpec paradox_spec_from_json(const nlohmann::json &doc);
nlohmann::json to_json(const ParadoxVerdict &verdict);
nlohmann::json to_json(const GameEvaluation &eval);
nlohmann::json to_json(const ExperimentConfig &cfg);
nlohmann::json to_json(const VisibilityScan &scan);
nlohmann::json density_to_json(const CMatrix &matrix);

/// Columns u, v, a, b, trial, count.
CsvTable counts_to_csv(const CountTable &table);
/// Inverse of counts_to_csv; every row must share one (u, v) setting.
CountTable counts_from_csv(const CsvTable &csv, const ExperimentConfig &cfg = {});

/// Two blocks of rows ("re" then "im"): block, row, c0 .. c{d-1}.
CsvTable density_to_csv(const CMatrix &matrix);
CMatrix density_from_csv(const CsvTable &csv);

/// Columns angle, probability, rate, counts.
CsvTable scan_to_csv(const VisibilityScan &scan);

}  // namespace coherence
