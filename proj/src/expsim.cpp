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

#include "coherence/expsim.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "coherence/error.hpp"
#include "coherence/mixture.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace coherence {

namespace {

constexpr std::uint64_t kPurposeCounts = 1;
constexpr std::uint64_t kPurposeBootstrap = 2;
constexpr std::uint64_t kPurposeScan = 3;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("config key '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("config key '" + std::string(key) + "' expects a non-negative integer, got '" +
                              std::string(text) + "'");
    }
    return v;
}

std::uint64_t poisson_draw(std::mt19937_64 &rng, double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

double sample_std(const std::vector<double> &values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

void ExperimentConfig::validate() const {
    require(pair_rate > 0.0 && std::isfinite(pair_rate), "pair_rate must be positive");
    require(duration_per_setting > 0.0 && std::isfinite(duration_per_setting), "duration_per_setting must be positive");
    require(num_trials >= 1, "num_trials must be at least 1");
    require(visibility >= 0.0 && visibility <= 1.0, "visibility must lie in [0, 1]");
    require(efficiency > 0.0 && efficiency <= 1.0, "efficiency must lie in (0, 1]");
    require(bootstrap_replicates >= 2, "bootstrap_replicates must be at least 2");
}

void ExperimentConfig::set_counts_per_setting(double counts) {
    require(counts > 0.0 && std::isfinite(counts), "counts per setting must be positive");
    duration_per_setting = counts / (pair_rate * efficiency * static_cast<double>(num_trials));
}

void apply_config_entry(ExperimentConfig &cfg, std::string_view key, std::string_view value) {
    if (key == "pair_rate") {
        cfg.pair_rate = parse_double(key, value);
    } else if (key == "duration_per_setting") {
        cfg.duration_per_setting = parse_double(key, value);
    } else if (key == "num_trials") {
        cfg.num_trials = static_cast<int>(parse_u64(key, value));
    } else if (key == "visibility") {
        cfg.visibility = parse_double(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "efficiency") {
        cfg.efficiency = parse_double(key, value);
    } else if (key == "bootstrap_replicates") {
        cfg.bootstrap_replicates = static_cast<int>(parse_u64(key, value));
    } else if (key == "counts_per_setting") {
        cfg.set_counts_per_setting(parse_double(key, value));
    } else {
        throw InvalidArgument("unknown config key '" + std::string(key) + "'");
    }
}

void apply_config_text(ExperimentConfig &cfg, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("config line " + std::to_string(line_no) + " is not 'key = value'");
        }
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
}

ExperimentConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExperimentConfig cfg;
    apply_config_text(cfg, buffer.str());
    return cfg;
}

std::string config_to_text(const ExperimentConfig &cfg) {
    auto shortest = [](double v) {
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    };
    std::ostringstream out;
    out << "pair_rate = " << shortest(cfg.pair_rate) << "\n"
        << "duration_per_setting = " << shortest(cfg.duration_per_setting) << "\n"
        << "num_trials = " << cfg.num_trials << "\n"
        << "visibility = " << shortest(cfg.visibility) << "\n"
        << "seed = " << cfg.seed << "\n"
        << "efficiency = " << shortest(cfg.efficiency) << "\n"
        << "bootstrap_replicates = " << cfg.bootstrap_replicates << "\n";
    return out.str();
}

Setting parse_setting(std::string_view text) {
    require(text.size() == 2, "setting must be two axis letters such as 'XY'");
    Setting s{parse_axis(text[0]), parse_axis(text[1])};
    require(s.a != Axis::I && s.b != Axis::I, "setting axes must be X, Y or Z");
    return s;
}

std::uint64_t stream_id(std::string_view source_label, const Setting &setting) {
    // FNV-1a over "label|AB"
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    };
    for (char c : source_label) mix(c);
    mix('|');
    for (char c : setting.to_string()) mix(c);
    return h;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, std::uint64_t purpose) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffU); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index), lo(purpose)};
    return std::mt19937_64(seq);
}

std::array<std::uint64_t, 4> CountTable::pooled() const {
    std::array<std::uint64_t, 4> sum{};
    for (const auto &trial : per_trial) {
        for (std::size_t c = 0; c < 4; ++c) sum[c] += trial[c];
    }
    return sum;
}

std::uint64_t CountTable::total() const {
    const auto p = pooled();
    return p[0] + p[1] + p[2] + p[3];
}

CountTable simulate_counts(const DensityOperator &state, const Setting &setting, const ExperimentConfig &cfg,
                           std::uint64_t stream) {
    cfg.validate();
    require(state.num_qubits() == 2, "coincidence simulation needs a two-qubit state");
    require(setting.a != Axis::I && setting.b != Axis::I, "setting axes must be X, Y or Z");
    const DensityOperator noisy = werner_mix(state, cfg.visibility);
    const OutcomeRow probs = born_row(noisy, LocalObservable{setting.a, +1}, LocalObservable{setting.b, +1});
    const double scale = cfg.pair_rate * cfg.efficiency * cfg.duration_per_setting;

    CountTable table;
    table.setting = setting;
    table.config = cfg;
    table.stream = stream;
    table.per_trial.resize(static_cast<std::size_t>(cfg.num_trials));
    for (int t = 0; t < cfg.num_trials; ++t) {
        std::mt19937_64 rng = make_rng(cfg.seed, stream, static_cast<std::uint64_t>(t), kPurposeCounts);
        for (std::size_t c = 0; c < 4; ++c) {
            table.per_trial[static_cast<std::size_t>(t)][c] = poisson_draw(rng, scale * std::max(0.0, probs[c]));
        }
    }
    return table;
}

CountTable count_table_from_counts(const Setting &setting, const std::array<std::uint64_t, 4> &counts,
                                   const ExperimentConfig &cfg, std::uint64_t stream) {
    CountTable table;
    table.setting = setting;
    table.config = cfg;
    table.config.num_trials = 1;
    table.stream = stream;
    table.per_trial.push_back(counts);
    return table;
}

double correlator_point(const std::array<std::uint64_t, 4> &counts) {
    const double n00 = static_cast<double>(counts[0]);
    const double n01 = static_cast<double>(counts[1]);
    const double n10 = static_cast<double>(counts[2]);
    const double n11 = static_cast<double>(counts[3]);
    const double total = n00 + n01 + n10 + n11;
    require(total > 0.0, "correlator needs a positive coincidence total");
    return (n00 - n01 - n10 + n11) / total;
}

EstimatedCorrelator correlator_from_counts(const CountTable &counts) {
    return correlator_from_counts(counts, counts.config.bootstrap_replicates, counts.config.seed);
}

EstimatedCorrelator correlator_from_counts(const CountTable &counts, int replicates, std::uint64_t seed) {
    require(replicates >= 2, "bootstrap needs at least two replicates");
    const auto pooled = counts.pooled();
    EstimatedCorrelator est;
    est.value = correlator_point(pooled);
    est.n_total = pooled[0] + pooled[1] + pooled[2] + pooled[3];
    est.delta_std_err = std::sqrt(std::max(0.0, 1.0 - est.value * est.value) / static_cast<double>(est.n_total));

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
        std::mt19937_64 rng = make_rng(seed, counts.stream, static_cast<std::uint64_t>(r), kPurposeBootstrap);
        std::array<std::uint64_t, 4> resampled{};
        for (std::size_t c = 0; c < 4; ++c) resampled[c] = poisson_draw(rng, static_cast<double>(pooled[c]));
        if (resampled[0] + resampled[1] + resampled[2] + resampled[3] == 0) continue;
        samples.push_back(correlator_point(resampled));
    }
    est.std_err = sample_std(samples);
    return est;
}

double hoeffding_bound(double n, double gap) { return std::exp(-n * gap * gap / 2.0); }

PValue paradox_p_value(const ParadoxSpec &spec, const CountMap &counts) {
    auto find = [&counts](const std::string &label, const ObservableChain &obs) -> const CountTable & {
        const auto it = counts.find({label, obs.to_string()});
        if (it == counts.end()) {
            throw InvalidArgument("missing counts for <" + obs.to_string() + "> on source " + label);
        }
        if (it->second.total() == 0) {
            throw InvalidArgument("degenerate counts (zero total) for <" + obs.to_string() + "> on source " + label);
        }
        return it->second;
    };
    for (const Constraint &c : spec.constraints()) find(c.source_label, c.observable);

    const MixtureClaim &claim = spec.mixture_claim();
    const std::vector<ObservableChain> observables = spec.mixed_observables();
    std::vector<double> target, scale;
    for (const ObservableChain &o : observables) {
        const CountTable &t = find(claim.mixed_label, o);
        target.push_back(correlator_point(t.pooled()));
        scale.push_back(std::sqrt(static_cast<double>(t.total())));
    }
    std::vector<std::vector<double>> components;
    for (const std::string &label : claim.component_labels) {
        std::vector<double> row;
        for (const ObservableChain &o : observables) row.push_back(correlator_point(find(label, o).pooled()));
        components.push_back(std::move(row));
    }
    const MixtureFit fit = fit_mixture(components, target, scale);
    PValue p;
    p.scaled_gap = fit.residual;
    p.weights = fit.weights;
    const double log_p = -fit.residual * fit.residual / 2.0;
    p.log10 = log_p / std::log(10.0);
    p.value = std::max(std::exp(log_p), std::numeric_limits<double>::min());
    return p;
}

Eigen::Matrix2cd polarizer_projector(double angle) {
    Eigen::Vector2cd v(std::cos(angle), std::sin(angle));
    return v * v.adjoint();
}

double fringe_visibility(std::span<const double> angles, std::span<const double> values, std::array<double, 3> *fit) {
    require(!angles.empty() && angles.size() == values.size(), "fringe needs matching, non-empty angle and value lists");
    std::vector<double> distinct(angles.begin(), angles.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        if (fit != nullptr) *fit = {0.0, 0.0, 0.0};
        return (*hi + *lo) > 0.0 ? (*hi - *lo) / (*hi + *lo) : 0.0;
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(angles.size()), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(angles.size()));
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        design(r, 0) = 1.0;
        design(r, 1) = std::cos(2.0 * angles[i]);
        design(r, 2) = std::sin(2.0 * angles[i]);
        rhs(r) = values[i];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    if (fit != nullptr) *fit = {coef(0), coef(1), coef(2)};
    const double amplitude = std::hypot(coef(1), coef(2));
    return coef(0) > 0.0 ? amplitude / coef(0) : 0.0;
}

VisibilityScan visibility_scan(const DensityOperator &state, double fixed_angle, std::span<const double> scan_grid,
                               const ExperimentConfig &cfg, bool simulate) {
    cfg.validate();
    require(state.num_qubits() == 2, "visibility scan needs a two-qubit state");
    require(!scan_grid.empty(), "scan grid must not be empty");
    const DensityOperator noisy = werner_mix(state, cfg.visibility);
    const Eigen::Matrix2cd fixed_proj = polarizer_projector(fixed_angle);
    const double rate_scale = cfg.pair_rate * cfg.efficiency;
    const double exposure = cfg.duration_per_setting * static_cast<double>(cfg.num_trials);

    VisibilityScan scan;
    scan.fixed_angle = fixed_angle;
    std::vector<double> angles, values;
    for (std::size_t i = 0; i < scan_grid.size(); ++i) {
        const double angle = scan_grid[i];
        const CMatrix proj = Eigen::kroneckerProduct(fixed_proj, polarizer_projector(angle)).eval();
        ScanPoint pt;
        pt.angle = angle;
        pt.probability = std::max(0.0, (proj * noisy.matrix()).trace().real());
        if (simulate) {
            std::mt19937_64 rng = make_rng(cfg.seed, std::bit_cast<std::uint64_t>(fixed_angle), static_cast<std::uint64_t>(i), kPurposeScan);
            pt.counts = poisson_draw(rng, rate_scale * exposure * pt.probability);
            pt.rate = static_cast<double>(pt.counts) / exposure;
        } else {
            pt.rate = rate_scale * pt.probability;
        }
        angles.push_back(angle);
        values.push_back(pt.rate);
        scan.points.push_back(pt);
    }
    scan.visibility = fringe_visibility(angles, values, &scan.fit);
    scan.exceeds_classical_bound = scan.visibility > kClassicalVisibilityBound;
    return scan;
}

}  // namespace coherence
