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

#include "coherence/tomo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "coherence/error.hpp"

namespace coherence {

namespace {

constexpr std::uint64_t kPurposeTomoBootstrap = 4;

int axis_index(Axis a) { return static_cast<int>(a); }

}  // namespace

std::vector<Setting> tomography_settings() {
    std::vector<Setting> out;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        for (Axis b : {Axis::X, Axis::Y, Axis::Z}) out.push_back({a, b});
    }
    return out;
}

PauliTable empirical_pauli_table(const SettingCounts &counts) {
    PauliTable t{};
    t[0][0] = 1.0;
    std::array<double, 4> marg_a{}, marg_b{};
    for (const Setting &s : tomography_settings()) {
        const auto it = counts.find(s);
        if (it == counts.end()) throw InvalidArgument("tomography is missing setting " + s.to_string());
        const auto n = it->second.pooled();
        const double total = static_cast<double>(n[0] + n[1] + n[2] + n[3]);
        require(total > 0.0, "tomography setting " + s.to_string() + " has zero counts");
        const auto i = static_cast<std::size_t>(axis_index(s.a));
        const auto j = static_cast<std::size_t>(axis_index(s.b));
        t[i][j] = (static_cast<double>(n[0]) - static_cast<double>(n[1]) - static_cast<double>(n[2]) +
                   static_cast<double>(n[3])) /
                  total;
        marg_a[i] += (static_cast<double>(n[0]) + static_cast<double>(n[1]) - static_cast<double>(n[2]) -
                      static_cast<double>(n[3])) /
                     total / 3.0;
        marg_b[j] += (static_cast<double>(n[0]) - static_cast<double>(n[1]) + static_cast<double>(n[2]) -
                      static_cast<double>(n[3])) /
                     total / 3.0;
    }
    for (std::size_t k = 1; k < 4; ++k) {
        t[k][0] = marg_a[k];
        t[0][k] = marg_b[k];
    }
    return t;
}

CMatrix linear_inversion(const PauliTable &table) {
    CMatrix rho = CMatrix::Zero(4, 4);
    const std::array<Axis, 4> axes{Axis::I, Axis::X, Axis::Y, Axis::Z};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            rho += 0.25 * table[i][j] * Eigen::kroneckerProduct(pauli_matrix(axes[i]), pauli_matrix(axes[j])).eval();
        }
    }
    return rho;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd &values) {
    const auto n = values.size();
    require(n > 0, "cannot project an empty vector");
    std::vector<double> sorted(values.data(), values.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cumulative += sorted[static_cast<std::size_t>(k)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) shift = candidate;
    }
    return (values.array() - shift).cwiseMax(0.0).matrix();
}

DensityOperator project_to_density(const CMatrix &hermitian, double *negative_mass) {
    const CMatrix herm = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in density projection");
    const Eigen::VectorXd &eig = solver.eigenvalues();
    if (negative_mass != nullptr) {
        *negative_mass = (-eig.array()).cwiseMax(0.0).sum();
    }
    const Eigen::VectorXd projected = project_to_simplex(eig);
    const CMatrix &vecs = solver.eigenvectors();
    CMatrix rho = vecs * projected.cast<Complex>().asDiagonal() * vecs.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    // restore an exact unit trace against rounding in the reconstruction
    rho /= rho.trace().real();
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
    return DensityOperator(n, std::move(rho));
}

TomographyResult reconstruct(const SettingCounts &counts, const DensityOperator *target) {
    const PauliTable table = empirical_pauli_table(counts);
    CMatrix linear = linear_inversion(table);
    double clipped = 0.0;
    DensityOperator rho = project_to_density(linear, &clipped);
    TomographyResult result{std::move(rho), std::move(linear), std::nullopt, tomography_settings(), clipped};
    if (target != nullptr) result.fidelity_to_target = fidelity(result.rho_hat, *target);
    return result;
}

double tomography_fidelity_std_err(const SettingCounts &counts, const DensityOperator &target, int replicates,
                                   std::uint64_t seed) {
    require(replicates >= 2, "bootstrap needs at least two replicates");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
        SettingCounts resampled;
        bool degenerate = false;
        for (const auto &[setting, table] : counts) {
            std::mt19937_64 rng = make_rng(seed, table.stream, static_cast<std::uint64_t>(r), kPurposeTomoBootstrap);
            const auto pooled = table.pooled();
            std::array<std::uint64_t, 4> drawn{};
            for (std::size_t c = 0; c < 4; ++c) {
                if (pooled[c] > 0) {
                    std::poisson_distribution<std::uint64_t> dist(static_cast<double>(pooled[c]));
                    drawn[c] = dist(rng);
                }
            }
            if (drawn[0] + drawn[1] + drawn[2] + drawn[3] == 0) degenerate = true;
            resampled.emplace(setting, count_table_from_counts(setting, drawn, table.config, table.stream));
        }
        if (degenerate) continue;
        samples.push_back(*reconstruct(resampled, &target).fidelity_to_target);
    }
    if (samples.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(samples.size() - 1));
}

const std::array<double, 6> &reported_state_fidelities() {
    static const std::array<double, 6> values{0.9973, 0.9946, 0.9686, 0.9771, 0.9937, 0.9939};
    return values;
}

std::vector<PreparedState> reference_states(std::optional<double> visibility) {
    using std::numbers::pi;
    const auto &fids = reported_state_fidelities();
    auto v_for = [&](std::size_t k) { return visibility ? *visibility : visibility_for_fidelity(fids[k]); };
    std::vector<PreparedState> out;
    out.push_back({"psi01", 0.0, epr_family(0.0, SourceLabel::k01), v_for(0)});
    const std::array<std::pair<const char *, double>, 4> thetas{
        {{"psi00_pi_12", pi / 12}, {"psi00_pi_8", pi / 8}, {"psi00_pi_6", pi / 6}, {"psi00_pi_4", pi / 4}}};
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        out.push_back({thetas[k].first, thetas[k].second, epr_family(thetas[k].second, SourceLabel::k00), v_for(k + 1)});
    }
    out.push_back({"psi10", pi / 2, epr_family(0.0, SourceLabel::k10), v_for(5)});
    return out;
}

std::vector<TomographyRecord> tomography_report(const std::vector<PreparedState> &states,
                                                const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<TomographyRecord> records;
    for (const PreparedState &state : states) {
        ExperimentConfig local = cfg;
        local.visibility = state.visibility;
        const DensityOperator pure = density_from_state(state.psi);
        SettingCounts counts;
        for (const Setting &s : tomography_settings()) {
            counts.emplace(s, simulate_counts(pure, s, local, stream_id("tomo:" + state.name, s)));
        }
        TomographyResult result = reconstruct(counts, &pure);
        const double err = tomography_fidelity_std_err(counts, pure, local.bootstrap_replicates, local.seed);
        records.push_back({state, std::move(result), err, werner_fidelity(state.visibility, 2)});
    }
    return records;
}

}  // namespace coherence
