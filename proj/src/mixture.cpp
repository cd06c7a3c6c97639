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

#include "coherence/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coherence/error.hpp"

namespace coherence {

namespace {

constexpr double kPivotEps = 1e-12;

class Tableau {
   public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows) {}

    double &at(std::size_t r, std::size_t c) { return t_[r][c]; }
    double &rhs(std::size_t r) { return t_[r][cols_]; }
    std::vector<std::size_t> &basis() { return basis_; }
    std::size_t rows() const { return t_.size(); }

    void pivot(std::size_t r, std::size_t c) {
        const double p = t_[r][c];
        for (double &v : t_[r]) v /= p;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i == r) continue;
            const double f = t_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
        }
        basis_[r] = c;
    }

    /// Minimizes cost.x over the current basic feasible solution, entering
    /// only columns flagged in allowed.
    LpStatus minimize(const std::vector<double> &cost, const std::vector<bool> &allowed) {
        for (;;) {
            std::size_t entering = cols_;
            for (std::size_t j = 0; j < cols_ && entering == cols_; ++j) {
                if (!allowed[j]) continue;
                double reduced = cost[j];
                for (std::size_t i = 0; i < t_.size(); ++i) reduced -= cost[basis_[i]] * t_[i][j];
                if (reduced < -1e-11) entering = j;
            }
            if (entering == cols_) return LpStatus::kOptimal;

            std::size_t leaving = t_.size();
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < t_.size(); ++i) {
                const double a = t_[i][entering];
                if (a <= kPivotEps) continue;
                const double ratio = t_[i][cols_] / a;
                if (ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && leaving < t_.size() && basis_[i] < basis_[leaving])) {
                    best_ratio = ratio;
                    leaving = i;
                }
            }
            if (leaving == t_.size()) return LpStatus::kUnbounded;
            pivot(leaving, entering);
        }
    }

    double objective(const std::vector<double> &cost) const {
        double v = 0.0;
        for (std::size_t i = 0; i < t_.size(); ++i) v += cost[basis_[i]] * t_[i][cols_];
        return v;
    }

    std::size_t cols() const { return cols_; }

   private:
    std::size_t cols_;
    std::vector<std::vector<double>> t_;
    std::vector<std::size_t> basis_;
};

double max_scaled_residual(const std::vector<std::vector<double>> &components, std::span<const double> target,
                           std::span<const double> scale, const std::vector<double> &weights) {
    double worst = 0.0;
    for (std::size_t o = 0; o < target.size(); ++o) {
        double mix = 0.0;
        for (std::size_t i = 0; i < components.size(); ++i) mix += weights[i] * components[i][o];
        const double s = scale.empty() ? 1.0 : scale[o];
        worst = std::max(worst, s * std::abs(mix - target[o]));
    }
    return worst;
}

MixtureFit fit_two(const std::vector<std::vector<double>> &components, std::span<const double> target,
                   std::span<const double> scale) {
    // w = (p, 1-p): residual_O(p) = s_O * (p * d_O + e_O)
    const std::size_t m = target.size();
    std::vector<double> d(m), e(m);
    for (std::size_t o = 0; o < m; ++o) {
        const double s = scale.empty() ? 1.0 : scale[o];
        d[o] = s * (components[0][o] - components[1][o]);
        e[o] = s * (components[1][o] - target[o]);
    }
    std::vector<double> candidates{0.0, 1.0};
    for (std::size_t o = 0; o < m; ++o) {
        if (d[o] != 0.0) candidates.push_back(-e[o] / d[o]);
        for (std::size_t q = o + 1; q < m; ++q) {
            for (double sign : {1.0, -1.0}) {
                const double denom = d[o] - sign * d[q];
                if (denom != 0.0) candidates.push_back((sign * e[q] - e[o]) / denom);
            }
        }
    }
    MixtureFit best;
    best.residual = std::numeric_limits<double>::infinity();
    for (double p : candidates) {
        if (!std::isfinite(p)) continue;
        p = std::clamp(p, 0.0, 1.0);
        double worst = 0.0;
        for (std::size_t o = 0; o < m; ++o) worst = std::max(worst, std::abs(p * d[o] + e[o]));
        if (worst < best.residual) {
            best.residual = worst;
            best.weights = {p, 1.0 - p};
        }
    }
    return best;
}

MixtureFit fit_lp(const std::vector<std::vector<double>> &components, std::span<const double> target,
                  std::span<const double> scale) {
    const std::size_t k = components.size();
    const std::size_t m = target.size();
    LinearProgram lp;
    lp.objective.assign(k + 1, 0.0);
    lp.objective[k] = 1.0;
    for (std::size_t o = 0; o < m; ++o) {
        const double s = scale.empty() ? 1.0 : scale[o];
        std::vector<double> up(k + 1), down(k + 1);
        for (std::size_t i = 0; i < k; ++i) {
            up[i] = s * components[i][o];
            down[i] = -s * components[i][o];
        }
        up[k] = -1.0;
        down[k] = -1.0;
        lp.le_rows.push_back(std::move(up));
        lp.le_rhs.push_back(s * target[o]);
        lp.le_rows.push_back(std::move(down));
        lp.le_rhs.push_back(-s * target[o]);
    }
    std::vector<double> simplex_row(k + 1, 1.0);
    simplex_row[k] = 0.0;
    lp.eq_rows.push_back(std::move(simplex_row));
    lp.eq_rhs.push_back(1.0);

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::kOptimal) {
        throw NumericalError("mixture LP did not reach an optimum");
    }
    MixtureFit fit;
    fit.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
    double total = 0.0;
    for (double &w : fit.weights) {
        w = std::max(w, 0.0);
        total += w;
    }
    for (double &w : fit.weights) w /= total;
    fit.residual = max_scaled_residual(components, target, scale, fit.weights);
    return fit;
}

}  // namespace

LpSolution solve_lp(const LinearProgram &lp) {
    const std::size_t n = lp.objective.size();
    require(lp.le_rows.size() == lp.le_rhs.size() && lp.eq_rows.size() == lp.eq_rhs.size(),
            "LP row and right-hand side counts differ");
    const std::size_t m = lp.le_rows.size() + lp.eq_rows.size();

    // Column layout: [x (n)] [slack/surplus per <= row] [artificial per row needing one]
    std::size_t num_art = 0;
    for (double b : lp.le_rhs) num_art += b < 0.0 ? 1 : 0;
    num_art += lp.eq_rows.size();
    const std::size_t slack0 = n;
    const std::size_t art0 = n + lp.le_rows.size();
    const std::size_t cols = art0 + num_art;

    Tableau tab(m, cols);
    std::size_t art = art0;
    for (std::size_t r = 0; r < lp.le_rows.size(); ++r) {
        require(lp.le_rows[r].size() == n, "LP row width mismatch");
        const double sign = lp.le_rhs[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * lp.le_rows[r][j];
        tab.at(r, slack0 + r) = sign;
        tab.rhs(r) = sign * lp.le_rhs[r];
        if (sign > 0.0) {
            tab.basis()[r] = slack0 + r;
        } else {
            tab.at(r, art) = 1.0;
            tab.basis()[r] = art++;
        }
    }
    for (std::size_t e = 0; e < lp.eq_rows.size(); ++e) {
        require(lp.eq_rows[e].size() == n, "LP row width mismatch");
        const std::size_t r = lp.le_rows.size() + e;
        const double sign = lp.eq_rhs[e] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * lp.eq_rows[e][j];
        tab.rhs(r) = sign * lp.eq_rhs[e];
        tab.at(r, art) = 1.0;
        tab.basis()[r] = art++;
    }

    LpSolution sol;
    std::vector<bool> allowed(cols, true);
    if (num_art > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t j = art0; j < cols; ++j) phase1[j] = 1.0;
        tab.minimize(phase1, allowed);
        if (tab.objective(phase1) > 1e-9) {
            sol.status = LpStatus::kInfeasible;
            return sol;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (tab.basis()[r] < art0) continue;
            for (std::size_t j = 0; j < art0; ++j) {
                if (std::abs(tab.at(r, j)) > kPivotEps) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
        for (std::size_t j = art0; j < cols; ++j) allowed[j] = false;
    }

    std::vector<double> cost(cols, 0.0);
    std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
    sol.status = tab.minimize(cost, allowed);
    if (sol.status != LpStatus::kOptimal) return sol;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis()[r] < n) sol.x[tab.basis()[r]] = tab.rhs(r);
    }
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
    return sol;
}

MixtureFit fit_mixture(const std::vector<std::vector<double>> &components, std::span<const double> target,
                       std::span<const double> scale) {
    require(!components.empty(), "mixture fit needs at least one component");
    require(!target.empty(), "mixture fit needs at least one observable");
    require(scale.empty() || scale.size() == target.size(), "scale length must match the target");
    for (const auto &row : components) {
        require(row.size() == target.size(), "component row length must match the target");
    }
    for (double s : scale) require(s >= 0.0, "scales must be non-negative");

    if (components.size() == 1) {
        MixtureFit fit;
        fit.weights = {1.0};
        fit.residual = max_scaled_residual(components, target, scale, fit.weights);
        return fit;
    }
    if (components.size() == 2) {
        return fit_two(components, target, scale);
    }
    return fit_lp(components, target, scale);
}

}  // namespace coherence
