// Copyright 2026 The plap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "plap/stationary.hpp"

#include "plap/csv.hpp"
#include "plap/errors.hpp"
#include "plap/random_fields.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace plap {

GridFunction stationary_residual(const GridFunction& u, const ModelConfig& cfg)
{
    auto r = p_laplacian(u, cfg.p);
    for (std::size_t i = 0; i < u.size(); ++i)
        r[i] = -r[i] + cfg.nonlinearity.value(u[i]) - cfg.forcing[i];
    return r;
}

StationarySolution solve_stationary(const GridFunction& guess, const ModelConfig& cfg, const StationaryOptions& options)
{
    constexpr int kMaxHalvings = 60;
    GridFunction u = guess;
    auto r = stationary_residual(u, cfg);
    double norm = l2_norm(r);

    // near degenerate solutions the residual can pass tol long before u
    // settles, so the Newton step has to be small as well
    for (int it = 0;; ++it) {
        if (it == options.max_iter || !std::isfinite(norm))
            throw ConvergenceError("stationary Newton did not converge (residual " + csv::num(norm) + ")", norm,
                                   u.vector());
        auto jac = p_laplacian_jacobian(u, cfg.p);
        for (std::size_t i = 0; i < u.size(); ++i) {
            jac.diag[i] = -jac.diag[i] + cfg.nonlinearity.derivative(u[i]);
            jac.lower[i] = -jac.lower[i];
            jac.upper[i] = -jac.upper[i];
        }
        const auto delta = solve_tridiagonal(jac, r.values());
        const double step = l2_norm(GridFunction(u.grid(), delta));
        if (norm < options.tol && step <= options.step_tol * (1.0 + l2_norm(u)))
            break;

        double damping = 1.0;
        bool accepted = false;
        for (int k = 0; k <= kMaxHalvings; ++k) {
            GridFunction trial = u;
            for (std::size_t i = 0; i < u.size(); ++i)
                trial[i] -= damping * delta[i];
            auto r_trial = stationary_residual(trial, cfg);
            const double n_trial = l2_norm(r_trial);
            if (std::isfinite(n_trial) && (n_trial < norm || (norm < options.tol && n_trial < options.tol))) {
                u = std::move(trial);
                r = std::move(r_trial);
                norm = n_trial;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("stationary Newton stagnated (residual " + csv::num(norm) + ")", norm, u.vector());
    }
    return {std::move(u), norm, 1};
}

StationarySet enumerate_stationary(const ModelConfig& cfg, int n_starts, std::uint64_t seed,
                                   const EnumerationOptions& options)
{
    if (n_starts < 1)
        throw ConfigError("enumerate_stationary needs at least one start");
    const Grid grid = cfg.grid();
    StationarySet set;
    for (int k = 0; k < n_starts; ++k) {
        // start 0 is the zero function; after that one generator per
        // antipodal pair keeps start k independent of n_starts
        GridFunction guess(grid);
        if (k > 0) {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>((k - 1) / 2));
            guess = random_sine_series(rng, options.modes).scaled(options.amplitude).sample(grid);
            if (k % 2 == 0)
                guess *= -1.0;
        }

        StationarySolution sol{GridFunction(grid), 0.0, 1};
        try {
            sol = solve_stationary(guess, cfg, options.solver);
        } catch (const NumericalError& e) {
            spdlog::debug("stationary start {} failed: {}", k, e.what());
            ++set.failed_starts;
            continue;
        }
        auto match = std::find_if(set.solutions.begin(), set.solutions.end(), [&](const StationarySolution& s) {
            return h1_norm(s.u - sol.u) < options.dedup_tol;
        });
        if (match != set.solutions.end())
            ++match->basin_hits;
        else
            set.solutions.push_back(std::move(sol));
    }
    return set;
}

double distance_to_set(const GridFunction& u, const std::vector<StationarySolution>& set)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : set)
        best = std::min(best, h1_norm(u - s.u));
    return best;
}

OmegaLimitEstimate omega_limit(const std::vector<State>& ensemble, const ModelConfig& cfg, double t_long,
                               Scheme scheme, const std::vector<StationarySolution>& stationary_set,
                               const OmegaLimitOptions& options)
{
    ModelConfig run_cfg = cfg;
    run_cfg.t_end = t_long;
    SimulateOptions sim;
    sim.record_stride = options.record_stride;

    OmegaLimitEstimate est;
    for (const auto& member : ensemble) {
        const auto record = simulate(member, run_cfg, scheme, sim);
        sim.check_growth = false;
        const double late_start = member.t + (1.0 - options.late_fraction) * t_long;
        for (const auto& s : record.states) {
            if (s.t + 1e-12 < late_start)
                continue;
            est.sup_w1inf_u = std::max(est.sup_w1inf_u, w1inf_norm(s.u));
            est.sup_w1inf_v = std::max(est.sup_w1inf_v, w1inf_norm(s.v));
        }
        const auto& terminal = record.final_state();
        est.distances_to_N.push_back(distance_to_set(terminal.u, stationary_set));
        est.settled.push_back(h1_norm(terminal.v) < options.settle_threshold);
        est.member_converged.push_back(record.converged);
        est.diagnostics.push_back(record.diagnostic);
        est.limit_states.push_back(terminal);
    }
    return est;
}

RegularityReport attractor_regularity_report(const std::vector<std::pair<std::size_t, OmegaLimitEstimate>>& estimates,
                                             double p)
{
    constexpr double kGrowthFlag = 0.10;
    RegularityReport report;
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        RegularityRow row;
        row.n = estimates[k].first;
        row.sup_w1inf_u = estimates[k].second.sup_w1inf_u;
        row.sup_w1inf_v = estimates[k].second.sup_w1inf_v;
        if (k > 0) {
            const auto& prev = report.rows.back();
            const auto rel = [](double now, double before) {
                return before > 0.0 ? (now - before) / before : (now > 0.0 ? 1.0 : 0.0);
            };
            row.drift_u = rel(row.sup_w1inf_u, prev.sup_w1inf_u);
            row.drift_v = rel(row.sup_w1inf_v, prev.sup_w1inf_v);
            row.flagged = row.drift_u > kGrowthFlag || row.drift_v > kGrowthFlag;
        }
        report.bounded = report.bounded && !row.flagged;
        report.rows.push_back(row);
    }
    if (!(p > 2.0 && p < 4.0))
        report.annotation = "outside proven regime: W^{1,inf} boundedness is only established for 2 < p < 4";
    return report;
}

void write_stationary_csv(std::ostream& os, const std::vector<StationarySolution>& set)
{
    os << "index,x,u\n";
    for (std::size_t k = 0; k < set.size(); ++k)
        for (std::size_t i = 0; i < set[k].u.size(); ++i)
            csv::write_row(os, {std::to_string(k), csv::num(set[k].u.grid().x(i)), csv::num(set[k].u[i])});
}

void write_stationary_summary_csv(std::ostream& os, const std::vector<StationarySolution>& set)
{
    os << "index,residual_l2,basin_hits,h1,w1inf\n";
    for (std::size_t k = 0; k < set.size(); ++k)
        csv::write_row(os, {std::to_string(k), csv::num(set[k].residual_l2), std::to_string(set[k].basin_hits),
                            csv::num(h1_norm(set[k].u)), csv::num(w1inf_norm(set[k].u))});
}

void write_regularity_csv(std::ostream& os, const RegularityReport& report)
{
    if (!report.annotation.empty())
        os << "# " << report.annotation << '\n';
    os << "n,sup_w1inf_u,sup_w1inf_v,drift_u,drift_v,flagged\n";
    for (const auto& r : report.rows)
        csv::write_row(os, {std::to_string(r.n), csv::num(r.sup_w1inf_u), csv::num(r.sup_w1inf_v), csv::num(r.drift_u),
                            csv::num(r.drift_v), r.flagged ? "1" : "0"});
}

} // namespace plap
