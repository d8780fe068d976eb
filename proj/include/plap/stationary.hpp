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
#pragma once

#include "plap/dynamics.hpp"
#include "plap/grid.hpp"
#include "plap/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace plap {

inline constexpr double kStationaryTol = 1e-10;
inline constexpr double kDedupTol = 1e-6;

/// A solution of -(|u_x|^{p-2}u_x)_x + f(u) = g.
struct StationarySolution
{
    GridFunction u;
    double residual_l2 = 0.0;
    int basin_hits = 1;
};

struct StationaryOptions
{
    double tol = kStationaryTol;
    /// Also required: the last Newton step below step_tol (1 + ||u||) in l2.
    double step_tol = 1e-8;
    int max_iter = 200;
};

/// -Delta_p u + f(u) - g on the grid.
[[nodiscard]] GridFunction stationary_residual(const GridFunction& u, const ModelConfig& cfg);

/// Damped Newton on the stationary residual with the regularized p-Laplacian
/// Jacobian plus diag(f'(u)). Throws ConvergenceError (carrying the final
/// residual and iterate) on divergence, NumericalError on a singular Jacobian.
[[nodiscard]] StationarySolution solve_stationary(const GridFunction& guess, const ModelConfig& cfg,
                                                  const StationaryOptions& options = {});

struct EnumerationOptions
{
    double dedup_tol = kDedupTol;
    /// Random guesses are amplitude * sum_k c_k sin(k pi x) with c_k ~ U(-1,1)/k.
    double amplitude = 1.0;
    int modes = 4;
    StationaryOptions solver;
};

struct StationarySet
{
    std::vector<StationarySolution> solutions;
    int failed_starts = 0;
};

/// Multistart approximation of the stationary set. Start 0 is u = 0; the
/// rest come in antipodal pairs (guess, -guess). Start k only depends on
/// (seed, k), so increasing n_starts never removes a solution found with
/// fewer starts.
[[nodiscard]] StationarySet enumerate_stationary(const ModelConfig& cfg, int n_starts, std::uint64_t seed,
                                                 const EnumerationOptions& options = {});

/// min over the set of ||u - u*||_{H^1}; +inf for an empty set.
[[nodiscard]] double distance_to_set(const GridFunction& u, const std::vector<StationarySolution>& set);

struct OmegaLimitOptions
{
    /// Fraction of the horizon, counted back from T_long, over which sup norms are taken.
    double late_fraction = 0.1;
    std::size_t record_stride = 10;
    /// A terminal state counts as settled when ||v||_{H^1} is below this.
    double settle_threshold = 1e-3;
};

struct OmegaLimitEstimate
{
    std::vector<State> limit_states;
    std::vector<double> distances_to_N;
    std::vector<bool> settled;
    std::vector<bool> member_converged;
    std::vector<std::string> diagnostics;
    double sup_w1inf_u = 0.0;
    double sup_w1inf_v = 0.0;
};

/// Integrates every member over T_long and measures terminal distances to the
/// stationary set and late-time W^{1,inf} sup norms.
[[nodiscard]] OmegaLimitEstimate omega_limit(const std::vector<State>& ensemble, const ModelConfig& cfg, double t_long,
                                             Scheme scheme, const std::vector<StationarySolution>& stationary_set,
                                             const OmegaLimitOptions& options = {});

struct RegularityRow
{
    std::size_t n = 0;
    double sup_w1inf_u = 0.0;
    double sup_w1inf_v = 0.0;
    /// Relative change against the previous (coarser) row; 0 on the first row.
    double drift_u = 0.0;
    double drift_v = 0.0;
    /// Growth beyond 10% against the previous row.
    bool flagged = false;
};

struct RegularityReport
{
    std::vector<RegularityRow> rows;
    bool bounded = true;
    /// Non-empty when p lies outside (2, 4), where boundedness is not established.
    std::string annotation;
};

[[nodiscard]] RegularityReport
attractor_regularity_report(const std::vector<std::pair<std::size_t, OmegaLimitEstimate>>& estimates, double p);

/// Long-format CSV index,x,u of every solution.
void write_stationary_csv(std::ostream& os, const std::vector<StationarySolution>& set);
/// index,residual_l2,basin_hits,h1,w1inf
void write_stationary_summary_csv(std::ostream& os, const std::vector<StationarySolution>& set);
/// n,sup_w1inf_u,sup_w1inf_v,drift_u,drift_v,flagged
void write_regularity_csv(std::ostream& os, const RegularityReport& report);

} // namespace plap
