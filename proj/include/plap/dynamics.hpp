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

#include "plap/energy.hpp"
#include "plap/errors.hpp"
#include "plap/grid.hpp"
#include "plap/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace plap {

enum class Scheme
{
    BackwardEuler,
    Midpoint,
};

/// "be" or "mp"
[[nodiscard]] std::string_view to_string(Scheme scheme) noexcept;
/// Accepts "be"/"backward_euler" and "mp"/"midpoint"; throws ConfigError otherwise.
[[nodiscard]] Scheme parse_scheme(std::string_view name);

/// Phase point (u, u_t) at time t.
struct State
{
    GridFunction u;
    GridFunction v;
    double t = 0.0;

    State(GridFunction u_, GridFunction v_, double t_ = 0.0);
    static State zero(const Grid& grid) { return State(GridFunction(grid), GridFunction(grid)); }
};

struct StepStats
{
    int newton_iterations = 0;
    int damping_halvings = 0;
    double residual = 0.0;
};

/// Advances (u, v) by cfg.dt:
///   u+ = u + dt v*,  v+ = v + dt [Delta v* + Delta_p(u*) - f(u*) + g],
/// where v* = (1-theta) v + theta v+, u* = u + theta dt v*, and theta = 1
/// (backward Euler) or 1/2 (implicit midpoint). Newton runs on v+ with one
/// tridiagonal solve per iteration.
/// Throws NumericalError when Newton fails (suggest halving dt) or a NaN appears.
[[nodiscard]] State step(const State& state, const ModelConfig& cfg, Scheme scheme, StepStats* stats = nullptr);

struct SimulateOptions
{
    /// Keep every record_stride-th state (the initial and final states are always kept).
    std::size_t record_stride = 1;
    /// Warn when the growth condition on f fails (p > 2 only).
    bool check_growth = true;
};

struct TrajectoryRecord
{
    std::vector<State> states;
    EnergyLedger ledger;
    std::vector<int> newton_iterations;
    bool converged = true;
    std::string diagnostic;

    [[nodiscard]] const State& final_state() const { return states.back(); }
};

/// Integrates from initial.t over a horizon of cfg.t_end, recording the energy
/// ledger at every step. A failed step ends the record with converged = false;
/// the last valid state is retained.
[[nodiscard]] TrajectoryRecord simulate(const State& initial, const ModelConfig& cfg, Scheme scheme,
                                        const SimulateOptions& options = {});

struct GapSample
{
    double t = 0.0;
    double gap = 0.0;
    double ratio = 0.0;
};

/// Runs (u0, v0) and (u0 + du, v0 + dv) to horizon and reports
/// gap(t) = ||u - u~||_{H^1} + ||v - v~||_{H^-1} at the recorded times.
/// ratio is gap(t)/gap(0), or 0 when gap(0) = 0.
[[nodiscard]] std::vector<GapSample> continuous_dependence(const GridFunction& u0, const GridFunction& v0,
                                                           const GridFunction& du, const GridFunction& dv,
                                                           const ModelConfig& cfg, double horizon, Scheme scheme,
                                                           std::size_t record_stride = 1);

/// Long-format CSV: t,x,u,v.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record);

/// Flat key = value sidecar describing a run.
void write_run_metadata(std::ostream& os, const ModelConfig& cfg, Scheme scheme, const TrajectoryRecord& record,
                        std::uint64_t seed);

} // namespace plap
