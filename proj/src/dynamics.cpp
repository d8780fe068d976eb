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
#include "plap/dynamics.hpp"

#include "plap/csv.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace plap {
namespace {

double theta_of(Scheme scheme)
{
    return scheme == Scheme::BackwardEuler ? 1.0 : 0.5;
}

struct Evaluation
{
    GridFunction u_star;
    GridFunction residual;
    double norm;
};

/// G(w) = w - v - dt [Delta v* + Delta_p(u*) - f(u*) + g]
Evaluation evaluate(const State& s, const std::vector<double>& w, const ModelConfig& cfg, double theta)
{
    const Grid grid = s.u.grid();
    const std::size_t n = grid.n();
    const double dt = cfg.dt;
    GridFunction v_star(grid), u_star(grid);
    for (std::size_t i = 0; i < n; ++i) {
        v_star[i] = (1.0 - theta) * s.v[i] + theta * w[i];
        u_star[i] = s.u[i] + theta * dt * v_star[i];
    }
    const auto lap_v = p_laplacian(v_star, 2.0);
    const auto plap_u = p_laplacian(u_star, cfg.p);
    GridFunction g(grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rhs = lap_v[i] + plap_u[i] - cfg.nonlinearity.value(u_star[i]) + cfg.forcing[i];
        g[i] = w[i] - s.v[i] - dt * rhs;
        acc += g[i] * g[i];
    }
    return {std::move(u_star), std::move(g), std::sqrt(acc * grid.h())};
}

/// dG/dw = I - dt theta Delta - dt^2 theta^2 (J_p(u*) - diag f'(u*))
Tridiagonal newton_matrix(const GridFunction& u_star, const ModelConfig& cfg, double theta)
{
    const std::size_t n = u_star.size();
    const double dt = cfg.dt;
    const double h = u_star.grid().h();
    const double c1 = dt * theta / (h * h);
    const double c2 = dt * dt * theta * theta;
    auto jac = p_laplacian_jacobian(u_star, cfg.p);
    Tridiagonal m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.diag[i] = 1.0 + 2.0 * c1 - c2 * (jac.diag[i] - cfg.nonlinearity.derivative(u_star[i]));
        m.lower[i] = i > 0 ? -c1 - c2 * jac.lower[i] : 0.0;
        m.upper[i] = i + 1 < n ? -c1 - c2 * jac.upper[i] : 0.0;
    }
    return m;
}

bool all_finite(std::span<const double> xs)
{
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

std::string_view to_string(Scheme scheme) noexcept
{
    return scheme == Scheme::BackwardEuler ? "be" : "mp";
}

Scheme parse_scheme(std::string_view name)
{
    if (name == "be" || name == "backward_euler")
        return Scheme::BackwardEuler;
    if (name == "mp" || name == "midpoint")
        return Scheme::Midpoint;
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected be or mp)");
}

State::State(GridFunction u_, GridFunction v_, double t_)
    : u(std::move(u_))
    , v(std::move(v_))
    , t(t_)
{
    if (!(u.grid() == v.grid()))
        throw ConfigError("state components live on different grids");
}

State step(const State& state, const ModelConfig& cfg, Scheme scheme, StepStats* stats)
{
    constexpr int kMaxHalvings = 30;
    const double theta = theta_of(scheme);
    const Grid grid = state.u.grid();

    std::vector<double> w(state.v.values().begin(), state.v.values().end());
    auto eval = evaluate(state, w, cfg, theta);
    if (!std::isfinite(eval.norm))
        throw NumericalError("non-finite residual at t=" + csv::num(state.t));

    StepStats local;
    int it = 0;
    while (eval.norm >= cfg.newton_tol) {
        if (it == cfg.newton_max_iter)
            throw NumericalError("Newton did not converge in " + std::to_string(it) + " iterations at t="
                                 + csv::num(state.t) + " (residual " + csv::num(eval.norm)
                                 + "); try halving dt");
        ++it;
        const auto delta = solve_tridiagonal(newton_matrix(eval.u_star, cfg, theta), eval.residual.values());

        // full step first; halve only when the residual fails to decrease
        double damping = 1.0;
        bool accepted = false;
        std::vector<double> trial(w.size());
        for (int k = 0; k <= kMaxHalvings; ++k) {
            for (std::size_t i = 0; i < w.size(); ++i)
                trial[i] = w[i] - damping * delta[i];
            auto next = evaluate(state, trial, cfg, theta);
            if (std::isfinite(next.norm) && next.norm < eval.norm) {
                w.swap(trial);
                eval = std::move(next);
                accepted = true;
                local.damping_halvings += k;
                break;
            }
            damping *= 0.5;
        }
        if (!accepted)
            throw NumericalError("damped Newton stagnated at t=" + csv::num(state.t) + " (residual "
                                 + csv::num(eval.norm) + "); try halving dt");
    }
    local.newton_iterations = it;
    local.residual = eval.norm;
    if (stats)
        *stats = local;

    GridFunction u_next(grid), v_next(grid, std::move(w));
    for (std::size_t i = 0; i < grid.n(); ++i)
        u_next[i] = state.u[i] + cfg.dt * ((1.0 - theta) * state.v[i] + theta * v_next[i]);
    if (!all_finite(u_next.values()) || !all_finite(v_next.values()))
        throw NumericalError("non-finite state after step at t=" + csv::num(state.t));
    return State(std::move(u_next), std::move(v_next), state.t + cfg.dt);
}

TrajectoryRecord simulate(const State& initial, const ModelConfig& cfg, Scheme scheme, const SimulateOptions& options)
{
    cfg.validate(true);
    if (!(initial.u.grid() == cfg.grid()))
        throw ConfigError("initial state grid does not match grid_n");
    if (options.check_growth && cfg.p > 2.0) {
        const auto report = check_growth_condition(cfg.nonlinearity, cfg.p);
        if (!report.satisfied)
            spdlog::warn("growth condition fails: liminf f(s)/(|s|^(p-2)s) = {} <= -lambda^p = {}",
                         report.asymptotic_coefficient, -std::pow(report.lambda, cfg.p));
    }

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);
    const double t0 = initial.t;

    TrajectoryRecord record;
    record.states.push_back(initial);
    const auto record_energy = [&](const State& s) {
        const double rate = std::pow(h1_norm(s.v), 2);
        record.ledger.record_step(s.t, energy(s.u, s.v, cfg), rate);
    };
    record_energy(initial);

    State current = initial;
    for (std::size_t k = 1; k <= steps; ++k) {
        StepStats stats;
        try {
            State next = step(current, cfg, scheme, &stats);
            next.t = t0 + static_cast<double>(k) * cfg.dt;
            current = std::move(next);
        } catch (const NumericalError& e) {
            record.converged = false;
            record.diagnostic = e.what();
            spdlog::error("simulation stopped: {}", e.what());
            break;
        }
        record.newton_iterations.push_back(stats.newton_iterations);
        record_energy(current);
        if (k % stride == 0 || k == steps)
            record.states.push_back(current);
    }
    if (!record.converged && record.states.back().t != current.t)
        record.states.push_back(current);
    return record;
}

std::vector<GapSample> continuous_dependence(const GridFunction& u0, const GridFunction& v0, const GridFunction& du,
                                             const GridFunction& dv, const ModelConfig& cfg, double horizon,
                                             Scheme scheme, std::size_t record_stride)
{
    ModelConfig run_cfg = cfg;
    run_cfg.t_end = horizon;
    SimulateOptions opts;
    opts.record_stride = record_stride;
    const auto base = simulate(State(u0, v0), run_cfg, scheme, opts);
    opts.check_growth = false;
    const auto perturbed = simulate(State(u0 + du, v0 + dv), run_cfg, scheme, opts);
    if (!base.converged || !perturbed.converged)
        throw NumericalError("continuous_dependence: " + (base.converged ? perturbed.diagnostic : base.diagnostic));

    std::vector<GapSample> table;
    double gap0 = 0.0;
    for (std::size_t k = 0; k < base.states.size(); ++k) {
        const auto& a = base.states[k];
        const auto& b = perturbed.states[k];
        const double gap = h1_norm(a.u - b.u) + h_neg1_norm(a.v - b.v);
        if (k == 0)
            gap0 = gap;
        table.push_back({a.t, gap, gap0 > 0.0 ? gap / gap0 : 0.0});
    }
    return table;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record)
{
    os << "t,x,u,v\n";
    for (const auto& s : record.states) {
        const std::string t = csv::num(s.t);
        for (std::size_t i = 0; i < s.u.size(); ++i)
            csv::write_row(os, {t, csv::num(s.u.grid().x(i)), csv::num(s.u[i]), csv::num(s.v[i])});
    }
}

void write_run_metadata(std::ostream& os, const ModelConfig& cfg, Scheme scheme, const TrajectoryRecord& record,
                        std::uint64_t seed)
{
    const int max_newton = record.newton_iterations.empty()
        ? 0
        : *std::max_element(record.newton_iterations.begin(), record.newton_iterations.end());
    os << "seed = " << seed << '\n'
       << "scheme = " << to_string(scheme) << '\n'
       << "p = " << csv::num(cfg.p) << '\n'
       << "grid_n = " << cfg.grid_n << '\n'
       << "dt = " << csv::num(cfg.dt) << '\n'
       << "t_end = " << csv::num(cfg.t_end) << '\n'
       << "newton_tol = " << csv::num(cfg.newton_tol) << '\n'
       << "steps = " << record.newton_iterations.size() << '\n'
       << "max_newton_iterations = " << max_newton << '\n'
       << "converged = " << (record.converged ? "true" : "false") << '\n';
    if (!record.diagnostic.empty())
        os << "diagnostic = " << record.diagnostic << '\n';
}

} // namespace plap
