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
#include "plap/random_fields.hpp"
#include "plap/stationary.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

using plap::GridFunction;
using plap::Scheme;
using plap::State;
using std::numbers::pi;

namespace {

GridFunction sin_pi(const plap::Grid& grid)
{
    return GridFunction::sample(grid, [](double x) { return std::sin(pi * x); });
}

double discrete_lambda1(const plap::Grid& grid)
{
    const double s = std::sin(pi * grid.h() / 2.0);
    return 4.0 / (grid.h() * grid.h()) * s * s;
}

plap::ModelConfig linear_config(std::size_t n, double dt, double t_end)
{
    plap::ModelConfig cfg(2.0, plap::Nonlinearity::zero(), n, dt, t_end);
    cfg.newton_tol = 1e-14;
    return cfg;
}

const plap::SimulateOptions kQuiet{.record_stride = 1, .check_growth = false};

} // namespace

TEST(Step, ZeroIsAnEquilibrium)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 20, 0.05, 1.0);
    for (auto scheme : {Scheme::BackwardEuler, Scheme::Midpoint}) {
        const auto next = plap::step(State::zero(cfg.grid()), cfg, scheme);
        for (std::size_t i = 0; i < 20; ++i) {
            EXPECT_EQ(next.u[i], 0.0);
            EXPECT_EQ(next.v[i], 0.0);
        }
        EXPECT_DOUBLE_EQ(next.t, 0.05);
    }
}

TEST(Step, BackwardEulerMatchesModalUpdate)
{
    // c' = w, w' = -l w - l c, implicit Euler on the mode amplitude
    const auto cfg = linear_config(48, 0.03, 1.0);
    const double l = discrete_lambda1(cfg.grid());
    const double c0 = 0.7, w0 = -0.2, dt = cfg.dt;
    const double w1 = (w0 - dt * l * c0) / (1.0 + dt * l + dt * dt * l);
    const double c1 = c0 + dt * w1;

    const auto mode = sin_pi(cfg.grid());
    const auto next = plap::step(State(c0 * mode, w0 * mode), cfg, Scheme::BackwardEuler);
    for (std::size_t i = 0; i < mode.size(); ++i) {
        EXPECT_NEAR(next.u[i], c1 * mode[i], 1e-14);
        EXPECT_NEAR(next.v[i], w1 * mode[i], 1e-13);
    }
}

TEST(Step, MidpointMatchesModalUpdate)
{
    const auto cfg = linear_config(48, 0.03, 1.0);
    const double l = discrete_lambda1(cfg.grid());
    const double c0 = 0.7, w0 = -0.2, dt = cfg.dt;
    // w1 = w0 + dt(-l vs - l us), vs = (w0 + w1)/2, us = c0 + dt vs / 2
    const double a = 1.0 + dt * l / 2.0 + dt * dt * l / 4.0;
    const double b = w0 - dt * l * w0 / 2.0 - dt * l * c0 - dt * dt * l * w0 / 4.0;
    const double w1 = b / a;
    const double c1 = c0 + dt * (w0 + w1) / 2.0;

    const auto mode = sin_pi(cfg.grid());
    const auto next = plap::step(State(c0 * mode, w0 * mode), cfg, Scheme::Midpoint);
    for (std::size_t i = 0; i < mode.size(); ++i) {
        EXPECT_NEAR(next.u[i], c1 * mode[i], 1e-14);
        EXPECT_NEAR(next.v[i], w1 * mode[i], 1e-13);
    }
}

TEST(Simulate, LinearConvergenceOrders)
{
    const auto error = [](Scheme scheme, double dt) {
        const auto cfg = linear_config(32, dt, 1.0);
        const double l = discrete_lambda1(cfg.grid());
        const double rp = (-l + std::sqrt(l * l - 4.0 * l)) / 2.0;
        const double rm = (-l - std::sqrt(l * l - 4.0 * l)) / 2.0;
        const double exact = (rp * std::exp(rm) - rm * std::exp(rp)) / (rp - rm);
        const auto mode = sin_pi(cfg.grid());
        const auto rec = plap::simulate(State(mode, GridFunction(cfg.grid())), cfg, scheme, kQuiet);
        double err = 0.0;
        for (std::size_t i = 0; i < mode.size(); ++i)
            err = std::max(err, std::abs(rec.final_state().u[i] - exact * mode[i]));
        return err;
    };
    for (auto [scheme, order] : {std::pair{Scheme::BackwardEuler, 1.0}, std::pair{Scheme::Midpoint, 2.0}}) {
        const double e1 = error(scheme, 0.01), e2 = error(scheme, 0.005);
        EXPECT_NEAR(std::log2(e1 / e2), order, 0.3) << to_string(scheme);
    }
}

TEST(Simulate, ZeroDataGivesZeroTrajectory)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 10, 0.1, 0.5);
    const auto rec = plap::simulate(State::zero(cfg.grid()), cfg, Scheme::BackwardEuler);
    ASSERT_TRUE(rec.converged);
    ASSERT_EQ(rec.states.size(), 6u);
    for (const auto& s : rec.states)
        for (std::size_t i = 0; i < 10; ++i)
            EXPECT_EQ(s.u[i], 0.0);
    std::ostringstream os;
    plap::write_trajectory_csv(os, rec);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,u,v");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6 * 10);
}

TEST(Simulate, BackwardEulerEnergyInequalityOnRandomData)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        plap::ModelConfig cfg(2.5 + 0.5 * (trial % 3), plap::Nonlinearity::cubic(), 40, 0.02, 1.0);
        if (trial % 2)
            cfg.forcing = sin_pi(cfg.grid());
        const auto u0 = plap::random_sine_series(rng, 4).scaled(3.0).sample(cfg.grid());
        const auto v0 = plap::random_sine_series(rng, 4).sample(cfg.grid());
        const auto rec = plap::simulate(State(u0, v0), cfg, Scheme::BackwardEuler, kQuiet);
        ASSERT_TRUE(rec.converged);
        for (double r : rec.ledger.step_residuals())
            EXPECT_LE(r, 10.0 * cfg.newton_tol);
        const auto& e = rec.ledger.energies();
        for (std::size_t k = 1; k < e.size(); ++k)
            EXPECT_LT(e[k], e[k - 1]);
    }
}

TEST(Simulate, DegenerateDecayIsAlgebraic)
{
    // p = 3, f = s^3, g = 0: both restoring terms are cubic at 0, so the
    // approach to u = 0 is like 1/t rather than exponential
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 64, 0.01, 50.0);
    const auto u0 = GridFunction::sample(cfg.grid(), [](double x) { return 3.0 * std::pow(std::sin(pi * x), 2); });
    const auto rec = plap::simulate(State(u0, GridFunction(cfg.grid())), cfg, Scheme::BackwardEuler,
                                    {.record_stride = 2500, .check_growth = false});
    ASSERT_TRUE(rec.converged);
    ASSERT_EQ(rec.states.size(), 3u);
    const double h25 = plap::h1_norm(rec.states[1].u);
    const double h50 = plap::h1_norm(rec.states[2].u);
    EXPECT_LT(h50, 2e-2);
    EXPECT_NEAR(h25 / h50, 2.0, 0.3);
}

TEST(Simulate, EquilibriumIsPreserved)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 40, 0.05, 1.0);
    cfg.forcing = GridFunction::sample(cfg.grid(), [](double x) { return 5.0 * std::sin(pi * x); });
    const auto eq = plap::solve_stationary(sin_pi(cfg.grid()), cfg);
    const auto next = plap::step(State(eq.u, GridFunction(cfg.grid())), cfg, Scheme::BackwardEuler);
    EXPECT_LT(plap::l2_norm(next.u - eq.u), cfg.newton_tol);
    EXPECT_LT(plap::l2_norm(next.v), cfg.newton_tol);
}

TEST(Simulate, RestartIsBitIdentical)
{
    std::mt19937_64 rng(32);
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 24, 0.02, 1.0);
    const auto u0 = plap::random_sine_series(rng, 4).scaled(2.0).sample(cfg.grid());
    const auto whole = plap::simulate(State(u0, GridFunction(cfg.grid())), cfg, Scheme::Midpoint, kQuiet);

    auto half = cfg;
    half.t_end = 0.5;
    const auto first = plap::simulate(State(u0, GridFunction(cfg.grid())), half, Scheme::Midpoint, kQuiet);
    const auto second = plap::simulate(first.final_state(), half, Scheme::Midpoint, kQuiet);
    EXPECT_EQ(second.final_state().u.vector(), whole.final_state().u.vector());
    EXPECT_EQ(second.final_state().v.vector(), whole.final_state().v.vector());
}

TEST(Simulate, NonFiniteDataStopsWithDiagnostic)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 8, 0.1, 1.0);
    GridFunction u(cfg.grid());
    u[3] = std::numeric_limits<double>::quiet_NaN();
    const auto rec = plap::simulate(State(u, GridFunction(cfg.grid())), cfg, Scheme::BackwardEuler, kQuiet);
    EXPECT_FALSE(rec.converged);
    EXPECT_FALSE(rec.diagnostic.empty());
    EXPECT_THROW((void)plap::step(State(u, GridFunction(cfg.grid())), cfg, Scheme::BackwardEuler), plap::NumericalError);
}

TEST(ContinuousDependence, ZeroAndHalvedPerturbations)
{
    std::mt19937_64 rng(33);
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 32, 0.02, 5.0);
    cfg.newton_tol = 1e-12;
    const auto u0 = plap::random_sine_series(rng, 4).scaled(2.0).sample(cfg.grid());
    const auto v0 = plap::random_sine_series(rng, 4).sample(cfg.grid());
    const auto du = plap::random_sine_series(rng, 4).scaled(1e-3).sample(cfg.grid());
    const GridFunction zero(cfg.grid());

    for (const auto& s : plap::continuous_dependence(u0, v0, zero, zero, cfg, 5.0, Scheme::BackwardEuler, 25))
        EXPECT_EQ(s.gap, 0.0);

    const auto full = plap::continuous_dependence(u0, v0, du, zero, cfg, 5.0, Scheme::BackwardEuler, 25);
    const auto half = plap::continuous_dependence(u0, v0, 0.5 * du, zero, cfg, 5.0, Scheme::BackwardEuler, 25);
    EXPECT_NEAR(half.back().gap / full.back().gap, 0.5, 0.1);
    double worst = 0.0;
    for (const auto& s : full)
        worst = std::max(worst, s.ratio);
    EXPECT_LT(worst, 10.0);
}

TEST(Scheme, Parsing)
{
    EXPECT_EQ(plap::parse_scheme("be"), Scheme::BackwardEuler);
    EXPECT_EQ(plap::parse_scheme("midpoint"), Scheme::Midpoint);
    EXPECT_THROW((void)plap::parse_scheme("rk4"), plap::ConfigError);
}
