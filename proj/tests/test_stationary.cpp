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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using plap::GridFunction;
using plap::State;
using std::numbers::pi;

namespace {

GridFunction sin_pi(const plap::Grid& grid)
{
    return GridFunction::sample(grid, [](double x) { return std::sin(pi * x); });
}

bool contains(const std::vector<plap::StationarySolution>& set, const GridFunction& u, double tol)
{
    return plap::distance_to_set(u, set) < tol;
}

} // namespace

TEST(SolveStationary, ZeroGuessOnTrivialProblem)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 16, 0.01, 1.0);
    const auto sol = plap::solve_stationary(GridFunction(cfg.grid()), cfg);
    EXPECT_EQ(sol.residual_l2, 0.0);
    EXPECT_EQ(plap::sup_norm(sol.u), 0.0);
}

TEST(SolveStationary, LinearPoisson)
{
    plap::ModelConfig cfg(2.0, plap::Nonlinearity::zero(), 128, 0.01, 1.0);
    cfg.forcing = sin_pi(cfg.grid());
    const auto sol = plap::solve_stationary(GridFunction(cfg.grid()), cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < cfg.grid_n; ++i)
        err = std::max(err, std::abs(sol.u[i] - std::sin(pi * cfg.grid().x(i)) / (pi * pi)));
    EXPECT_LT(err, 1e-5);
}

TEST(SolveStationary, DegenerateTorsionProblemAgainstQuadrature)
{
    // -(|u'|u')' = 1: the flux is 1/2 - x, so u' = sign(1/2 - x) |1/2 - x|^{1/2}
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::zero(), 255, 0.01, 1.0);
    cfg.forcing = GridFunction::sample(cfg.grid(), [](double) { return 1.0; });
    const auto sol = plap::solve_stationary(GridFunction(cfg.grid()), cfg);

    const auto slope = [](double t) { return std::copysign(std::sqrt(std::abs(0.5 - t)), 0.5 - t); };
    double err = 0.0;
    for (std::size_t i = 0; i < cfg.grid_n; ++i) {
        const double x = cfg.grid().x(i);
        const int panels = 4000;
        double acc = 0.0;
        for (int k = 0; k < panels; ++k) // midpoint rule
            acc += slope((k + 0.5) * x / panels);
        err = std::max(err, std::abs(sol.u[i] - acc * x / panels));
    }
    EXPECT_LT(err, 1e-3);
    // peak value (2/3)(1/2)^{3/2}
    EXPECT_NEAR(sol.u[127], 2.0 / 3.0 * std::pow(0.5, 1.5), 1e-3);
}

TEST(SolveStationary, ReportsLastIterateOnFailure)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 32, 0.01, 1.0);
    cfg.forcing = GridFunction::sample(cfg.grid(), [](double) { return 100.0; });
    plap::StationaryOptions opt;
    opt.max_iter = 1;
    try {
        (void)plap::solve_stationary(GridFunction(cfg.grid()), cfg, opt);
        FAIL() << "expected ConvergenceError";
    } catch (const plap::ConvergenceError& e) {
        EXPECT_EQ(e.last_iterate().size(), 32u);
        EXPECT_GT(e.last_residual(), opt.tol);
    }
}

TEST(EnumerateStationary, MonotoneProblemHasOnlyZero)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 64, 0.01, 1.0);
    const auto set = plap::enumerate_stationary(cfg, 12, 5);
    ASSERT_EQ(set.solutions.size(), 1u);
    EXPECT_LT(plap::h1_norm(set.solutions.front().u), plap::kDedupTol);
    EXPECT_EQ(set.solutions.front().basin_hits, 12);
}

TEST(EnumerateStationary, BistableProblemHasSymmetricPair)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity({0.0, -40.0, 0.0, 1.0}, {}), 64, 0.01, 1.0);
    plap::EnumerationOptions opt;
    opt.amplitude = 6.0;
    const auto set = plap::enumerate_stationary(cfg, 16, 9, opt);
    EXPECT_GE(set.solutions.size(), 3u);
    EXPECT_TRUE(contains(set.solutions, GridFunction(cfg.grid()), 1e-6));
    for (const auto& s : set.solutions)
        EXPECT_TRUE(contains(set.solutions, -s.u, 1e-6)) << "missing mirror image";
}

TEST(EnumerateStationary, MoreStartsNeverLoseSolutions)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity({0.0, -40.0, 0.0, 1.0}, {}), 48, 0.01, 1.0);
    plap::EnumerationOptions opt;
    opt.amplitude = 6.0;
    const auto few = plap::enumerate_stationary(cfg, 6, 3, opt);
    const auto many = plap::enumerate_stationary(cfg, 12, 3, opt);
    for (const auto& s : few.solutions)
        EXPECT_TRUE(contains(many.solutions, s.u, plap::kDedupTol));
}

TEST(EnumerateStationary, SolutionsAreFixedPointsOfTheFlow)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity({0.0, -40.0, 0.0, 1.0}, {}), 48, 0.01, 1.0);
    plap::EnumerationOptions opt;
    opt.amplitude = 6.0;
    for (const auto& s : plap::enumerate_stationary(cfg, 6, 3, opt).solutions) {
        const auto next = plap::step(State(s.u, GridFunction(cfg.grid())), cfg, plap::Scheme::BackwardEuler);
        EXPECT_LT(plap::h1_norm(next.u - s.u), 1e-8);
    }
}

TEST(OmegaLimit, StationaryEnsembleStaysPut)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity({0.0, -40.0, 0.0, 1.0}, {}), 48, 0.01, 1.0);
    plap::EnumerationOptions opt;
    opt.amplitude = 6.0;
    const auto set = plap::enumerate_stationary(cfg, 6, 3, opt);
    std::vector<State> ensemble;
    double w1inf = 0.0;
    for (const auto& s : set.solutions) {
        ensemble.emplace_back(s.u, GridFunction(cfg.grid()));
        w1inf = std::max(w1inf, plap::w1inf_norm(s.u));
    }
    const auto est = plap::omega_limit(ensemble, cfg, 0.5, plap::Scheme::BackwardEuler, set.solutions);
    for (double d : est.distances_to_N)
        EXPECT_LT(d, 1e-8);
    EXPECT_NEAR(est.sup_w1inf_u, w1inf, 1e-8 * w1inf);
    EXPECT_LT(est.sup_w1inf_v, 1e-8);

    const auto report = plap::attractor_regularity_report({{48, est}, {48, est}}, cfg.p);
    EXPECT_EQ(report.rows[1].drift_u, 0.0);
    EXPECT_TRUE(report.bounded);
    EXPECT_TRUE(report.annotation.empty());
}

TEST(OmegaLimit, DistancesShrinkWithHorizonAndAreInvariant)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 32, 0.02, 1.0);
    cfg.forcing = GridFunction::sample(cfg.grid(), [](double x) { return 10.0 * std::sin(pi * x); });
    const auto set = plap::enumerate_stationary(cfg, 2, 1);
    ASSERT_EQ(set.solutions.size(), 1u);
    std::vector<State> ensemble;
    for (double a : {-3.0, 1.0, 4.0})
        ensemble.emplace_back(a * sin_pi(cfg.grid()), GridFunction(cfg.grid()));
    const auto shorter = plap::omega_limit(ensemble, cfg, 2.0, plap::Scheme::BackwardEuler, set.solutions);
    const auto longer = plap::omega_limit(ensemble, cfg, 4.0, plap::Scheme::BackwardEuler, set.solutions);
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        EXPECT_LE(longer.distances_to_N[m], shorter.distances_to_N[m] + 1e-6);
        // one more step from the terminal state moves the distance by less than the threshold
        const auto nudged = plap::step(longer.limit_states[m], cfg, plap::Scheme::BackwardEuler);
        EXPECT_LT(std::abs(plap::distance_to_set(nudged.u, set.solutions) - longer.distances_to_N[m]), 1e-3);
    }
}

TEST(RegularityReport, FlagsGrowthAndAnnotatesOutsideRegime)
{
    plap::OmegaLimitEstimate a, b;
    a.sup_w1inf_u = 1.0;
    b.sup_w1inf_u = 1.2;
    const auto report = plap::attractor_regularity_report({{64, a}, {128, b}}, 5.0);
    EXPECT_TRUE(report.rows[1].flagged);
    EXPECT_FALSE(report.bounded);
    EXPECT_NE(report.annotation.find("outside proven regime"), std::string::npos);
}

TEST(StationaryCsv, Schemas)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 4, 0.01, 1.0);
    const std::vector<plap::StationarySolution> set = {{GridFunction(cfg.grid()), 0.0, 2}};
    std::ostringstream a, b;
    plap::write_stationary_csv(a, set);
    plap::write_stationary_summary_csv(b, set);
    EXPECT_EQ(a.str().substr(0, 10), "index,x,u\n");
    EXPECT_EQ(b.str(), "index,residual_l2,basin_hits,h1,w1inf\n0,0,2,0,0\n");
}
