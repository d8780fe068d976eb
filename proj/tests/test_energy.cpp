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
#include "plap/energy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

using plap::GridFunction;
using std::numbers::pi;

namespace {

GridFunction sin_pi(const plap::Grid& grid)
{
    return GridFunction::sample(grid, [](double x) { return std::sin(pi * x); });
}

} // namespace

TEST(Energy, ClosedFormStates)
{
    plap::ModelConfig lin(2.0, plap::Nonlinearity::zero(), 256, 0.01, 1.0);
    const plap::Grid grid = lin.grid();
    EXPECT_EQ(plap::energy(GridFunction(grid), GridFunction(grid), lin), 0.0);
    EXPECT_NEAR(plap::energy(sin_pi(grid), GridFunction(grid), lin), pi * pi / 4.0, 1e-2);
    EXPECT_NEAR(plap::energy(GridFunction(grid), sin_pi(grid), lin), 0.25, 1e-3);
}

TEST(Energy, ForcingAndPotentialTerms)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 100, 0.01, 1.0);
    const plap::Grid grid = cfg.grid();
    cfg.forcing = GridFunction::sample(grid, [](double) { return 2.0; });
    const auto u = GridFunction::sample(grid, [](double) { return 0.5; });
    // u has a jump at each boundary: two cells of slope +-0.5/h
    const double h = grid.h();
    const double grad = 2.0 * h * std::pow(0.5 / h, 3.0) / 3.0;
    const double potential = grid.n() * h * std::pow(0.5, 4) / 4.0;
    const double forcing = grid.n() * h * 2.0 * 0.5;
    EXPECT_NEAR(plap::energy(u, GridFunction(grid), cfg), grad + potential - forcing, 1e-9 * grad);
}

TEST(Lyapunov, CoincidesWithEnergy)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    plap::ModelConfig cfg(3.0, plap::Nonlinearity({0.0, -1.0, 0.0, 1.0}, {}), 32, 0.01, 1.0);
    cfg.forcing = sin_pi(cfg.grid());
    for (int k = 0; k < 100; ++k) {
        GridFunction u(cfg.grid()), v(cfg.grid());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = d(rng), v[i] = d(rng);
        EXPECT_EQ(plap::lyapunov(u, v, cfg), plap::energy(u, v, cfg));
    }
}

TEST(EnergyLedger, SingleEntry)
{
    plap::EnergyLedger ledger;
    ledger.record_step(0.0, 3.5, 0.0);
    ASSERT_EQ(ledger.size(), 1u);
    EXPECT_EQ(ledger.inequality_residuals().front(), 0.0);
    EXPECT_EQ(ledger.dissipation_cumulative().front(), 0.0);
}

TEST(EnergyLedger, TrapezoidDissipationAndResidual)
{
    plap::EnergyLedger ledger;
    ledger.record_step(0.0, 10.0, 2.0);
    ledger.record_step(0.5, 9.0, 4.0);
    ledger.record_step(1.0, 7.0, 0.0);
    EXPECT_DOUBLE_EQ(ledger.dissipation_cumulative()[1], 1.5);
    EXPECT_DOUBLE_EQ(ledger.dissipation_cumulative()[2], 2.5);
    EXPECT_DOUBLE_EQ(ledger.inequality_residuals()[2], 7.0 + 2.5 - 10.0);
    const auto steps = ledger.step_residuals();
    ASSERT_EQ(steps.size(), 2u);
    EXPECT_DOUBLE_EQ(steps[0], 9.0 - 10.0 + 0.5 * 4.0);
    EXPECT_DOUBLE_EQ(steps[1], 7.0 - 9.0 + 0.0);
}

TEST(EnergyLedger, RejectsNonIncreasingTime)
{
    plap::EnergyLedger ledger;
    ledger.record_step(1.0, 1.0, 0.0);
    EXPECT_THROW(ledger.record_step(1.0, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(ledger.record_step(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST(EnergyLedger, CsvSchema)
{
    plap::EnergyLedger ledger;
    ledger.record_step(0.0, 1.0, 0.0);
    std::ostringstream os;
    ledger.write_csv(os);
    EXPECT_EQ(os.str(), "t,E,D_cumulative,residual\n0,1,0,0\n");
}

TEST(EnergyLedger, StationaryRunHasZeroResiduals)
{
    plap::ModelConfig cfg(3.0, plap::Nonlinearity::cubic(), 16, 0.1, 1.0);
    const auto rec = plap::simulate(plap::State::zero(cfg.grid()), cfg, plap::Scheme::BackwardEuler);
    for (double r : rec.ledger.inequality_residuals())
        EXPECT_NEAR(r, 0.0, cfg.newton_tol);
}

TEST(EnergyLedger, LinearModeResidualIsFirstOrderForBackwardEuler)
{
    const auto final_residual = [](double dt) {
        plap::ModelConfig cfg(2.0, plap::Nonlinearity::zero(), 32, dt, 1.0);
        cfg.newton_tol = 1e-14;
        const auto rec = plap::simulate(plap::State(sin_pi(cfg.grid()), GridFunction(cfg.grid())), cfg,
                                        plap::Scheme::BackwardEuler, {.record_stride = 1000, .check_growth = false});
        return std::abs(rec.ledger.inequality_residuals().back());
    };
    const double coarse = final_residual(0.01);
    const double fine = final_residual(0.005);
    EXPECT_LT(coarse, 0.1);
    EXPECT_NEAR(coarse / fine, 2.0, 0.3);
}
