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

#include "plap/grid.hpp"
#include "plap/model.hpp"

#include <iosfwd>
#include <vector>

namespace plap {

/// E(u,v) = 1/2 ||v||^2 + 1/p ||u_x||_p^p + int F(u) - int g u, all on the grid.
[[nodiscard]] double energy(const GridFunction& u, const GridFunction& v, const ModelConfig& cfg);

/// The strict Lyapunov function of the flow. Same value as energy().
[[nodiscard]] double lyapunov(const GridFunction& u, const GridFunction& v, const ModelConfig& cfg);

/// Time series of the energy balance along one trajectory.
///
/// Each record carries the energy E(t) and the dissipation rate ||v_x(t)||^2.
/// The cumulative dissipation D(t) is integrated by the trapezoid rule and the
/// balance residual is E(t) + D(t) - E(t_0), which is <= 0 up to solver noise
/// for a dissipative run and O(dt^2) for an energy-consistent one.
class EnergyLedger
{
  public:
    /// Throws std::invalid_argument unless t is strictly greater than the last time.
    void record_step(double t, double energy, double dissipation_rate);

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] bool empty() const noexcept { return times_.empty(); }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<double>& energies() const noexcept { return energies_; }
    [[nodiscard]] const std::vector<double>& dissipation_rates() const noexcept { return rates_; }
    [[nodiscard]] const std::vector<double>& dissipation_cumulative() const noexcept { return cumulative_; }
    [[nodiscard]] const std::vector<double>& inequality_residuals() const noexcept { return residuals_; }

    /// Per-step backward-Euler balance E_{k+1} - E_k + (t_{k+1}-t_k) ||v_x(t_{k+1})||^2.
    [[nodiscard]] std::vector<double> step_residuals() const;

    /// CSV columns t,E,D_cumulative,residual.
    void write_csv(std::ostream& os) const;

  private:
    std::vector<double> times_;
    std::vector<double> energies_;
    std::vector<double> rates_;
    std::vector<double> cumulative_;
    std::vector<double> residuals_;
};

} // namespace plap
