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
#include "plap/energy.hpp"

#include "plap/csv.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace plap {

double energy(const GridFunction& u, const GridFunction& v, const ModelConfig& cfg)
{
    if (!(u.grid() == v.grid()))
        throw std::invalid_argument("energy: u and v live on different grids");
    const double h = u.grid().h();
    double kinetic = 0.0;
    for (double vi : v.values())
        kinetic += vi * vi;
    double gradient = 0.0;
    for (double s : forward_diff(u))
        gradient += std::pow(std::abs(s), cfg.p);
    double potential = 0.0;
    double forcing = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        potential += cfg.nonlinearity.antiderivative(u[i]);
        forcing += cfg.forcing[i] * u[i];
    }
    return h * (0.5 * kinetic + gradient / cfg.p + potential - forcing);
}

double lyapunov(const GridFunction& u, const GridFunction& v, const ModelConfig& cfg)
{
    return energy(u, v, cfg);
}

void EnergyLedger::record_step(double t, double e, double dissipation_rate)
{
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("EnergyLedger: time " + csv::num(t) + " does not exceed last time "
                                    + csv::num(times_.back()));
    double cumulative = 0.0;
    if (!times_.empty())
        cumulative = cumulative_.back() + 0.5 * (t - times_.back()) * (rates_.back() + dissipation_rate);
    times_.push_back(t);
    energies_.push_back(e);
    rates_.push_back(dissipation_rate);
    cumulative_.push_back(cumulative);
    residuals_.push_back(e + cumulative - energies_.front());
}

std::vector<double> EnergyLedger::step_residuals() const
{
    std::vector<double> out;
    for (std::size_t k = 1; k < times_.size(); ++k)
        out.push_back(energies_[k] - energies_[k - 1] + (times_[k] - times_[k - 1]) * rates_[k]);
    return out;
}

void EnergyLedger::write_csv(std::ostream& os) const
{
    os << "t,E,D_cumulative,residual\n";
    for (std::size_t k = 0; k < times_.size(); ++k)
        csv::write_row(os, {csv::num(times_[k]), csv::num(energies_[k]), csv::num(cumulative_[k]),
                            csv::num(residuals_[k])});
}

} // namespace plap
