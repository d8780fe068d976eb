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
#include "plap/model.hpp"

#include "plap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace plap {

Nonlinearity::Nonlinearity(std::vector<double> poly_coeffs, std::vector<PowerTerm> power_terms)
    : poly_(std::move(poly_coeffs))
    , power_(std::move(power_terms))
{
    for (const auto& t : power_)
        if (!(t.exponent > 1.0))
            throw ConfigError("power term exponent must exceed 1, got " + std::to_string(t.exponent));
}

double Nonlinearity::value(double s) const noexcept
{
    double acc = 0.0;
    for (std::size_t j = poly_.size(); j-- > 0;)
        acc = acc * s + poly_[j];
    for (const auto& t : power_)
        acc += t.coeff * signed_power(s, t.exponent);
    return acc;
}

double Nonlinearity::antiderivative(double s) const noexcept
{
    double acc = 0.0;
    for (std::size_t j = poly_.size(); j-- > 0;)
        acc = acc * s + poly_[j] / static_cast<double>(j + 1);
    acc *= s;
    for (const auto& t : power_)
        acc += t.coeff * std::pow(std::abs(s), t.exponent) / t.exponent;
    return acc;
}

double Nonlinearity::derivative(double s) const noexcept
{
    double acc = 0.0;
    for (std::size_t j = poly_.size(); j-- > 1;)
        acc = acc * s + static_cast<double>(j) * poly_[j];
    for (const auto& t : power_) {
        const double mag = t.exponent < 2.0 ? std::max(std::abs(s), kJacobianRegularization) : std::abs(s);
        acc += t.coeff * (t.exponent - 1.0) * (t.exponent == 2.0 ? 1.0 : std::pow(mag, t.exponent - 2.0));
    }
    return acc;
}

bool Nonlinearity::is_odd() const noexcept
{
    for (std::size_t j = 0; j < poly_.size(); j += 2)
        if (poly_[j] != 0.0)
            return false;
    return true;
}

ModelConfig::ModelConfig()
    : forcing(Grid(64))
{
}

ModelConfig::ModelConfig(double p_, Nonlinearity nl, std::size_t n, double dt_, double t_end_)
    : p(p_)
    , nonlinearity(std::move(nl))
    , forcing(Grid(n))
    , grid_n(n)
    , dt(dt_)
    , t_end(t_end_)
{
}

void ModelConfig::validate(bool allow_p_le_2) const
{
    if (!std::isfinite(p) || (allow_p_le_2 ? p < 2.0 : p <= 2.0))
        throw ConfigError("exponent p must satisfy p > 2, got " + std::to_string(p));
    if (grid_n < 2)
        throw ConfigError("grid_n must be at least 2");
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive");
    if (!(t_end >= dt))
        throw ConfigError("t_end must be at least dt");
    if (!(newton_tol > 0.0))
        throw ConfigError("newton_tol must be positive");
    if (newton_max_iter < 1)
        throw ConfigError("newton_max_iter must be at least 1");
    if (forcing.grid().n() != grid_n)
        throw ConfigError("forcing has " + std::to_string(forcing.size()) + " samples, grid_n is "
                          + std::to_string(grid_n));
}

ModelConfig ModelConfig::with_grid(std::size_t n) const
{
    ModelConfig out = *this;
    out.grid_n = n;
    const Grid old_grid = forcing.grid();
    const Grid new_grid(n);
    out.forcing = GridFunction::sample(new_grid, [&](double x) {
        // piecewise-linear interpolation including the zero boundary values
        const double pos = x / old_grid.h();
        const auto k = static_cast<std::size_t>(std::floor(pos));
        const double theta = pos - static_cast<double>(k);
        const auto at = [&](std::size_t node) {
            return (node == 0 || node > old_grid.n()) ? 0.0 : forcing[node - 1];
        };
        return (1.0 - theta) * at(k) + theta * at(k + 1);
    });
    return out;
}

double asymptotic_coefficient(const Nonlinearity& nl, double p)
{
    // Effective growth terms along s -> +inf and s -> -inf. A term with
    // magnitude exponent e contributes c * |s|^{e-(p-1)} to the ratio.
    constexpr double kExponentTol = 1e-12;
    const auto direction_limit = [&](bool negative) {
        std::map<double, double> by_exponent;
        const auto& poly = nl.poly_coeffs();
        for (std::size_t j = 0; j < poly.size(); ++j) {
            if (poly[j] == 0.0)
                continue;
            // s = -r: a_j (-r)^j / (-r^{p-1}) = (-1)^{j+1} a_j r^{j-p+1}
            const double sign = negative ? ((j % 2 == 0) ? -1.0 : 1.0) : 1.0;
            by_exponent[static_cast<double>(j)] += sign * poly[j];
        }
        for (const auto& t : nl.power_terms())
            if (t.coeff != 0.0)
                by_exponent[t.exponent - 1.0] += t.coeff;

        for (auto it = by_exponent.rbegin(); it != by_exponent.rend(); ++it) {
            if (it->second == 0.0)
                continue;
            const double e = it->first;
            if (std::abs(e - (p - 1.0)) <= kExponentTol)
                return it->second;
            if (e > p - 1.0)
                return it->second > 0 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            return 0.0;
        }
        return 0.0;
    };
    return std::min(direction_limit(false), direction_limit(true));
}

GrowthReport check_growth_condition(const Nonlinearity& nl, double p, std::size_t resolution)
{
    if (!(p > 2.0))
        throw ConfigError("growth condition requires p > 2");
    GrowthReport report;
    report.asymptotic_coefficient = asymptotic_coefficient(nl, p);
    report.lambda = poincare_constant(p, resolution);
    const double lambda_p = std::pow(report.lambda, p);
    report.margin = report.asymptotic_coefficient + lambda_p;
    report.satisfied = report.asymptotic_coefficient > -lambda_p;
    return report;
}

} // namespace plap
