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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace plap {

/// sum_k coeffs[k] sin((k+1) pi x), sampled on any grid so that ensembles
/// can be compared across refinements.
struct SineSeries
{
    std::vector<double> coeffs;

    [[nodiscard]] double operator()(double x) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            acc += coeffs[k] * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x);
        return acc;
    }

    [[nodiscard]] GridFunction sample(const Grid& grid) const
    {
        return GridFunction::sample(grid, [this](double x) { return (*this)(x); });
    }

    [[nodiscard]] SineSeries scaled(double a) const
    {
        SineSeries out = *this;
        for (double& c : out.coeffs)
            c *= a;
        return out;
    }
};

/// Coefficients uniform in [-1, 1] damped by 1/k.
[[nodiscard]] inline SineSeries random_sine_series(std::mt19937_64& rng, int modes)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    SineSeries s;
    for (int k = 1; k <= modes; ++k)
        s.coeffs.push_back(unit(rng) / k);
    return s;
}

} // namespace plap
