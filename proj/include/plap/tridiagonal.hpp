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

#include <cstddef>
#include <span>
#include <vector>

namespace plap {

/// Square tridiagonal matrix stored by diagonals.
/// lower[i] multiplies x[i-1] in row i (lower[0] unused);
/// upper[i] multiplies x[i+1] in row i (upper[n-1] unused).
struct Tridiagonal
{
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    Tridiagonal() = default;
    explicit Tridiagonal(std::size_t n)
        : lower(n, 0.0)
        , diag(n, 0.0)
        , upper(n, 0.0)
    {
    }

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    /// y = A x
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
};

/// Thomas algorithm (no pivoting). Throws NumericalError on a vanishing
/// or non-finite pivot.
[[nodiscard]] std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs);

} // namespace plap
