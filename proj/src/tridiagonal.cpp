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
#include "plap/tridiagonal.hpp"

#include "plap/errors.hpp"

#include <cmath>

namespace plap {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const
{
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0)
            acc += lower[i] * x[i - 1];
        if (i + 1 < n)
            acc += upper[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs)
{
    const std::size_t n = a.size();
    if (rhs.size() != n)
        throw NumericalError("solve_tridiagonal: size mismatch");
    std::vector<double> c_star(n), x(n);
    if (n == 0)
        return x;

    double m = a.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (!std::isfinite(m) || m == 0.0)
            throw NumericalError("solve_tridiagonal: singular pivot at row " + std::to_string(i));
        const double prev_d = i ? x[i - 1] : 0.0;
        c_star[i] = (i + 1 < n) ? a.upper[i] / m : 0.0;
        x[i] = (rhs[i] - (i ? a.lower[i] * prev_d : 0.0)) / m;
        if (i + 1 == n)
            break;
        m = a.diag[i + 1] - a.lower[i + 1] * c_star[i];
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c_star[i] * x[i + 1];
    return x;
}

} // namespace plap
