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
#include "plap/errors.hpp"
#include "plap/tridiagonal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k]))
                piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
                a[i][j] -= m * a[k][j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

} // namespace

TEST(Tridiagonal, MatchesDenseElimination)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {2u, 3u, 10u, 57u}) {
        plap::Tridiagonal t;
        t.lower.resize(n);
        t.diag.resize(n);
        t.upper.resize(n);
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            t.lower[i] = i > 0 ? u(rng) : 0.0;
            t.upper[i] = i + 1 < n ? u(rng) : 0.0;
            t.diag[i] = 3.0 + u(rng);
            dense[i][i] = t.diag[i];
            if (i > 0)
                dense[i][i - 1] = t.lower[i];
            if (i + 1 < n)
                dense[i][i + 1] = t.upper[i];
            rhs[i] = u(rng);
        }
        const auto x = plap::solve_tridiagonal(t, rhs);
        const auto ref = dense_solve(dense, rhs);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(x[i], ref[i], 1e-13);
        const auto back = t.apply(x);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(back[i], rhs[i], 1e-13);
    }
}

TEST(Tridiagonal, ZeroPivotThrows)
{
    plap::Tridiagonal t(2);
    t.diag = {0.0, 1.0};
    t.upper = {1.0, 0.0};
    t.lower = {0.0, 1.0};
    EXPECT_THROW((void)plap::solve_tridiagonal(t, std::vector<double>{1.0, 1.0}), plap::NumericalError);
}
