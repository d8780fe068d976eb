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
#include "plap/grid.hpp"

#include "plap/csv.hpp"
#include "plap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace plap {

Grid::Grid(std::size_t n)
    : n_(n)
    , h_(1.0 / static_cast<double>(n + 1))
{
    if (n < 2)
        throw ConfigError("grid needs at least 2 interior nodes, got " + std::to_string(n));
}

std::vector<double> Grid::nodes() const
{
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i)
        xs[i] = x(i);
    return xs;
}

GridFunction::GridFunction(Grid grid)
    : grid_(grid)
    , values_(grid.n(), 0.0)
{
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid)
    , values_(std::move(values))
{
    if (values_.size() != grid_.n())
        throw ConfigError("grid function has " + std::to_string(values_.size()) + " values, grid has "
                          + std::to_string(grid_.n()) + " nodes");
}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& fn)
{
    GridFunction u(grid);
    for (std::size_t i = 0; i < grid.n(); ++i)
        u.values_[i] = fn(grid.x(i));
    return u;
}

GridFunction& GridFunction::operator+=(const GridFunction& other)
{
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other)
{
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double a)
{
    for (double& v : values_)
        v *= a;
    return *this;
}

double signed_power(double s, double p) noexcept
{
    if (s == 0.0)
        return 0.0;
    return std::pow(std::abs(s), p - 2.0) * s;
}

std::vector<double> forward_diff(const GridFunction& u)
{
    const std::size_t n = u.size();
    const double inv_h = 1.0 / u.grid().h();
    std::vector<double> s(n + 1);
    double left = 0.0;
    for (std::size_t c = 0; c <= n; ++c) {
        const double right = c < n ? u[c] : 0.0;
        s[c] = (right - left) * inv_h;
        left = right;
    }
    return s;
}

GridFunction p_laplacian(const GridFunction& u, double p)
{
    const std::size_t n = u.size();
    const double inv_h = 1.0 / u.grid().h();
    const auto s = forward_diff(u);
    std::vector<double> flux(n + 1);
    for (std::size_t c = 0; c <= n; ++c)
        flux[c] = signed_power(s[c], p);
    GridFunction out(u.grid());
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (flux[i + 1] - flux[i]) * inv_h;
    return out;
}

Tridiagonal p_laplacian_jacobian(const GridFunction& u, double p, double eps_reg)
{
    const std::size_t n = u.size();
    const double inv_h2 = 1.0 / (u.grid().h() * u.grid().h());
    const auto s = forward_diff(u);
    std::vector<double> w(n + 1);
    for (std::size_t c = 0; c <= n; ++c)
        w[c] = (p - 1.0) * std::pow(std::max(std::abs(s[c]), eps_reg), p - 2.0);

    Tridiagonal jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        // node i sits between cell i (left) and cell i+1 (right)
        jac.diag[i] = -(w[i] + w[i + 1]) * inv_h2;
        jac.lower[i] = i > 0 ? w[i] * inv_h2 : 0.0;
        jac.upper[i] = i + 1 < n ? w[i + 1] * inv_h2 : 0.0;
    }
    return jac;
}

Tridiagonal dirichlet_laplacian(const Grid& grid)
{
    const std::size_t n = grid.n();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    Tridiagonal k(n);
    for (std::size_t i = 0; i < n; ++i) {
        k.diag[i] = 2.0 * inv_h2;
        k.lower[i] = i > 0 ? -inv_h2 : 0.0;
        k.upper[i] = i + 1 < n ? -inv_h2 : 0.0;
    }
    return k;
}

double monotonicity_gap(double x, double y, double p) noexcept
{
    const double c_p = std::pow(2.0, 2.0 - p);
    return (signed_power(x, p) - signed_power(y, p)) * (x - y) - c_p * std::pow(std::abs(x - y), p);
}

double inner(const GridFunction& u, const GridFunction& v)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * v[i];
    return acc * u.grid().h();
}

double l2_norm(const GridFunction& u)
{
    return std::sqrt(inner(u, u));
}

double lp_grad_norm(const GridFunction& u, double p)
{
    double acc = 0.0;
    for (double s : forward_diff(u))
        acc += std::pow(std::abs(s), p);
    return std::pow(acc * u.grid().h(), 1.0 / p);
}

double h1_norm(const GridFunction& u)
{
    double acc = 0.0;
    for (double s : forward_diff(u))
        acc += s * s;
    return std::sqrt(acc * u.grid().h());
}

double h_neg1_norm(const GridFunction& u)
{
    const auto w = solve_tridiagonal(dirichlet_laplacian(u.grid()), u.values());
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * w[i];
    return std::sqrt(std::max(acc, 0.0) * u.grid().h());
}

double w1inf_norm(const GridFunction& u)
{
    double m = 0.0;
    for (double s : forward_diff(u))
        m = std::max(m, std::abs(s));
    return m;
}

double sup_norm(const GridFunction& u)
{
    double m = 0.0;
    for (double v : u.values())
        m = std::max(m, std::abs(v));
    return m;
}

Norms norms(const GridFunction& u, double p)
{
    return {l2_norm(u), lp_grad_norm(u, p), h1_norm(u), h_neg1_norm(u), w1inf_norm(u)};
}

void write_grid_function_csv(std::ostream& os, const GridFunction& u)
{
    os << "x,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        csv::write_row(os, {csv::num(u.grid().x(i)), csv::num(u[i])});
}

GridFunction read_grid_function_csv(std::istream& is, const Grid& grid)
{
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto cells = csv::split(line);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() == 2 && cells[0] == "x" && cells[1] == "u")
                continue;
        }
        if (cells.size() != 2)
            throw ConfigError("expected 2 columns (x,u), got " + std::to_string(cells.size()), lineno);
        double x = 0.0, v = 0.0;
        try {
            std::size_t used = 0;
            x = std::stod(cells[0], &used);
            if (used != cells[0].size())
                throw std::invalid_argument("x");
            v = std::stod(cells[1], &used);
            if (used != cells[1].size())
                throw std::invalid_argument("u");
        } catch (const std::exception&) {
            throw ConfigError("malformed number in '" + line + "'", lineno);
        }
        const std::size_t i = values.size();
        if (i < grid.n() && std::abs(x - grid.x(i)) > 1e-9)
            throw ConfigError("node " + std::to_string(i + 1) + " at x=" + cells[0] + " does not match grid x="
                                  + csv::num(grid.x(i)),
                              lineno);
        values.push_back(v);
    }
    if (values.size() != grid.n())
        throw ConfigError("grid function file has " + std::to_string(values.size()) + " rows, grid has "
                          + std::to_string(grid.n()) + " interior nodes");
    return GridFunction(grid, std::move(values));
}

GridFunction read_grid_function_csv(const std::string& path, const Grid& grid)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open grid function file '" + path + "'");
    return read_grid_function_csv(in, grid);
}

} // namespace plap
