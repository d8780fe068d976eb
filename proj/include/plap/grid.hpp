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

#include "plap/tridiagonal.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace plap {

/// Uniform grid on [0,1] with n interior nodes x_i = i*h, i = 1..n,
/// h = 1/(n+1). Boundary values are implicitly zero.
class Grid
{
  public:
    explicit Grid(std::size_t n);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    /// Coordinate of the interior node with zero-based index i.
    [[nodiscard]] double x(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }
    [[nodiscard]] std::vector<double> nodes() const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

  private:
    std::size_t n_;
    double h_;
};

/// Nodal values on a Grid with homogeneous Dirichlet boundary.
class GridFunction
{
  public:
    explicit GridFunction(Grid grid);
    GridFunction(Grid grid, std::vector<double> values);

    static GridFunction sample(Grid grid, const std::function<double(double)>& fn);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double a);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double a, GridFunction b) { return b *= a; }
    friend GridFunction operator-(GridFunction a) { return a *= -1.0; }

  private:
    Grid grid_;
    std::vector<double> values_;
};

/// Regularization floor applied to |u_x| inside Newton Jacobians only.
inline constexpr double kJacobianRegularization = 1e-8;

/// phi(s) = |s|^{p-2} s
[[nodiscard]] double signed_power(double s, double p) noexcept;

/// Cell slopes (u_{i+1} - u_i)/h for the n+1 cells, using zero ghost values.
[[nodiscard]] std::vector<double> forward_diff(const GridFunction& u);

/// Conservative discrete p-Laplacian: node i receives
/// (phi(s_{i+1/2}) - phi(s_{i-1/2}))/h. For p = 2 this is the 3-point Laplacian.
[[nodiscard]] GridFunction p_laplacian(const GridFunction& u, double p);

/// Jacobian of p_laplacian with cell weights (p-1)*max(|s|, eps_reg)^{p-2}.
/// The result is symmetric and negative semidefinite.
[[nodiscard]] Tridiagonal p_laplacian_jacobian(const GridFunction& u, double p,
                                               double eps_reg = kJacobianRegularization);

/// Positive Dirichlet Laplacian K = -Delta_h on the grid: (2, -1, -1)/h^2.
[[nodiscard]] Tridiagonal dirichlet_laplacian(const Grid& grid);

/// (phi(x) - phi(y))(x - y) - 2^{2-p}|x - y|^p; non-negative for p >= 2.
[[nodiscard]] double monotonicity_gap(double x, double y, double p) noexcept;

[[nodiscard]] double l2_norm(const GridFunction& u);
/// (h sum_cells |s_c|^p)^{1/p}
[[nodiscard]] double lp_grad_norm(const GridFunction& u, double p);
[[nodiscard]] double h1_norm(const GridFunction& u);
/// (h u^T K^{-1} u)^{1/2}, one tridiagonal solve.
[[nodiscard]] double h_neg1_norm(const GridFunction& u);
/// max_cells |s_c|
[[nodiscard]] double w1inf_norm(const GridFunction& u);
[[nodiscard]] double sup_norm(const GridFunction& u);
/// h sum u_i v_i
[[nodiscard]] double inner(const GridFunction& u, const GridFunction& v);

struct Norms
{
    double l2 = 0.0;
    double lp_grad = 0.0;
    double h1 = 0.0;
    double h_neg1 = 0.0;
    double w1inf = 0.0;
};

[[nodiscard]] Norms norms(const GridFunction& u, double p);

/// CSV with header "x,u", one row per interior node. Lines starting with '#'
/// are comments.
void write_grid_function_csv(std::ostream& os, const GridFunction& u);
/// Throws ConfigError when the row count does not match grid.n() or a row is malformed.
[[nodiscard]] GridFunction read_grid_function_csv(std::istream& is, const Grid& grid);
[[nodiscard]] GridFunction read_grid_function_csv(const std::string& path, const Grid& grid);

} // namespace plap
