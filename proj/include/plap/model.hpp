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

#include <cstdint>
#include <limits>
#include <vector>

namespace plap {

/// b * |s|^{q-2} s with q > 1.
struct PowerTerm
{
    double coeff = 0.0;
    double exponent = 2.0;
};

/// f(s) = sum_j a_j s^j + sum_k b_k |s|^{q_k-2} s.
/// The antiderivative F(s) = int_0^s f is available term by term.
class Nonlinearity
{
  public:
    Nonlinearity() = default;
    Nonlinearity(std::vector<double> poly_coeffs, std::vector<PowerTerm> power_terms);

    static Nonlinearity zero() { return {}; }
    static Nonlinearity cubic() { return Nonlinearity({0.0, 0.0, 0.0, 1.0}, {}); }

    [[nodiscard]] const std::vector<double>& poly_coeffs() const noexcept { return poly_; }
    [[nodiscard]] const std::vector<PowerTerm>& power_terms() const noexcept { return power_; }

    [[nodiscard]] double value(double s) const noexcept;
    [[nodiscard]] double antiderivative(double s) const noexcept;
    /// f'(s). Power terms with q < 2 are evaluated with |s| floored at
    /// kJacobianRegularization, since their derivative is unbounded at 0.
    [[nodiscard]] double derivative(double s) const noexcept;

    /// True when f(-s) = -f(s) for every s.
    [[nodiscard]] bool is_odd() const noexcept;

  private:
    std::vector<double> poly_;
    std::vector<PowerTerm> power_;
};

[[nodiscard]] inline double eval_f(const Nonlinearity& nl, double s) noexcept { return nl.value(s); }
[[nodiscard]] inline double eval_F(const Nonlinearity& nl, double s) noexcept { return nl.antiderivative(s); }
[[nodiscard]] inline double eval_df(const Nonlinearity& nl, double s) noexcept { return nl.derivative(s); }

/// Problem data and discretization parameters for one run.
struct ModelConfig
{
    double p = 3.0;
    Nonlinearity nonlinearity = Nonlinearity::cubic();
    GridFunction forcing;
    std::size_t grid_n = 64;
    double dt = 0.01;
    double t_end = 1.0;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;

    ModelConfig();
    ModelConfig(double p, Nonlinearity nl, std::size_t grid_n, double dt, double t_end);

    [[nodiscard]] Grid grid() const { return Grid(grid_n); }

    /// Checks p > 2, grid_n >= 2, dt > 0, t_end >= dt, newton_tol > 0,
    /// and that the forcing lives on the configured grid.
    /// allow_p_le_2 relaxes only the p check (linear oracle runs use p = 2).
    void validate(bool allow_p_le_2 = false) const;

    /// Copy of this config on a different grid; forcing is resampled by
    /// linear interpolation of the current samples.
    [[nodiscard]] ModelConfig with_grid(std::size_t n) const;
};

struct GrowthReport
{
    double lambda = 0.0;
    /// liminf_{|s|->inf} f(s)/(|s|^{p-2}s); may be +-infinity.
    double asymptotic_coefficient = 0.0;
    bool satisfied = false;
    /// asymptotic_coefficient + lambda^p
    double margin = 0.0;
};

inline constexpr std::size_t kDefaultPoincareResolution = 256;

/// Leading-order liminf of f(s)/(|s|^{p-2}s), read off the representation.
[[nodiscard]] double asymptotic_coefficient(const Nonlinearity& nl, double p);

/// Structural check of the growth condition liminf f(s)/(|s|^{p-2}s) > -lambda^p.
[[nodiscard]] GrowthReport check_growth_condition(const Nonlinearity& nl, double p,
                                                  std::size_t resolution = kDefaultPoincareResolution);

struct PoincareOptions
{
    int restarts = 10;
    int max_iterations = 20000;
    /// Stop when the relative quotient decrease over 50 iterations is below this.
    double tolerance = 1e-12;
    std::uint64_t seed = 20240607;
    /// Use the gradient minimizer even at p = 2.
    bool force_gradient = false;
};

struct PoincareResult
{
    double lambda = 0.0;
    /// Minimizer on the interior nodes, scaled to max value 1.
    std::vector<double> minimizer;
    int iterations = 0;
};

/// Minimizes ||phi'||_{L^p} / ||phi||_{L^p} over continuous piecewise-linear
/// Dirichlet functions on a grid with resolution interior nodes. Both norms
/// are integrated exactly, so the result is an upper bound on lambda.
/// Throws ConvergenceError when no restart converges.
[[nodiscard]] PoincareResult poincare_minimize(double p, std::size_t resolution, const PoincareOptions& options = {});

/// Memoized lambda for (p, resolution) with default options.
[[nodiscard]] double poincare_constant(double p, std::size_t resolution);

} // namespace plap
