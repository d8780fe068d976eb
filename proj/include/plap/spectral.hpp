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

#include <iosfwd>
#include <vector>

namespace plap {

/// Coefficients c_k against the orthonormal discrete Dirichlet eigenvectors
/// sqrt(2) sin(k pi x_i), k = 1..n, in the grid inner product h sum u_i v_i.
struct SpectralField
{
    Grid grid;
    std::vector<double> coeffs;
};

[[nodiscard]] SpectralField to_spectral(const GridFunction& u);
[[nodiscard]] GridFunction from_spectral(const SpectralField& field);

/// Eigenvalues (4/h^2) sin^2(k pi h/2) of the discrete Dirichlet Laplacian, k = 1..n.
[[nodiscard]] std::vector<double> dirichlet_eigenvalues(const Grid& grid);

/// (sum_k lambda_k^s c_k^2)^{1/2}, s in [-2, 2]. s = 0 is the L^2 norm and
/// s = 1 equals h1_norm on the same grid.
[[nodiscard]] double fractional_norm(const SpectralField& field, double s);

/// c_k -> exp(-lambda_k t) c_k, t >= 0.
[[nodiscard]] SpectralField heat_evolve(const SpectralField& field, double t);

/// Exact norm of exp(-tA) from D(A^s) to D(A^sigma) on the grid:
/// max_k lambda_k^{sigma-s} exp(-lambda_k t), sigma >= s, t > 0.
[[nodiscard]] double decay_operator_norm(const Grid& grid, double s, double sigma, double t);

struct DecayRow
{
    double t = 0.0;
    double exact_norm = 0.0;
    double bound = 0.0;
    /// exact_norm / bound
    double ratio = 0.0;
};

struct DecayReport
{
    double s = 0.0;
    double sigma = 0.0;
    /// Fixed at lambda_1 / 2.
    double omega = 0.0;
    /// Smallest M with exact <= M exp(-omega t) t^{-(sigma-s)} on the t grid.
    double fitted_m = 0.0;
    std::vector<DecayRow> rows;
    bool dominated = true;
};

/// Fits M in M exp(-omega t) t^{-(sigma - s)} over t_grid and checks that the
/// bound dominates the exact operator norm at every grid time.
[[nodiscard]] DecayReport check_decay_estimate(const Grid& grid, double s, double sigma,
                                               const std::vector<double>& t_grid);

/// count log-spaced points from a to b inclusive.
[[nodiscard]] std::vector<double> log_spaced(double a, double b, int count);

struct EmbeddingReport
{
    /// max_u R(u) over non-zero samples.
    double constant = 0.0;
    /// R(u) per sample, 0 for skipped (zero) samples.
    std::vector<double> ratios;
    int skipped = 0;
};

/// R(u) = max_i |u_i| / (||u||_{H^-eps} + ||D u||_{H^-eps}), eps in [0, 1/2).
///
/// The difference quotient D u lives on cells. Its natural eigenbasis is the
/// discrete Neumann one, the vectors D psi_k / sqrt(lambda_k), so
/// ||D u||_{H^-eps} = (sum_k lambda_k^{1-eps} c_k^2)^{1/2} = fractional_norm(u, 1 - eps).
[[nodiscard]] EmbeddingReport embedding_bound_check(const std::vector<GridFunction>& samples, double eps);

/// sin(k pi x) for k = 1..modes plus a unit hat centred at 1/2 with
/// half-width spike_cells grid cells, so the spike sharpens under refinement.
[[nodiscard]] std::vector<GridFunction> mode_spike_family(const Grid& grid, int modes = 4, double spike_cells = 2.0);

/// t,exact_norm,bound,ratio
void write_decay_csv(std::ostream& os, const DecayReport& report);

} // namespace plap
