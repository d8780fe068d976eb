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
#include "plap/spectral.hpp"

#include "plap/csv.hpp"
#include "plap/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace plap {
namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

/// Unnormalized DST-I: y_k = 2 sum_j x_j sin(pi (j+1)(k+1)/(n+1)).
std::vector<double> dst1(std::span<const double> x)
{
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x.begin(), x.end()), out(x.size());
    fftw_plan plan;
    {
        // only fftw_execute is thread-safe
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    if (!plan)
        throw NumericalError("FFTW could not plan a DST-I of size " + std::to_string(n));
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

SpectralField to_spectral(const GridFunction& u)
{
    auto c = dst1(u.values());
    const double scale = u.grid().h() / std::numbers::sqrt2;
    for (double& v : c)
        v *= scale;
    return {u.grid(), std::move(c)};
}

GridFunction from_spectral(const SpectralField& field)
{
    auto u = dst1(field.coeffs);
    for (double& v : u)
        v /= std::numbers::sqrt2;
    return GridFunction(field.grid, std::move(u));
}

std::vector<double> dirichlet_eigenvalues(const Grid& grid)
{
    const double h = grid.h();
    std::vector<double> lambda(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double s = std::sin(static_cast<double>(k + 1) * std::numbers::pi * h / 2.0);
        lambda[k] = 4.0 * s * s / (h * h);
    }
    return lambda;
}

double fractional_norm(const SpectralField& field, double s)
{
    if (s < -2.0 || s > 2.0)
        throw std::invalid_argument("fractional_norm: s must lie in [-2, 2]");
    const auto lambda = dirichlet_eigenvalues(field.grid);
    double acc = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k)
        acc += std::pow(lambda[k], s) * field.coeffs[k] * field.coeffs[k];
    return std::sqrt(acc);
}

SpectralField heat_evolve(const SpectralField& field, double t)
{
    if (t < 0.0)
        throw std::invalid_argument("heat_evolve: t must be non-negative");
    const auto lambda = dirichlet_eigenvalues(field.grid);
    SpectralField out = field;
    for (std::size_t k = 0; k < lambda.size(); ++k)
        out.coeffs[k] *= std::exp(-lambda[k] * t);
    return out;
}

namespace {

double log_decay_norm(const std::vector<double>& lambda, double alpha, double t)
{
    double best = -std::numeric_limits<double>::infinity();
    for (double l : lambda)
        best = std::max(best, alpha * std::log(l) - l * t);
    return best;
}

} // namespace

double decay_operator_norm(const Grid& grid, double s, double sigma, double t)
{
    if (sigma < s || !(t > 0.0))
        throw std::invalid_argument("decay_operator_norm requires sigma >= s and t > 0");
    return std::exp(log_decay_norm(dirichlet_eigenvalues(grid), sigma - s, t));
}

DecayReport check_decay_estimate(const Grid& grid, double s, double sigma, const std::vector<double>& t_grid)
{
    if (sigma < s)
        throw std::invalid_argument("check_decay_estimate requires sigma >= s");
    const auto lambda = dirichlet_eigenvalues(grid);
    const double alpha = sigma - s;
    DecayReport report;
    report.s = s;
    report.sigma = sigma;
    report.omega = lambda.front() / 2.0;

    // log of exact / (exp(-omega t) t^{-alpha})
    std::vector<double> log_exact;
    double log_m = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw std::invalid_argument("check_decay_estimate: times must be positive");
        log_exact.push_back(log_decay_norm(lambda, alpha, t));
        log_m = std::max(log_m, log_exact.back() + report.omega * t + alpha * std::log(t));
    }
    report.fitted_m = std::exp(log_m);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        const double log_bound = log_m - report.omega * t - alpha * std::log(t);
        DecayRow row{t, std::exp(log_exact[k]), std::exp(log_bound), std::exp(log_exact[k] - log_bound)};
        report.dominated = report.dominated && row.ratio <= 1.0 + 1e-12;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<double> log_spaced(double a, double b, int count)
{
    std::vector<double> out;
    if (count == 1)
        return {a};
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    out.front() = a;
    out.back() = b;
    return out;
}

EmbeddingReport embedding_bound_check(const std::vector<GridFunction>& samples, double eps)
{
    if (eps < 0.0 || eps >= 0.5)
        throw std::invalid_argument("embedding_bound_check: eps must lie in [0, 1/2)");
    EmbeddingReport report;
    for (const auto& u : samples) {
        const double peak = sup_norm(u);
        if (peak == 0.0) {
            ++report.skipped;
            report.ratios.push_back(0.0);
            continue;
        }
        const auto field = to_spectral(u);
        const double r = peak / (fractional_norm(field, -eps) + fractional_norm(field, 1.0 - eps));
        report.ratios.push_back(r);
        report.constant = std::max(report.constant, r);
    }
    return report;
}

std::vector<GridFunction> mode_spike_family(const Grid& grid, int modes, double spike_cells)
{
    std::vector<GridFunction> out;
    for (int k = 1; k <= modes; ++k)
        out.push_back(GridFunction::sample(grid, [k](double x) { return std::sin(k * std::numbers::pi * x); }));
    const double w = spike_cells * grid.h();
    out.push_back(GridFunction::sample(grid, [w](double x) { return std::max(0.0, 1.0 - std::abs(x - 0.5) / w); }));
    return out;
}

void write_decay_csv(std::ostream& os, const DecayReport& report)
{
    os << "# s=" << csv::num(report.s) << " sigma=" << csv::num(report.sigma) << " omega=" << csv::num(report.omega)
       << " M=" << csv::num(report.fitted_m) << '\n';
    os << "t,exact_norm,bound,ratio\n";
    for (const auto& r : report.rows)
        csv::write_row(os, {csv::num(r.t), csv::num(r.exact_norm), csv::num(r.bound), csv::num(r.ratio)});
}

} // namespace plap
