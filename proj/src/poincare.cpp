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
#include "plap/model.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <utility>

namespace plap {
namespace {

// 8-point Gauss-Legendre on [0,1].
constexpr std::array<double, 8> kGaussNodes = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.40828267875217511,
    0.59171732124782489,  0.7627662049581645,  0.89833323870681336, 0.98014492824876814};
constexpr std::array<double, 8> kGaussWeights = {
    0.050614268145188129, 0.11119051722668724, 0.15685332293894364, 0.18134189168918099,
    0.18134189168918099,  0.15685332293894364, 0.11119051722668724, 0.050614268145188129};

/// int_0^1 |a + (b-a)t|^p dt and its partial derivatives in a and b.
struct CellIntegral
{
    double value;
    double d_a;
    double d_b;
};

CellIntegral cell_lp_integral(double a, double b, double p)
{
    const double diff = b - a;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0)
        return {0.0, 0.0, 0.0};
    if (std::abs(diff) > 1e-2 * scale) {
        // antiderivative of |y|^p is |y|^p y/(p+1); valid across a sign change
        const double pa = std::pow(std::abs(a), p);
        const double pb = std::pow(std::abs(b), p);
        const double q = (pb * b - pa * a) / (p + 1.0);
        const double d2 = diff * diff;
        return {q / diff, (q - pa * diff) / d2, (pb * diff - q) / d2};
    }
    CellIntegral out{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
        const double t = kGaussNodes[k];
        const double y = a + diff * t;
        const double ay = std::abs(y);
        const double dy = p * std::pow(ay, p - 1.0) * (y < 0 ? -1.0 : 1.0);
        out.value += kGaussWeights[k] * std::pow(ay, p);
        out.d_a += kGaussWeights[k] * dy * (1.0 - t);
        out.d_b += kGaussWeights[k] * dy * t;
    }
    return out;
}

/// Quotient ||phi'||_p^p / ||phi||_p^p for the piecewise-linear interpolant,
/// with the gradient of the quotient in nodal coordinates.
struct Quotient
{
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
    std::vector<double> gradient;
};

Quotient evaluate_quotient(const std::vector<double>& phi, double p, double h, bool with_gradient)
{
    const std::size_t n = phi.size();
    const auto node = [&](std::size_t k) { return (k == 0 || k > n) ? 0.0 : phi[k - 1]; };
    Quotient q;
    std::vector<double> d_num, d_den;
    if (with_gradient) {
        d_num.assign(n, 0.0);
        d_den.assign(n, 0.0);
    }
    // cell c spans extended nodes c and c+1
    for (std::size_t c = 0; c <= n; ++c) {
        const double a = node(c);
        const double b = node(c + 1);
        const double s = (b - a) / h;
        q.numerator += h * std::pow(std::abs(s), p);
        const auto cell = cell_lp_integral(a, b, p);
        q.denominator += h * cell.value;
        if (with_gradient) {
            const double flux = p * signed_power(s, p);
            if (c > 0) {
                d_num[c - 1] -= flux;
                d_den[c - 1] += h * cell.d_a;
            }
            if (c < n) {
                d_num[c] += flux;
                d_den[c] += h * cell.d_b;
            }
        }
    }
    q.value = q.numerator / q.denominator;
    if (with_gradient) {
        q.gradient.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            q.gradient[i] = (d_num[i] - q.value * d_den[i]) / q.denominator;
    }
    return q;
}

void normalize_lp(std::vector<double>& phi, double p, double h)
{
    const double d = evaluate_quotient(phi, p, h, false).denominator;
    const double scale = std::pow(d, -1.0 / p);
    for (double& v : phi)
        v *= scale;
}

struct RestartOutcome
{
    bool converged = false;
    double quotient = 0.0;
    std::vector<double> phi;
    int iterations = 0;
};

RestartOutcome minimize_from(std::vector<double> phi, double p, const Grid& grid, const PoincareOptions& opt)
{
    const double h = grid.h();
    constexpr double kArmijo = 1e-4;
    constexpr int kWindow = 50;

    normalize_lp(phi, p, h);
    auto q = evaluate_quotient(phi, p, h, true);
    double step = 1.0;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(opt.max_iterations) + 1);
    history.push_back(q.value);

    RestartOutcome out;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        // Descent direction preconditioned by the linearized p-Laplacian at
        // the current iterate; slopes are floored relative to the largest one.
        const GridFunction current(grid, phi);
        auto precond = p_laplacian_jacobian(current, p, 1e-2 * w1inf_norm(current));
        for (std::size_t i = 0; i < precond.size(); ++i) {
            precond.diag[i] = -precond.diag[i];
            precond.lower[i] = -precond.lower[i];
            precond.upper[i] = -precond.upper[i];
        }
        auto dir = solve_tridiagonal(precond, q.gradient);
        double slope = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i)
            slope += dir[i] * q.gradient[i];
        if (!(slope > 0.0)) {
            out.converged = true;
            out.iterations = it;
            break;
        }

        bool accepted = false;
        std::vector<double> trial(phi.size());
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t i = 0; i < phi.size(); ++i)
                trial[i] = phi[i] - step * dir[i];
            normalize_lp(trial, p, h);
            const double r = evaluate_quotient(trial, p, h, false).value;
            if (std::isfinite(r) && r <= q.value - kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no further decrease representable at this precision
            out.converged = true;
            out.iterations = it;
            break;
        }
        phi.swap(trial);
        q = evaluate_quotient(phi, p, h, true);
        history.push_back(q.value);
        step = std::min(step * 2.0, 1e6);

        if (history.size() > kWindow) {
            const double old = history[history.size() - 1 - kWindow];
            if (old - q.value <= opt.tolerance * q.value) {
                out.converged = true;
                out.iterations = it;
                break;
            }
        }
        out.iterations = it;
    }
    out.quotient = q.value;
    out.phi = std::move(phi);
    return out;
}

PoincareResult linear_eigensolve(std::size_t n)
{
    // Smallest generalized eigenvalue of the P1 stiffness/mass pair by
    // inverse iteration; each iteration is one tridiagonal solve.
    const Grid grid(n);
    const double h = grid.h();
    const auto k = dirichlet_laplacian(grid);
    Tridiagonal mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        mass.diag[i] = 4.0 * h / 6.0;
        mass.lower[i] = i > 0 ? h / 6.0 : 0.0;
        mass.upper[i] = i + 1 < n ? h / 6.0 : 0.0;
    }
    const auto rayleigh = [&](const std::vector<double>& x) {
        const auto kx = k.apply(x);
        const auto mx = mass.apply(x);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += h * x[i] * kx[i];
            den += x[i] * mx[i];
        }
        return num / den;
    };

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = grid.x(i) * (1.0 - grid.x(i));
    double mu = rayleigh(x);
    int it = 0;
    for (; it < 500; ++it) {
        x = solve_tridiagonal(k, mass.apply(x));
        const double peak = *std::max_element(x.begin(), x.end());
        for (double& v : x)
            v /= peak;
        const double next = rayleigh(x);
        const bool done = std::abs(next - mu) <= 1e-15 * next;
        mu = next;
        if (done)
            break;
    }
    return {std::sqrt(mu), std::move(x), it + 1};
}

} // namespace

PoincareResult poincare_minimize(double p, std::size_t resolution, const PoincareOptions& options)
{
    if (!(p > 1.0))
        throw ConfigError("poincare_constant requires p > 1");
    if (resolution < 32)
        throw ConfigError("poincare_constant requires resolution >= 32");
    if (p == 2.0 && !options.force_gradient)
        return linear_eigensolve(resolution);

    const Grid grid(resolution);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> positive(0.05, 1.0);

    RestartOutcome best;
    RestartOutcome last;
    bool any = false;
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<double> guess(resolution);
        for (double& v : guess)
            v = positive(rng);
        auto outcome = minimize_from(std::move(guess), p, grid, options);
        spdlog::debug("poincare p={} n={} restart {}: quotient^(1/p)={:.12g} after {} iterations{}", p, resolution, r,
                      std::pow(outcome.quotient, 1.0 / p), outcome.iterations,
                      outcome.converged ? "" : " (not converged)");
        if (outcome.converged && (!any || outcome.quotient < best.quotient)) {
            best = outcome;
            any = true;
        }
        last = std::move(outcome);
    }
    if (!any)
        throw ConvergenceError("poincare minimization did not converge in " + std::to_string(options.max_iterations)
                                   + " iterations",
                               std::pow(last.quotient, 1.0 / p), last.phi);

    PoincareResult result;
    result.lambda = std::pow(best.quotient, 1.0 / p);
    result.iterations = best.iterations;
    double peak = 0.0;
    for (double v : best.phi)
        peak = std::abs(v) > std::abs(peak) ? v : peak;
    result.minimizer = std::move(best.phi);
    for (double& v : result.minimizer)
        v /= peak;
    return result;
}

double poincare_constant(double p, std::size_t resolution)
{
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find({p, resolution}); it != cache.end())
            return it->second;
    }
    const double lambda = poincare_minimize(p, resolution).lambda;
    std::lock_guard lock(mutex);
    cache.emplace(std::pair{p, resolution}, lambda);
    return lambda;
}

} // namespace plap
