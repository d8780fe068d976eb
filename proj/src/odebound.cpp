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
#include "plap/odebound.hpp"

#include "plap/csv.hpp"
#include "plap/errors.hpp"
#include "plap/grid.hpp"
#include "plap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace plap {

std::size_t ode_steps(double dt_ode)
{
    return static_cast<std::size_t>(std::llround(1.0 / dt_ode));
}

std::vector<double> constant_control(double dt_ode, double value)
{
    return std::vector<double>(ode_steps(dt_ode), value);
}

void OdeBoundCase::validate() const
{
    if (!(p > 2.0))
        throw ConfigError("ODE bound case requires p > 2");
    if (!(f_bound >= 0.0))
        throw ConfigError("ODE bound case requires f_bound >= 0");
    if (!(dt_ode > 0.0 && dt_ode <= 0.1))
        throw ConfigError("ODE bound case requires 0 < dt_ode <= 0.1");
    if (theta.size() != ode_steps(dt_ode))
        throw ConfigError("control has " + std::to_string(theta.size()) + " samples, expected "
                          + std::to_string(ode_steps(dt_ode)));
    for (double th : theta)
        if (!(std::abs(th) <= 1.0))
            throw ConfigError("control values must satisfy |theta| <= 1");
}

double s0(double p, double f_bound)
{
    if (!(p > 2.0))
        throw ConfigError("s0 requires p > 2");
    if (!(f_bound >= 0.0))
        throw ConfigError("s0 requires f_bound >= 0");
    const double r = p / (p - 2.0);
    return 1.0 - (std::pow(r, 1.0 / (p - 2.0)) - 1.0) / (std::pow(r, (p - 1.0) / (p - 2.0)) + f_bound);
}

OdeBounds bound_values(double p, double f_bound)
{
    if (!(p > 2.0))
        throw ConfigError("bound_values requires p > 2");
    const double base = p / (p - 2.0) + f_bound;
    return {std::pow(base, 1.0 / (p - 2.0)), std::pow(base, (p - 1.0) / (p - 2.0)) + f_bound};
}

namespace {

/// Root of y + dt |y|^{p-2} y = r.
double implicit_solve(double r, double dt, double p)
{
    if (r == 0.0)
        return 0.0;
    const double target = std::abs(r);
    // both are upper bounds of the root; Newton on this convex increasing
    // function then decreases monotonically onto it
    const double hi = std::min(target, std::pow(target / dt, 1.0 / (p - 1.0)));
    double m = hi;
    bool newton_ok = false;
    for (int it = 0; it < 100; ++it) {
        const double mp2 = std::pow(m, p - 2.0);
        const double gm = m + dt * mp2 * m - target;
        // iterates stay above the root, so gm <= 0 only happens within rounding of it
        if (gm <= 0.0) {
            newton_ok = true;
            break;
        }
        const double next = m - gm / (1.0 + dt * (p - 1.0) * mp2);
        if (!(next >= 0.0))
            break;
        const bool done = m - next <= 1e-14 * m;
        m = next;
        if (done) {
            newton_ok = true;
            break;
        }
    }
    if (!newton_ok) {
        double lo = 0.0, up = hi;
        for (int it = 0; it < 200 && up - lo > 1e-16 * up; ++it) {
            const double mid = 0.5 * (lo + up);
            (mid + dt * std::pow(mid, p - 1.0) > target ? up : lo) = mid;
        }
        m = 0.5 * (lo + up);
    }
    return std::copysign(m, r);
}

} // namespace

OdeTrajectory integrate_case(const OdeBoundCase& c)
{
    c.validate();
    const std::size_t steps = c.theta.size();
    OdeTrajectory traj;
    traj.t.reserve(steps + 1);
    traj.u.reserve(steps + 1);
    traj.du.reserve(steps + 1);

    double u = c.u0;
    traj.t.push_back(0.0);
    traj.u.push_back(u);
    traj.du.push_back(-signed_power(u, c.p) + (steps ? c.theta[0] : 0.0) * c.f_bound);
    for (std::size_t k = 0; k < steps; ++k) {
        const double forcing = c.theta[k] * c.f_bound;
        u = implicit_solve(u + c.dt_ode * forcing, c.dt_ode, c.p);
        traj.t.push_back(static_cast<double>(k + 1) * c.dt_ode);
        traj.u.push_back(u);
        traj.du.push_back(-signed_power(u, c.p) + forcing);
    }
    return traj;
}

LemmaReport verify_lemma(const OdeBoundCase& c, const OdeTrajectory& traj)
{
    LemmaReport r;
    r.s0 = s0(c.p, c.f_bound);
    const auto b = bound_values(c.p, c.f_bound);
    r.a6 = b.a6;
    r.a7 = b.a7;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        if (traj.t[k] < r.s0)
            continue;
        r.max_u = std::max(r.max_u, std::abs(traj.u[k]));
        r.max_du = std::max(r.max_du, std::abs(traj.du[k]));
    }
    r.pass = r.max_u <= r.a6 * (1.0 + kOdeSlack) && r.max_du <= r.a7 * (1.0 + kOdeSlack);
    return r;
}

LemmaReport verify_lemma(const OdeBoundCase& c)
{
    return verify_lemma(c, integrate_case(c));
}

OdeBoundCase random_case(std::uint64_t seed, double dt_ode)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    OdeBoundCase c;
    c.dt_ode = dt_ode;
    c.p = 6.0 - 4.0 * unit(rng);
    c.f_bound = 10.0 * unit(rng);
    const double magnitude = std::pow(10.0, -3.0 + 9.0 * unit(rng));
    c.u0 = unit(rng) < 0.5 ? -magnitude : magnitude;

    const std::size_t steps = ode_steps(dt_ode);
    c.theta.resize(steps);
    switch (rng() % 4) {
    case 0: // sign flip every step
        for (std::size_t k = 0; k < steps; ++k)
            c.theta[k] = (k % 2 == 0) ? 1.0 : -1.0;
        break;
    case 1: { // bang-bang with random switching times
        double th = unit(rng) < 0.5 ? -1.0 : 1.0;
        for (auto& v : c.theta) {
            if (unit(rng) < 0.01)
                th = -th;
            v = th;
        }
        break;
    }
    case 2:
        for (auto& v : c.theta)
            v = 2.0 * unit(rng) - 1.0;
        break;
    default: // push away from zero along the initial sign
        std::fill(c.theta.begin(), c.theta.end(), c.u0 < 0 ? -1.0 : 1.0);
        break;
    }
    return c;
}

std::vector<CampaignRow> run_campaign(const CampaignOptions& options)
{
    std::vector<CampaignRow> rows(static_cast<std::size_t>(std::max(0, options.cases)));
    parallel_for(rows.size(), options.threads, [&](std::size_t k) {
        const std::uint64_t seed = options.seed + k;
        const auto c = random_case(seed, options.dt_ode);
        rows[k] = {c.p, c.f_bound, c.u0, seed, verify_lemma(c)};
    });
    return rows;
}

void write_campaign_csv(std::ostream& os, const std::vector<CampaignRow>& rows)
{
    os << "p,f_bound,u0,seed,max_u,A6,max_du,A7,pass\n";
    for (const auto& r : rows)
        csv::write_row(os, {csv::num(r.p), csv::num(r.f_bound), csv::num(r.u0), std::to_string(r.seed),
                            csv::num(r.report.max_u), csv::num(r.report.a6), csv::num(r.report.max_du),
                            csv::num(r.report.a7), r.report.pass ? "1" : "0"});
}

} // namespace plap
