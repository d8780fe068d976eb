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

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace plap {

/// Scalar problem u' = -|u|^{p-2}u + theta(t) f_bound on [0, 1] with |theta| <= 1.
/// Every such u satisfies |u' + |u|^{p-2}u| <= f_bound; varying theta samples
/// the family of functions obeying that differential inequality.
struct OdeBoundCase
{
    double p = 3.0;
    double f_bound = 0.0;
    /// theta[k] acts on the step (k dt, (k+1) dt]; size = number of steps.
    std::vector<double> theta;
    double u0 = 0.0;
    double dt_ode = 1e-4;

    /// Throws ConfigError when p <= 2, f_bound < 0, |theta| > 1, or theta
    /// does not cover [0, 1] with steps of dt_ode.
    void validate() const;
};

[[nodiscard]] std::size_t ode_steps(double dt_ode);
[[nodiscard]] std::vector<double> constant_control(double dt_ode, double value);

/// Start of the window on which the sup bounds hold:
/// 1 - (r^{1/(p-2)} - 1) / (r^{(p-1)/(p-2)} + f_bound), r = p/(p-2).
[[nodiscard]] double s0(double p, double f_bound);

struct OdeBounds
{
    /// sup bound on |u| over [s0, 1]: (p/(p-2) + f)^{1/(p-2)}
    double a6 = 0.0;
    /// sup bound on |u'| over [s0, 1]: (p/(p-2) + f)^{(p-1)/(p-2)} + f
    double a7 = 0.0;
};

[[nodiscard]] OdeBounds bound_values(double p, double f_bound);

struct OdeTrajectory
{
    std::vector<double> t;
    std::vector<double> u;
    /// u' from the right-hand side at each sample.
    std::vector<double> du;
};

/// Backward Euler; each step solves y + dt |y|^{p-2} y = r, which has a
/// unique root by strict monotonicity (safeguarded Newton, bisection fallback).
[[nodiscard]] OdeTrajectory integrate_case(const OdeBoundCase& c);

struct LemmaReport
{
    double s0 = 0.0;
    double max_u = 0.0;
    double max_du = 0.0;
    double a6 = 0.0;
    double a7 = 0.0;
    bool pass = false;
};

/// Relative slack granted to the integrator on both bounds.
inline constexpr double kOdeSlack = 0.01;

[[nodiscard]] LemmaReport verify_lemma(const OdeBoundCase& c, const OdeTrajectory& traj);
[[nodiscard]] LemmaReport verify_lemma(const OdeBoundCase& c);

/// Randomized case: p in (2, 6], f_bound in [0, 10], |u0| <= 1e6 (log-uniform
/// magnitude, random sign), and an adversarial control drawn from sign
/// flipping every step, random bang-bang switching, i.i.d. uniform values,
/// or a constant push away from zero.
[[nodiscard]] OdeBoundCase random_case(std::uint64_t seed, double dt_ode);

struct CampaignRow
{
    double p = 0.0;
    double f_bound = 0.0;
    double u0 = 0.0;
    std::uint64_t seed = 0;
    LemmaReport report;
};

struct CampaignOptions
{
    int cases = 10000;
    double dt_ode = 1e-4;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Case k uses seed options.seed + k. Rows are returned in case order.
[[nodiscard]] std::vector<CampaignRow> run_campaign(const CampaignOptions& options);

/// p,f_bound,u0,seed,max_u,A6,max_du,A7,pass
void write_campaign_csv(std::ostream& os, const std::vector<CampaignRow>& rows);

} // namespace plap
