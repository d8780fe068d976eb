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
#include "plap/suite.hpp"

#include "plap/csv.hpp"
#include "plap/dynamics.hpp"
#include "plap/energy.hpp"
#include "plap/errors.hpp"
#include "plap/grid.hpp"
#include "plap/model.hpp"
#include "plap/odebound.hpp"
#include "plap/parallel.hpp"
#include "plap/random_fields.hpp"
#include "plap/spectral.hpp"
#include "plap/stationary.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace plap {

namespace {

namespace fs = std::filesystem;
using std::numbers::pi;

struct Artifact
{
    std::ofstream os;

    Artifact(const SuiteOptions& opt, const std::string& name, std::uint64_t seed)
        : os(csv::open_output(opt.out_dir / name))
    {
        csv::write_seed_comment(os, seed);
    }
};

GridFunction sine(const Grid& grid, int k, double a = 1.0)
{
    return GridFunction::sample(grid, [=](double x) { return a * std::sin(k * pi * x); });
}

std::uint64_t criterion_seed(const SuiteOptions& opt, int id)
{
    return opt.seed * 1000 + static_cast<std::uint64_t>(id);
}

// Every backward-Euler step must satisfy E+ - E + dt ||D v+||^2 <= 10 newton_tol.
CriterionResult energy_inequality(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 5.0);
    const double ps[] = {2.5, 3.0, 3.5};

    Artifact out(opt, "c01_energy_inequality.csv", seed);
    out.os << "config,p,g,steps,max_step_residual,violations\n";
    int violations = 0;
    double worst = -INFINITY;
    bool all_converged = true;
    for (int i = 0; i < 20; ++i) {
        ModelConfig cfg(ps[i % 3], Nonlinearity::cubic(), 64, 0.01, 2.0);
        const bool forced = i % 2 == 1;
        if (forced)
            cfg.forcing = sine(cfg.grid(), 1);
        const auto u0 = random_sine_series(rng, 4).scaled(amp(rng)).sample(cfg.grid());
        const auto v0 = random_sine_series(rng, 4).scaled(amp(rng)).sample(cfg.grid());
        const auto record = simulate(State(u0, v0), cfg, Scheme::BackwardEuler, {.record_stride = 1000, .check_growth = false});
        all_converged = all_converged && record.converged;
        const auto res = record.ledger.step_residuals();
        int local = 0;
        double local_max = -INFINITY;
        for (double r : res) {
            local_max = std::max(local_max, r);
            if (r > 10.0 * cfg.newton_tol)
                ++local;
        }
        violations += local;
        worst = std::max(worst, local_max);
        csv::write_row(out.os, {std::to_string(i), csv::num(cfg.p), forced ? "sin(pi*x)" : "0",
                                std::to_string(res.size()), csv::num(local_max), std::to_string(local)});
    }
    return {1, {}, violations == 0 && all_converged,
            fmt::format("{} violations over 20 runs, max step residual {:.3e}", violations, worst)};
}

// Midpoint balance residual |E(T) + D(T) - E(0)| shrinks >= 3.5x per dt halving.
CriterionResult energy_equality(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 2);
    Artifact out(opt, "c02_energy_equality.csv", seed);
    out.os << "dt,residual,ratio\n";
    double prev = 0.0;
    double min_ratio = INFINITY;
    bool ok = true;
    for (double dt : {0.02, 0.01, 0.005, 0.0025}) {
        ModelConfig cfg(3.0, Nonlinearity::cubic(), 64, dt, 1.0);
        cfg.newton_tol = 1e-13;
        const auto u0 = GridFunction::sample(cfg.grid(), [](double x) {
            return std::sin(pi * x) + 0.5 * std::sin(2 * pi * x);
        });
        const auto record = simulate(State(u0, GridFunction(cfg.grid())), cfg, Scheme::Midpoint,
                                     {.record_stride = 100000, .check_growth = false});
        ok = ok && record.converged;
        const double res = std::abs(record.ledger.inequality_residuals().back());
        const double ratio = prev > 0.0 ? prev / res : 0.0;
        if (prev > 0.0)
            min_ratio = std::min(min_ratio, ratio);
        prev = res;
        csv::write_row(out.os, {csv::num(dt), csv::num(res), csv::num(ratio)});
    }
    return {2, {}, ok && min_ratio >= 3.5, fmt::format("smallest halving ratio {:.3f}", min_ratio)};
}

// p = 2, f = 0, g = 0, u0 = sin(pi x): the discrete mode obeys c'' + lc' + lc = 0.
double modal_error(Scheme scheme, double dt)
{
    constexpr std::size_t n = 64;
    ModelConfig cfg(2.0, Nonlinearity::zero(), n, dt, 1.0);
    cfg.newton_tol = 1e-14;
    const Grid grid = cfg.grid();
    const double lam = dirichlet_eigenvalues(grid)[0];
    const double disc = std::sqrt(lam * lam - 4.0 * lam);
    const double rp = 0.5 * (-lam + disc);
    const double rm = 0.5 * (-lam - disc);
    const double c1 = (rp * std::exp(rm) - rm * std::exp(rp)) / (rp - rm);

    const auto record = simulate(State(sine(grid, 1), GridFunction(grid)), cfg, scheme,
                                 {.record_stride = 100000, .check_growth = false});
    const auto& u = record.final_state().u;
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        err = std::max(err, std::abs(u[i] - c1 * std::sin(pi * grid.x(i))));
    return err;
}

CriterionResult linear_oracle(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 3);
    Artifact out(opt, "c03_linear_oracle.csv", seed);
    out.os << "scheme,dt,error,order\n";
    bool ok = true;
    std::string detail;
    for (auto [scheme, expected] : {std::pair{Scheme::BackwardEuler, 1.0}, std::pair{Scheme::Midpoint, 2.0}}) {
        double prev = 0.0;
        double lo = INFINITY, hi = -INFINITY;
        for (double dt : {0.02, 0.01, 0.005, 0.0025}) {
            const double err = modal_error(scheme, dt);
            const double order = prev > 0.0 ? std::log2(prev / err) : 0.0;
            if (prev > 0.0) {
                lo = std::min(lo, order);
                hi = std::max(hi, order);
            }
            prev = err;
            csv::write_row(out.os, {std::string(to_string(scheme)), csv::num(dt), csv::num(err), csv::num(order)});
        }
        ok = ok && lo >= expected - 0.3 && hi <= expected + 0.3;
        detail += fmt::format("{}{} orders in [{:.3f}, {:.3f}]", detail.empty() ? "" : "; ", to_string(scheme), lo, hi);
    }
    return {3, {}, ok, detail};
}

CriterionResult poincare(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 4);
    Artifact out(opt, "c04_poincare.csv", seed);
    out.os << "p,resolution,lambda,reference,error\n";
    const double l2 = poincare_constant(2.0, 512);
    const double l4 = poincare_constant(4.0, 512);
    const double ref4 = std::pow(3.0, 0.25) * 2.0 * pi / (4.0 * std::sin(pi / 4.0));
    csv::write_row(out.os, {"2", "512", csv::num(l2), csv::num(pi), csv::num(l2 - pi)});
    csv::write_row(out.os, {"4", "512", csv::num(l4), csv::num(ref4), csv::num(l4 - ref4)});
    const bool ok = std::abs(l2 - pi) <= 1e-3 && std::abs(l4 - ref4) <= 1e-2;
    return {4, {}, ok, fmt::format("p=2 error {:.2e}, p=4 error {:.2e}", l2 - pi, l4 - ref4)};
}

CriterionResult monotonicity(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xy(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_gap = INFINITY;
    double worst_x = 0, worst_y = 0, worst_p = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double x = xy(rng), y = xy(rng), p = 6.0 - 4.0 * unit(rng);
        const double g = monotonicity_gap(x, y, p);
        if (g < min_gap) {
            min_gap = g;
            worst_x = x, worst_y = y, worst_p = p;
        }
    }
    double witness = 0.0;
    Artifact out(opt, "c05_monotonicity.csv", seed);
    out.os << "kind,x,y,p,gap\n";
    csv::write_row(out.os, {"min_sample", csv::num(worst_x), csv::num(worst_y), csv::num(worst_p), csv::num(min_gap)});
    for (double p : {2.5, 3.0, 4.0, 6.0}) {
        const double g = monotonicity_gap(1.0, -1.0, p);
        witness = std::max(witness, std::abs(g));
        csv::write_row(out.os, {"witness", "1", "-1", csv::num(p), csv::num(g)});
    }
    return {5, {}, min_gap >= -1e-12 && witness <= 1e-12,
            fmt::format("min gap {:.3e}, witness |gap| {:.3e}", min_gap, witness)};
}

CriterionResult convergence_to_stationary(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 6);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(1.0, 10.0);
    ModelConfig cfg(3.0, Nonlinearity::cubic(), 64, 0.01, 100.0);
    const Grid grid = cfg.grid();
    const auto set = enumerate_stationary(cfg, 8, seed);

    Artifact out(opt, "c06_convergence.csv", seed);
    out.os << "member,h1_initial,h1_distance_T,lyapunov_violations\n";
    int reached = 0, monotone = 0;
    double worst = 0.0;
    for (int m = 0; m < 16; ++m) {
        auto u0 = random_sine_series(rng, 4).sample(grid);
        const double target = amp(rng);
        u0 *= target / h1_norm(u0);
        const auto record = simulate(State(u0, GridFunction(grid)), cfg, Scheme::BackwardEuler,
                                     {.record_stride = 100000, .check_growth = false});
        const auto& e = record.ledger.energies();
        int bad = 0;
        for (std::size_t k = 1; k < e.size(); ++k)
            if (!(e[k] < e[k - 1]))
                ++bad;
        const double dist = h1_norm(record.final_state().u);
        worst = std::max(worst, dist);
        reached += record.converged && dist < 1e-3;
        monotone += bad == 0;
        csv::write_row(out.os, {std::to_string(m), csv::num(h1_norm(u0)), csv::num(dist), std::to_string(bad)});
    }
    return {6, {}, reached == 16 && monotone == 16 && set.solutions.size() == 1,
            fmt::format("{}/16 within 1e-3 of u=0 (worst {:.3e}), {}/16 strictly decreasing, |N| = {}", reached, worst,
                        monotone, set.solutions.size())};
}

std::vector<State> ensemble(const std::vector<SineSeries>& series, const Grid& grid, double scale)
{
    std::vector<State> out;
    for (const auto& s : series)
        out.emplace_back(s.scaled(scale).sample(grid), GridFunction(grid));
    return out;
}

CriterionResult attractor_regularity(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 7);
    std::mt19937_64 rng(seed);
    constexpr double t_long = 50.0;
    std::vector<SineSeries> series;
    for (int m = 0; m < 8; ++m)
        series.push_back(random_sine_series(rng, 4).scaled(2.0));

    ModelConfig base(3.0, Nonlinearity::cubic(), 128, 0.01, t_long);
    base.forcing = sine(base.grid(), 1, 10.0);

    std::vector<std::pair<std::size_t, OmegaLimitEstimate>> estimates;
    bool converged = true;
    for (std::size_t n : {128u, 256u, 512u}) {
        auto cfg = base.with_grid(n);
        cfg.forcing = sine(cfg.grid(), 1, 10.0);
        const auto set = enumerate_stationary(cfg, 4, seed);
        auto est = omega_limit(ensemble(series, cfg.grid(), 1.0), cfg, t_long, Scheme::BackwardEuler, set.solutions);
        for (bool c : est.member_converged)
            converged = converged && c;
        estimates.emplace_back(n, std::move(est));
    }
    const auto report = attractor_regularity_report(estimates, base.p);
    const auto set = enumerate_stationary(base, 4, seed);
    const auto scaled = omega_limit(ensemble(series, base.grid(), 10.0), base, t_long, Scheme::BackwardEuler, set.solutions);
    for (bool c : scaled.member_converged)
        converged = converged && c;

    {
        Artifact out(opt, "c07_regularity.csv", seed);
        write_regularity_csv(out.os, report);
    }
    const double a = estimates.front().second.sup_w1inf_u, b = scaled.sup_w1inf_u;
    const double amp_ratio = std::max(a, b) / std::min(a, b);
    double max_drift = 0.0;
    for (const auto& row : report.rows)
        max_drift = std::max(max_drift, std::abs(row.drift_u));
    {
        Artifact out(opt, "c07_amplitude.csv", seed);
        out.os << "scale,sup_w1inf_u,sup_w1inf_v\n";
        csv::write_row(out.os, {"1", csv::num(a), csv::num(estimates.front().second.sup_w1inf_v)});
        csv::write_row(out.os, {"10", csv::num(b), csv::num(scaled.sup_w1inf_v)});
    }
    return {7, {}, converged && max_drift < 0.1 && amp_ratio <= 2.0,
            fmt::format("max grid drift {:.3e}, amplitude ratio {:.4f}", max_drift, amp_ratio)};
}

CriterionResult continuous_dependence_check(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 8);
    std::mt19937_64 rng(seed);
    ModelConfig cfg(3.0, Nonlinearity::cubic(), 64, 0.01, 5.0);
    cfg.newton_tol = 1e-12;
    const Grid grid = cfg.grid();
    cfg.forcing = sine(grid, 1);
    const auto u0 = random_sine_series(rng, 4).scaled(2.0).sample(grid);
    const auto v0 = random_sine_series(rng, 4).sample(grid);
    const auto du = random_sine_series(rng, 4).scaled(1e-3).sample(grid);
    const auto dv = random_sine_series(rng, 4).scaled(1e-3).sample(grid);

    const double horizon = 5.0;
    const auto full = continuous_dependence(u0, v0, du, dv, cfg, horizon, Scheme::BackwardEuler, 50);
    const auto half = continuous_dependence(u0, v0, 0.5 * du, 0.5 * dv, cfg, horizon, Scheme::BackwardEuler, 50);
    const GridFunction zero(grid);
    const auto none = continuous_dependence(u0, v0, zero, zero, cfg, horizon, Scheme::BackwardEuler, 50);

    Artifact out(opt, "c08_continuous_dependence.csv", seed);
    out.os << "t,gap_full,gap_half,gap_zero\n";
    double zero_max = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) {
        zero_max = std::max(zero_max, none[k].gap);
        csv::write_row(out.os, {csv::num(full[k].t), csv::num(full[k].gap), csv::num(half[k].gap), csv::num(none[k].gap)});
    }
    const double ratio = half.back().gap / full.back().gap;
    const bool ok = std::abs(ratio / 0.5 - 1.0) <= 0.2 && zero_max <= 1e-14;
    return {8, {}, ok, fmt::format("T=5 gap ratio {:.4f}, zero-perturbation gap {:.1e}", ratio, zero_max)};
}

CriterionResult decay_estimate(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 9);
    const auto ts = log_spaced(1e-3, 10.0, 50);
    bool ok = true;
    double worst_drift = 0.0;
    for (auto [s, sigma] : {std::pair{0.0, 0.0}, std::pair{0.0, 0.5}, std::pair{-0.5, 0.5}}) {
        const auto coarse = check_decay_estimate(Grid(128), s, sigma, ts);
        const auto fine = check_decay_estimate(Grid(512), s, sigma, ts);
        const double drift = std::abs(fine.fitted_m - coarse.fitted_m) / coarse.fitted_m;
        worst_drift = std::max(worst_drift, drift);
        ok = ok && coarse.dominated && fine.dominated && drift < 0.1;
        for (const auto* r : {&coarse, &fine}) {
            Artifact out(opt, fmt::format("c09_decay_s{}_sigma{}_n{}.csv", s, sigma, r == &coarse ? 128 : 512), seed);
            write_decay_csv(out.os, *r);
        }
    }
    return {9, {}, ok, fmt::format("worst fitted-M drift {:.3e}", worst_drift)};
}

CriterionResult embedding(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 10);
    constexpr double eps = 0.25;
    Artifact out(opt, "c10_embedding.csv", seed);
    out.os << "n,constant\n";
    double first = 0.0, last = 0.0;
    for (std::size_t n : {128u, 256u, 512u, 1024u}) {
        const Grid grid(n);
        const auto report = embedding_bound_check(mode_spike_family(grid), eps);
        if (first == 0.0)
            first = report.constant;
        last = report.constant;
        csv::write_row(out.os, {std::to_string(n), csv::num(report.constant)});
    }
    const double growth = last / first;
    return {10, {}, growth < 2.0, fmt::format("constant growth 128->1024: {:.4f}", growth)};
}

CriterionResult ode_campaign(const SuiteOptions& opt)
{
    const auto seed = criterion_seed(opt, 11);
    const auto rows = run_campaign({.cases = 10000, .dt_ode = 1e-4, .seed = seed, .threads = opt.threads});
    const auto violations = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.report.pass; });
    {
        Artifact out(opt, "c11_campaign.csv", seed);
        write_campaign_csv(out.os, rows);
    }

    // u' = -u^3 from u0 = 1000 has u(t) = u0 / sqrt(1 + 2 u0^2 t).
    OdeBoundCase c{.p = 4.0, .f_bound = 0.0, .theta = constant_control(1e-6, 0.0), .u0 = 1000.0, .dt_ode = 1e-6};
    const auto traj = integrate_case(c);
    const std::size_t mid = traj.t.size() / 2;
    const double exact = c.u0 / std::sqrt(1.0 + 2.0 * c.u0 * c.u0 * traj.t[mid]);
    const double err = std::abs(traj.u[mid] - exact);
    const auto closed = verify_lemma(c, traj);
    {
        Artifact out(opt, "c11_closed_form.csv", seed);
        out.os << "t,u,exact,error\n";
        csv::write_row(out.os, {csv::num(traj.t[mid]), csv::num(traj.u[mid]), csv::num(exact), csv::num(err)});
    }
    return {11, {}, violations == 0 && err <= 1e-4 && closed.pass,
            fmt::format("{} violations in {} cases, closed-form error {:.2e} at t=0.5", violations, rows.size(), err)};
}

std::map<std::string, std::string> read_csvs(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    if (!fs::exists(dir))
        return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv" || entry.path().filename() == "summary.csv")
            continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        out.emplace(entry.path().filename().string(), buf.str());
    }
    return out;
}

} // namespace

std::string criterion_name(int id)
{
    static const char* names[] = {
        "energy inequality",       "energy equality",       "linear oracle",     "poincare constant",
        "monotonicity",            "convergence to N",      "attractor regularity", "continuous dependence",
        "decay estimate",          "embedding constant",    "ODE bound campaign",   "determinism",
    };
    if (id < 1 || id > kCriterionCount)
        throw std::out_of_range("criterion id " + std::to_string(id));
    return names[id - 1];
}

CriterionResult run_criterion(int id, const SuiteOptions& options)
{
    using Fn = CriterionResult (*)(const SuiteOptions&);
    static const Fn table[] = {energy_inequality, energy_equality,        linear_oracle,  poincare,
                               monotonicity,      convergence_to_stationary, attractor_regularity,
                               continuous_dependence_check, decay_estimate, embedding,   ode_campaign};
    if (id < 1 || id > 11)
        throw std::out_of_range("run_criterion handles criteria 1..11, got " + std::to_string(id));
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = table[id - 1](options);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = criterion_name(id);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spdlog::info("criterion {} ({}): {} in {:.1f}s, {}", id, r.name, r.pass ? "pass" : "FAIL", r.seconds, r.detail);
    return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options)
{
    std::vector<int> ids = options.only;
    if (ids.empty())
        for (int id = 1; id <= kCriterionCount; ++id)
            ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<int> base;
    std::copy_if(ids.begin(), ids.end(), std::back_inserter(base), [](int id) { return id != kCriterionCount; });

    std::vector<CriterionResult> results(base.size());
    parallel_for(base.size(), options.threads, [&](std::size_t k) { results[k] = run_criterion(base[k], options); });

    if (std::find(ids.begin(), ids.end(), kCriterionCount) != ids.end()) {
        const auto start = std::chrono::steady_clock::now();
        SuiteOptions again = options;
        again.out_dir = options.out_dir / "determinism_rerun";
        fs::remove_all(again.out_dir);
        parallel_for(base.size(), options.threads, [&](std::size_t k) { (void)run_criterion(base[k], again); });
        const auto first = read_csvs(options.out_dir);
        const auto second = read_csvs(again.out_dir);
        std::vector<std::string> differing;
        for (const auto& [name, body] : first) {
            const auto it = second.find(name);
            if (it == second.end() || it->second != body)
                differing.push_back(name);
        }
        for (const auto& [name, body] : second)
            if (!first.count(name))
                differing.push_back(name);
        fs::remove_all(again.out_dir);

        CriterionResult r;
        r.id = kCriterionCount;
        r.name = criterion_name(kCriterionCount);
        r.pass = differing.empty() && !first.empty();
        r.detail = differing.empty() ? fmt::format("{} CSV files byte-identical across two runs", first.size())
                                     : fmt::format("{} files differ, first {}", differing.size(), differing.front());
        if (first.empty())
            r.detail = "no CSV artifacts to compare";
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(r);
    }

    auto os = csv::open_output(options.out_dir / "summary.csv");
    csv::write_seed_comment(os, options.seed);
    write_summary_csv(os, results);
    return results;
}

void write_summary_csv(std::ostream& os, const std::vector<CriterionResult>& results)
{
    os << "id,name,pass,detail\n";
    for (const auto& r : results) {
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        csv::write_row(os, {std::to_string(r.id), r.name, r.pass ? "1" : "0", detail});
    }
}

} // namespace plap
