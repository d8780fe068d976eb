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
#include "plap/config.hpp"
#include "plap/csv.hpp"
#include "plap/dynamics.hpp"
#include "plap/errors.hpp"
#include "plap/model.hpp"
#include "plap/odebound.hpp"
#include "plap/random_fields.hpp"
#include "plap/spectral.hpp"
#include "plap/stationary.hpp"
#include "plap/suite.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common
{
    std::string config_path;
    fs::path out = "out";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string scheme = "be";
    bool override_growth = false;
};

struct Run
{
    std::string command;
    std::optional<plap::RunConfig> config;
};

void configure_logging()
{
    auto logger = spdlog::stderr_color_mt("plap");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("PLAP_LOG"))
        spdlog::set_level(spdlog::level::from_str(env));
}

plap::RunConfig load_config(const Common& c)
{
    if (c.config_path.empty())
        throw plap::ConfigError("--config is required for this command");
    auto rc = plap::parse_config(c.config_path, c.override_growth);
    if (rc.model.p > 2.0) {
        const auto growth = plap::check_growth_condition(rc.model.nonlinearity, rc.model.p);
        if (!growth.satisfied) {
            const std::string msg = "nonlinearity violates the growth condition (liminf f(s)/|s|^{p-2}s = "
                                    + plap::csv::num(growth.asymptotic_coefficient) + ", -lambda^p = "
                                    + plap::csv::num(-std::pow(growth.lambda, rc.model.p)) + ")";
            if (!c.override_growth)
                throw plap::ConfigError(msg + "; pass --override-growth-check to run anyway");
            spdlog::warn("{}", msg);
        }
    }
    return rc;
}

plap::GridFunction sample_or_zero(const std::optional<plap::Expression>& e, const plap::Grid& grid)
{
    return e ? e->sample(grid) : plap::GridFunction(grid);
}

/// Forcing on another grid: exact for expressions, interpolated for samples.
plap::ModelConfig on_grid(const plap::RunConfig& rc, std::size_t n)
{
    auto cfg = rc.model.with_grid(n);
    if (rc.g_expression)
        cfg.forcing = rc.g_expression->sample(cfg.grid());
    return cfg;
}

std::ofstream artifact(const Common& c, const std::string& name)
{
    auto os = plap::csv::open_output(c.out / name);
    plap::csv::write_seed_comment(os, c.seed);
    return os;
}

void write_diagnostic(const Common& c, const std::string& what)
{
    auto os = plap::csv::open_output(c.out / "diagnostic.txt");
    os << what << "\n";
}

int cmd_simulate(const Common& c, Run& run)
{
    run.config = load_config(c);
    const auto& rc = *run.config;
    const auto grid = rc.model.grid();
    const auto scheme = plap::parse_scheme(c.scheme);
    const plap::State initial(sample_or_zero(rc.u0_expression, grid), sample_or_zero(rc.v0_expression, grid));
    const auto record = plap::simulate(initial, rc.model, scheme, {.record_stride = rc.record_stride, .check_growth = false});
    {
        auto os = artifact(c, "trajectory.csv");
        plap::write_trajectory_csv(os, record);
    }
    {
        auto os = artifact(c, "energy.csv");
        record.ledger.write_csv(os);
    }
    {
        auto os = plap::csv::open_output(c.out / "run_metadata.txt");
        plap::write_run_metadata(os, rc.model, scheme, record, c.seed);
    }
    if (!record.converged) {
        write_diagnostic(c, record.diagnostic);
        spdlog::error("{}", record.diagnostic);
        return kExitNumerical;
    }
    std::printf("simulated %zu steps to t=%.6g, final energy %.12g\n", record.ledger.size() - 1,
                record.final_state().t, record.ledger.energies().back());
    return kExitOk;
}

int cmd_stationary(const Common& c, Run& run, int starts, double amplitude)
{
    run.config = load_config(c);
    plap::EnumerationOptions options;
    options.amplitude = amplitude;
    const auto set = plap::enumerate_stationary(run.config->model, starts, c.seed, options);
    {
        auto os = artifact(c, "stationary.csv");
        plap::write_stationary_csv(os, set.solutions);
    }
    {
        auto os = artifact(c, "stationary_summary.csv");
        plap::write_stationary_summary_csv(os, set.solutions);
    }
    std::printf("%zu distinct stationary solutions from %d starts (%d failed)\n", set.solutions.size(), starts,
                set.failed_starts);
    if (set.solutions.empty()) {
        write_diagnostic(c, "every stationary Newton start failed");
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_omega_limit(const Common& c, Run& run, int members, double amplitude, int starts, std::vector<std::size_t> grids)
{
    run.config = load_config(c);
    const auto& rc = *run.config;
    const auto scheme = plap::parse_scheme(c.scheme);
    std::mt19937_64 rng(c.seed);
    std::vector<plap::SineSeries> series;
    for (int m = 0; m < members; ++m)
        series.push_back(plap::random_sine_series(rng, 4).scaled(amplitude));
    if (grids.empty())
        grids.push_back(rc.model.grid_n);

    std::vector<std::pair<std::size_t, plap::OmegaLimitEstimate>> estimates;
    auto members_os = artifact(c, "omega_limit.csv");
    members_os << "n,member,distance_to_N,settled,converged\n";
    for (std::size_t n : grids) {
        const auto cfg = on_grid(rc, n);
        const auto set = plap::enumerate_stationary(cfg, starts, c.seed);
        std::vector<plap::State> ensemble;
        for (const auto& s : series)
            ensemble.emplace_back(s.sample(cfg.grid()), plap::GridFunction(cfg.grid()));
        auto est = plap::omega_limit(ensemble, cfg, cfg.t_end, scheme, set.solutions,
                                     {.record_stride = std::max<std::size_t>(rc.record_stride, 1)});
        for (std::size_t m = 0; m < est.limit_states.size(); ++m) {
            plap::csv::write_row(members_os, {std::to_string(n), std::to_string(m), plap::csv::num(est.distances_to_N[m]),
                                              est.settled[m] ? "1" : "0", est.member_converged[m] ? "1" : "0"});
            if (!est.member_converged[m])
                spdlog::warn("member {} on n={} stopped early: {}", m, n, est.diagnostics[m]);
        }
        estimates.emplace_back(n, std::move(est));
    }
    const auto report = plap::attractor_regularity_report(estimates, rc.model.p);
    {
        auto os = artifact(c, "regularity.csv");
        plap::write_regularity_csv(os, report);
    }
    for (const auto& row : report.rows)
        std::printf("n=%zu sup_w1inf_u=%.6g sup_w1inf_v=%.6g%s\n", row.n, row.sup_w1inf_u, row.sup_w1inf_v,
                    row.flagged ? " (flagged)" : "");
    if (!report.annotation.empty())
        std::printf("note: %s\n", report.annotation.c_str());
    for (const auto& [n, est] : estimates)
        if (std::find(est.member_converged.begin(), est.member_converged.end(), false) != est.member_converged.end()) {
            write_diagnostic(c, "ensemble member failed to integrate on n=" + std::to_string(n));
            return kExitNumerical;
        }
    return kExitOk;
}

int cmd_poincare(const Common& c, double p, std::size_t resolution)
{
    if (!(p > 1.0))
        throw plap::ConfigError("--p must be > 1");
    const auto result = plap::poincare_minimize(p, resolution);
    auto os = artifact(c, "poincare.csv");
    os << "x,phi\n";
    const plap::Grid grid(resolution);
    for (std::size_t i = 0; i < result.minimizer.size(); ++i)
        plap::csv::write_row(os, {plap::csv::num(grid.x(i)), plap::csv::num(result.minimizer[i])});
    std::printf("%.12g\n", result.lambda);
    return kExitOk;
}

int cmd_verify_decay(const Common& c, double s, double sigma, std::size_t n, int points, double t_min, double t_max)
{
    if (!(sigma >= s))
        throw plap::ConfigError("--sigma must be >= --s");
    if (!(t_min > 0.0 && t_max > t_min) || points < 2)
        throw plap::ConfigError("need 0 < t-min < t-max and at least 2 points");
    const auto report = plap::check_decay_estimate(plap::Grid(n), s, sigma, plap::log_spaced(t_min, t_max, points));
    auto os = artifact(c, "decay.csv");
    plap::write_decay_csv(os, report);
    std::printf("M=%.6g omega=%.6g dominated=%s\n", report.fitted_m, report.omega, report.dominated ? "yes" : "no");
    return report.dominated ? kExitOk : kExitCheckFailed;
}

int cmd_verify_embedding(const Common& c, double eps, const std::vector<std::size_t>& grids)
{
    auto os = artifact(c, "embedding.csv");
    os << "n,constant\n";
    double first = 0.0, last = 0.0;
    for (std::size_t n : grids) {
        const plap::Grid grid(n);
        const auto report = plap::embedding_bound_check(plap::mode_spike_family(grid), eps);
        plap::csv::write_row(os, {std::to_string(n), plap::csv::num(report.constant)});
        std::printf("n=%zu constant=%.6g\n", n, report.constant);
        if (first == 0.0)
            first = report.constant;
        last = report.constant;
    }
    return last < 2.0 * first ? kExitOk : kExitCheckFailed;
}

int cmd_verify_lemma(const Common& c, int cases, double dt_ode)
{
    const auto rows = plap::run_campaign({.cases = cases, .dt_ode = dt_ode, .seed = c.seed, .threads = c.threads});
    auto os = artifact(c, "campaign.csv");
    plap::write_campaign_csv(os, rows);
    const auto violations = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.report.pass; });
    std::printf("%td violations in %zu cases\n", violations, rows.size());
    return violations == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_suite(const Common& c)
{
    const auto results = plap::run_suite({.out_dir = c.out, .seed = c.seed, .threads = c.threads, .only = {}});
    std::printf("%-3s %-24s %-5s %8s  %s\n", "id", "criterion", "pass", "seconds", "detail");
    bool all = true;
    for (const auto& r : results) {
        std::printf("%-3d %-24s %-5s %8.1f  %s\n", r.id, r.name.c_str(), r.pass ? "yes" : "NO", r.seconds, r.detail.c_str());
        all = all && r.pass;
    }
    return all ? kExitOk : kExitCheckFailed;
}

void write_manifest(const Common& c, const Run& run, int status, double seconds)
{
    std::error_code ec;
    fs::create_directories(c.out, ec);
    std::ofstream os(c.out / "run_manifest.txt");
    if (!os)
        return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "command = " << run.command << "\n"
       << "version = " << PLAP_VERSION << "\n"
       << "seed = " << c.seed << "\n"
       << "threads = " << c.threads << "\n"
       << "scheme = " << c.scheme << "\n"
       << "finished_utc = " << stamp << "\n"
       << "wall_time_seconds = " << plap::csv::num(seconds) << "\n"
       << "exit_status = " << status << "\n";
    if (!c.config_path.empty())
        os << "config_path = " << c.config_path << "\n";
    if (run.config)
        for (const auto& [key, value] : run.config->echo())
            os << "config." << key << " = " << value << "\n";
}

std::vector<std::size_t> parse_grids(const std::string& text)
{
    std::vector<std::size_t> out;
    for (const auto& piece : plap::csv::split(text)) {
        try {
            std::size_t used = 0;
            const long long n = std::stoll(piece, &used);
            if (used != piece.size() || n < 2)
                throw std::invalid_argument(piece);
            out.push_back(static_cast<std::size_t>(n));
        } catch (const std::exception&) {
            throw plap::ConfigError("bad grid size '" + piece + "' in --grids");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    configure_logging();

    CLI::App app{"Strongly damped p-Laplacian wave equation: simulation and verification tools"};
    app.set_version_flag("--version", PLAP_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Common c;
    std::string out = "out";
    app.add_option("--config", c.config_path, "Configuration file (key = value)");
    app.add_option("--out", out, "Output directory")->capture_default_str();
    app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    app.add_option("--scheme", c.scheme, "Time stepper")->check(CLI::IsMember({"be", "mp"}))->capture_default_str();
    app.add_flag("--override-growth-check", c.override_growth, "Run even when p <= 2 or f violates the growth condition");

    int starts = 16, members = 8, cases = 10000, points = 50;
    double amplitude = 1.0, p = 2.0, s = 0.0, sigma = 0.5, t_min = 1e-3, t_max = 10.0, eps = 0.25, dt_ode = 1e-4;
    std::size_t resolution = 256, n = 128;
    std::string grids_text, embed_grids_text = "128,256,512,1024";

    auto* sim = app.add_subcommand("simulate", "Integrate one trajectory");
    auto* sta = app.add_subcommand("stationary", "Enumerate stationary solutions by multistart Newton");
    sta->add_option("--starts", starts, "Number of random starts")->capture_default_str();
    sta->add_option("--amplitude", amplitude, "Amplitude of the random starts")->capture_default_str();
    auto* omg = app.add_subcommand("omega-limit", "Long-time ensemble and W^{1,inf} report");
    omg->add_option("--members", members, "Ensemble size")->capture_default_str();
    omg->add_option("--amplitude", amplitude, "Amplitude of the initial states")->capture_default_str();
    omg->add_option("--starts", starts, "Stationary multistart count")->capture_default_str();
    omg->add_option("--grids", grids_text, "Comma-separated grid sizes (default: grid_n)");
    auto* poi = app.add_subcommand("poincare", "Print the discrete Poincare constant");
    poi->add_option("--p", p, "Exponent p")->required();
    poi->add_option("--resolution", resolution, "Interior nodes")->check(CLI::Range(32, 1 << 16))->capture_default_str();
    auto* dec = app.add_subcommand("verify-decay", "Check the heat semigroup decay bound");
    dec->add_option("--s", s)->capture_default_str();
    dec->add_option("--sigma", sigma)->capture_default_str();
    dec->add_option("--n", n, "Interior nodes")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    dec->add_option("--points", points)->capture_default_str();
    dec->add_option("--t-min", t_min)->capture_default_str();
    dec->add_option("--t-max", t_max)->capture_default_str();
    auto* emb = app.add_subcommand("verify-embedding", "Embedding constant under refinement");
    emb->add_option("--eps", eps)->capture_default_str();
    emb->add_option("--grids", embed_grids_text)->capture_default_str();
    auto* lem = app.add_subcommand("verify-lemma-a2", "Randomized campaign for the scalar ODE sup bounds");
    lem->add_option("--cases", cases)->check(CLI::Range(1, 100000000))->capture_default_str();
    lem->add_option("--dt-ode", dt_ode)->check(CLI::Range(1e-8, 0.1))->capture_default_str();
    auto* sui = app.add_subcommand("suite", "Run the full acceptance battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    c.out = out;

    Run run;
    run.command = app.get_subcommands().front()->get_name();
    const auto start = std::chrono::steady_clock::now();
    int status = kExitOk;
    try {
        if (sim->parsed())
            status = cmd_simulate(c, run);
        else if (sta->parsed())
            status = cmd_stationary(c, run, starts, amplitude);
        else if (omg->parsed())
            status = cmd_omega_limit(c, run, members, amplitude, starts, parse_grids(grids_text));
        else if (poi->parsed())
            status = cmd_poincare(c, p, resolution);
        else if (dec->parsed())
            status = cmd_verify_decay(c, s, sigma, n, points, t_min, t_max);
        else if (emb->parsed())
            status = cmd_verify_embedding(c, eps, parse_grids(embed_grids_text));
        else if (lem->parsed())
            status = cmd_verify_lemma(c, cases, dt_ode);
        else if (sui->parsed())
            status = cmd_suite(c);
    } catch (const plap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        status = kExitConfig;
    } catch (const plap::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        try {
            write_diagnostic(c, e.what());
        } catch (const std::exception&) {
        }
        status = kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitNumerical;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(c, run, status, seconds);
    return status;
}
