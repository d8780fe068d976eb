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
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result
{
    int status = -1;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string cmd = std::string(PLAP_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe))
        r.out += buf;
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test
{
  protected:
    fs::path dir;

    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("plap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path write(const std::string& name, const std::string& text)
    {
        std::ofstream(dir / name) << text;
        return dir / name;
    }
};

} // namespace

TEST_F(Cli, SimulateZeroData)
{
    const auto cfg = write("zero.cfg", "p = 3\ngrid_n = 8\ndt = 0.1\nt_end = 0.5\n");
    const auto out = dir / "out";
    const auto r = run("simulate --config " + cfg.string() + " --out " + out.string() + " --seed 9");
    ASSERT_EQ(r.status, 0);

    std::istringstream traj(slurp(out / "trajectory.csv"));
    std::string line;
    std::getline(traj, line);
    EXPECT_EQ(line, "# seed=9");
    std::getline(traj, line);
    EXPECT_EQ(line, "t,x,u,v");
    int rows = 0;
    while (std::getline(traj, line)) {
        ++rows;
        EXPECT_EQ(line.substr(line.size() - 4), ",0,0");
    }
    EXPECT_EQ(rows, 6 * 8);

    std::istringstream energy(slurp(out / "energy.csv"));
    std::getline(energy, line);
    std::getline(energy, line);
    EXPECT_EQ(line, "t,E,D_cumulative,residual");
    while (std::getline(energy, line))
        EXPECT_EQ(line.substr(line.rfind(',')), ",0");

    const auto manifest = slurp(out / "run_manifest.txt");
    for (const char* key : {"command = simulate", "seed = 9", "version = ", "wall_time_seconds = ", "config.grid_n = 8",
                            "config.newton_tol = 1e-10", "config.poly_coeffs = 0, 0, 0, 1"})
        EXPECT_NE(manifest.find(key), std::string::npos) << key;
}

TEST_F(Cli, ConfigErrorsExitTwo)
{
    const auto typo = write("typo.cfg", "p = 3\ngrdi_n = 32\n");
    EXPECT_EQ(run("simulate --config " + typo.string() + " --out " + (dir / "a").string()).status, 2);
    const auto low_p = write("p2.cfg", "p = 2\n");
    EXPECT_EQ(run("simulate --config " + low_p.string() + " --out " + (dir / "b").string()).status, 2);
    EXPECT_EQ(run("simulate --config " + (dir / "missing.cfg").string() + " --out " + (dir / "c").string()).status, 2);
    EXPECT_EQ(run("simulate --scheme rk4").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
}

TEST_F(Cli, GrowthCheckCanBeOverridden)
{
    const auto cfg = write("neg.cfg", "p = 3\npoly_coeffs = 0\npower_terms = -40:3\ngrid_n = 8\ndt = 0.1\nt_end = 0.2\n");
    EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + (dir / "a").string()).status, 2);
    EXPECT_EQ(run("simulate --override-growth-check --config " + cfg.string() + " --out " + (dir / "b").string()).status, 0);
}

TEST_F(Cli, NumericalFailureExitsThreeWithDiagnostic)
{
    const auto cfg = write("stiff.cfg", "p = 3\ngrid_n = 16\ndt = 0.5\nt_end = 1\nnewton_max_iter = 1\n"
                                        "u0_expression = 50*sin(pi*x)\n");
    const auto out = dir / "out";
    EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + out.string()).status, 3);
    EXPECT_TRUE(fs::exists(out / "diagnostic.txt"));
    EXPECT_NE(slurp(out / "run_manifest.txt").find("exit_status = 3"), std::string::npos);
}

TEST_F(Cli, PoincarePrintsPi)
{
    const auto r = run("poincare --p 2 --out " + (dir / "out").string());
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(std::stod(r.out), std::numbers::pi, 1e-3);
    EXPECT_TRUE(fs::exists(dir / "out" / "poincare.csv"));
}

TEST_F(Cli, VerificationCommands)
{
    EXPECT_EQ(run("verify-decay --s -0.5 --sigma 0.5 --out " + (dir / "d").string()).status, 0);
    EXPECT_EQ(run("verify-embedding --grids 64,128 --out " + (dir / "e").string()).status, 0);
    EXPECT_EQ(run("verify-lemma-a2 --cases 20 --dt-ode 1e-3 --out " + (dir / "l").string()).status, 0);
    EXPECT_TRUE(fs::exists(dir / "l" / "campaign.csv"));
}

TEST_F(Cli, StationaryAndOmegaLimit)
{
    const auto cfg = write("bistable.cfg", "p = 3\npoly_coeffs = 0, -40, 0, 1\ngrid_n = 32\ndt = 0.02\nt_end = 2\n");
    const auto s = run("stationary --starts 8 --amplitude 6 --config " + cfg.string() + " --out " + (dir / "s").string());
    EXPECT_EQ(s.status, 0);
    EXPECT_TRUE(fs::exists(dir / "s" / "stationary_summary.csv"));
    const auto o = run("omega-limit --members 3 --starts 4 --grids 16,32 --config " + cfg.string() + " --out "
                       + (dir / "o").string());
    EXPECT_EQ(o.status, 0);
    EXPECT_TRUE(fs::exists(dir / "o" / "regularity.csv"));
}

TEST_F(Cli, DeterministicArtifacts)
{
    const auto cfg = write("run.cfg", "p = 3\ngrid_n = 16\ndt = 0.05\nt_end = 1\nu0_expression = sin(pi*x) + 0.3*sin(2*pi*x)\n");
    for (const char* name : {"a", "b"})
        ASSERT_EQ(run("simulate --scheme mp --config " + cfg.string() + " --out " + (dir / name).string()).status, 0);
    EXPECT_EQ(slurp(dir / "a" / "trajectory.csv"), slurp(dir / "b" / "trajectory.csv"));
    EXPECT_EQ(slurp(dir / "a" / "energy.csv"), slurp(dir / "b" / "energy.csv"));
}
