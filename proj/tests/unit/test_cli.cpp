// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/projectors.hpp"
#include "gammasolve/uplf.hpp"
#include "gammasolve_verify/verify.hpp"

namespace
{

namespace fs = std::filesystem;
using namespace gammasolve;
using nlohmann::json;

const fs::path configs = GAMMASOLVE_CONFIG_DIR;

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("gammasolve_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Outcome
{
  int code = -1;
  std::string err;
};

// Runs the installed-layout executable; stdout is discarded, stderr captured.
Outcome run(const std::string &args, const fs::path &dir)
{
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + GAMMASOLVE_CLI_PATH + "\" " + args + " > \"" +
                          (dir / "stdout.txt").string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

ErrorCode parse_error(const std::string &text, std::string *message = nullptr)
{
  try
  {
    cli::parse_config(text);
  }
  catch (const Error &e)
  {
    if (message)
    {
      *message = e.what();
    }
    return e.code();
  }
  ADD_FAILURE() << "config was accepted";
  return ErrorCode::guard;
}

TEST(ParseConfig, MinimalAcousticsConfig)
{
  const cli::RunConfig c = cli::load_config(configs / "helmholtz.json");
  EXPECT_EQ(c.physics, "acoustics");
  EXPECT_EQ(c.grid.dims(), (std::vector<std::size_t>{16, 16, 16}));
  EXPECT_EQ(c.omega, cplx{1.5});
  EXPECT_DOUBLE_EQ(c.solver.tol, 1e-10);
  ASSERT_TRUE(std::holds_alternative<cli::PlaneWaveSource>(c.source));
  const Field s = cli::build_source(c, BlockLayout{Block::vector(3), Block::scalar()});
  EXPECT_NEAR(std::abs(s(5, 0)), 1.0, 1e-14);
  EXPECT_EQ(s(5, 3), cplx{0.0});
}

TEST(ParseConfig, UnknownKeyNamesItsPath)
{
  std::string message;
  const std::string text = R"({"physics": "acoustics", "grid": {"dims": [4, 4]},
                               "material": {"kappa": 1.0, "rho_typo": 2.0}})";
  EXPECT_EQ(parse_error(text, &message), ErrorCode::config);
  EXPECT_NE(message.find("$.material.rho_typo"), std::string::npos) << message;
}

TEST(ParseConfig, SchemaViolations)
{
  EXPECT_EQ(parse_error("{not json"), ErrorCode::config);
  EXPECT_EQ(parse_error(R"({"grid": {"dims": [4]}})"), ErrorCode::config);
  EXPECT_EQ(parse_error(R"({"physics": "acoustics", "grid": {"dims": [4]}, "omega": 0})"),
            ErrorCode::config);
  EXPECT_EQ(parse_error(R"({"physics": "plasma", "grid": {"dims": [4]}})"), ErrorCode::config);
  EXPECT_EQ(parse_error(R"({"physics": "acoustics", "grid": {"dims": [4, 4]},
                            "source": {"type": "plane_wave", "k_index": [1], "amplitude": [1]}})"),
            ErrorCode::config);
}

TEST(ParseConfig, VoxelDescriptors)
{
  const fs::path dir = scratch("voxel");
  const Grid wrong({4, 5}, {1.0, 1.0});
  write_uplf(dir / "kappa.uplf", Field(wrong, BlockLayout{Block::scalar()}));
  const std::string text = R"({"physics": "acoustics", "grid": {"dims": [4, 4]},
                               "material": {"kappa": {"voxel": "kappa.uplf"}}})";
  try
  {
    cli::parse_config(text, dir);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::shape);
  }
  const Grid right({4, 4}, {1.0, 1.0});
  Field kappa(right, BlockLayout{Block::scalar()});
  for (auto &v : kappa.values())
  {
    v = 2.0;
  }
  write_uplf(dir / "kappa.uplf", kappa);
  EXPECT_NO_THROW(cli::parse_config(text, dir));
  fs::remove(dir / "kappa.uplf");
  try
  {
    cli::parse_config(text, dir);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::io);
  }
}

TEST(ParseConfig, SchrodingerSector)
{
  const cli::SchrodingerConfig c =
      cli::parse_schrodinger_config(slurp(configs / "schrodinger_pair.json"));
  EXPECT_EQ(c.electrons, 2);
  EXPECT_EQ(c.d_space, 1);
  EXPECT_FALSE(c.energy.has_value());
  ASSERT_TRUE(c.pair.has_value());
  const Field V = cli::total_potential(c);
  // Both electrons at the origin: checkerboard phase 0 plus the softened contact value.
  EXPECT_NEAR(V(0, 0).real(), -4.0 + 2.0 / 0.1, 1e-12);
  EXPECT_THROW(cli::parse_schrodinger_config(
                   R"({"grid": {"dims": [4, 4]}, "electrons": 3, "perturbation": 0})"),
               Error);
}

TEST(Executable, SolveConvergesOnTheAnalyticCase)
{
  const fs::path dir = scratch("solve");
  const Outcome r = run("solve --config \"" + (configs / "helmholtz.json").string() + "\" --out \"" +
                        dir.string() + "\"",
                    dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const json summary = json::parse(slurp(dir / "summary.json"));
  EXPECT_TRUE(summary["converged"].get<bool>());
  EXPECT_LE(summary["residual"].get<double>(), 1e-8);
  EXPECT_TRUE(summary.contains("timings"));
  EXPECT_TRUE(fs::exists(dir / "E.uplf"));
  EXPECT_TRUE(fs::exists(dir / "J.uplf"));
  EXPECT_EQ(read_uplf(dir / "E.uplf").grid().points(), 4096u);
}

TEST(Executable, IterationCapExitsWithTwo)
{
  const fs::path dir = scratch("cap");
  json config = json::parse(slurp(configs / "checkerboard.json"));
  config["solver"]["max_iter"] = 1;
  std::ofstream(dir / "config.json") << config.dump();
  const Outcome r = run("solve --config \"" + (dir / "config.json").string() + "\" --out \"" +
                        dir.string() + "\"",
                    dir);
  EXPECT_EQ(r.code, 2);
  const std::string history = slurp(dir / "history.csv");
  EXPECT_EQ(history.rfind("iteration,residual\n0,1\n", 0), 0u) << history;
  EXPECT_FALSE(json::parse(slurp(dir / "summary.json"))["converged"].get<bool>());
}

TEST(Executable, ErrorsAreSingleLines)
{
  const fs::path dir = scratch("errors");
  const Outcome missing = run("solve --config /nonexistent/config.json", dir);
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error[E_IO]: ", 0), 0u) << missing.err;
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

  std::ofstream(dir / "typo.json")
      << R"({"physics": "acoustics", "grid": {"dims": [4]}, "material": {"rho_typo": 1}})";
  const Outcome typo = run("solve --config \"" + (dir / "typo.json").string() + "\"", dir);
  EXPECT_EQ(typo.code, 1);
  EXPECT_EQ(typo.err.rfind("error[E_CONFIG]: $.material.rho_typo", 0), 0u) << typo.err;

  const Outcome usage = run("solve --no-such-flag", dir);
  EXPECT_EQ(usage.code, 1);
  EXPECT_EQ(usage.err.rfind("error[E_USAGE]: ", 0), 0u) << usage.err;
  EXPECT_EQ(std::count(usage.err.begin(), usage.err.end(), '\n'), 1);
}

TEST(Executable, OutputsAreDeterministic)
{
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string args = "solve --seed 7 --config \"" + (configs / "checkerboard.json").string() + "\"";
  ASSERT_EQ(run(args + " --out \"" + a.string() + "\"", a).code, 0);
  ASSERT_EQ(run(args + " --out \"" + b.string() + "\"", b).code, 0);
  EXPECT_EQ(slurp(a / "E.uplf"), slurp(b / "E.uplf"));
  EXPECT_EQ(slurp(a / "J.uplf"), slurp(b / "J.uplf"));
  EXPECT_EQ(slurp(a / "history.csv"), slurp(b / "history.csv"));
  json sa = json::parse(slurp(a / "summary.json"));
  json sb = json::parse(slurp(b / "summary.json"));
  sa.erase("timings");
  sb.erase("timings");
  EXPECT_EQ(sa.dump(), sb.dump());
}

TEST(Executable, EffectiveWritesTensorsWithMetadata)
{
  const fs::path dir = scratch("effective");
  const Outcome r = run("effective --config \"" + (configs / "effective.json").string() +
                        "\" --out \"" + dir.string() + "\"",
                    dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const json out = json::parse(slurp(dir / "effective.json"));
  EXPECT_EQ(out["LE"].size(), 3u);
  EXPECT_EQ(out["LJ"].size(), 3u);
  EXPECT_EQ(out["omega"][1].get<double>(), 0.02);
  EXPECT_EQ(out["k0"][0].get<double>(), 0.4);
}

TEST(Executable, SchrodingerPair)
{
  const fs::path dir = scratch("schrodinger");
  const Outcome r = run("schrodinger --config \"" + (configs / "schrodinger_pair.json").string() +
                        "\" --out \"" + dir.string() + "\"",
                    dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const json s = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(s["electrons"].get<int>(), 2);
  EXPECT_LT(s["orthogonality"].get<double>(), 1e-10);
  EXPECT_TRUE(fs::exists(dir / "psi1.uplf"));
}

TEST(Executable, ProjectIsIdempotent)
{
  const fs::path dir = scratch("project");
  std::mt19937_64 rng(3);
  const Grid g({6, 6, 6}, {1.0, 1.0, 1.0});
  write_uplf(dir / "in.uplf",
             verify::random_field(g, BlockLayout{Block::vector(3), Block::scalar()}, rng));
  const std::string base = "project --projector helmholtz ";
  ASSERT_EQ(run(base + "--in \"" + (dir / "in.uplf").string() + "\" --output \"" +
                    (dir / "once.uplf").string() + "\"",
                dir)
                .code,
            0);
  ASSERT_EQ(run(base + "--in \"" + (dir / "once.uplf").string() + "\" --output \"" +
                    (dir / "twice.uplf").string() + "\"",
                dir)
                .code,
            0);
  const Field once = read_uplf(dir / "once.uplf");
  const Field twice = read_uplf(dir / "twice.uplf");
  EXPECT_LT(norm(axpy(-1.0, once, twice)), 1e-12 * norm(once));
  EXPECT_EQ(run(base + "--complement --in \"" + (dir / "once.uplf").string() + "\" --output \"" +
                    (dir / "rest.uplf").string() + "\"",
                dir)
                .code,
            0);
  EXPECT_LT(norm(read_uplf(dir / "rest.uplf")), 1e-12 * norm(once));
}

TEST(Executable, DispersionCsv)
{
  const fs::path dir = scratch("dispersion");
  ASSERT_EQ(run("dispersion --model effmass --scan 0.5:2.0:4 --out \"" + dir.string() + "\"", dir)
                .code,
            0);
  std::istringstream csv(slurp(dir / "dispersion.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "omega,re,im");
  std::getline(csv, line);
  // 1 + 2 / (2 - 0.25) = 15 / 7.
  EXPECT_EQ(line, "0.5,2.1428571428571428,0");
  const Outcome bad = run("dispersion --model effmass --scan 1:2", dir);
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.err.rfind("error[E_CONFIG]: ", 0), 0u) << bad.err;
}

TEST(Executable, VerifyPasses)
{
  const fs::path dir = scratch("verify");
  const Outcome r = run("verify", dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "stdout.txt").find("all checks passed"), std::string::npos);
}

TEST(Commands, VerifyTableNamesEverySuite)
{
  std::ostringstream out;
  EXPECT_EQ(cli::run_verify(42, out), cli::exit_ok);
  for (const char *suite : {"projector", "closed", "round", "dense"})
  {
    EXPECT_NE(out.str().find(suite), std::string::npos) << suite;
  }
}

}  // namespace
