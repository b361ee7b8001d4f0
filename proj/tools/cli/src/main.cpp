// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"

namespace
{

using namespace gammasolve;

int report(std::string_view code, const std::string &message)
{
  std::string line = message;
  for (auto &ch : line)
  {
    if (ch == '\n' || ch == '\r')
    {
      ch = ' ';
    }
  }
  std::cerr << "error[" << code << "]: " << line << "\n";
  return cli::exit_usage;
}

bool is_solve_failure(ErrorCode code)
{
  return code == ErrorCode::not_converged || code == ErrorCode::singular_operator ||
         code == ErrorCode::resonance || code == ErrorCode::partial_result;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Spectral projection solver for periodic wave and transport problems"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::CommonOptions common;
  std::string config;
  std::string out;
  std::optional<unsigned> threads;
  std::optional<double> tol;
  app.add_option("--config", config, "JSON run configuration");
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", common.seed, "Seed for random test data")->capture_default_str();
  app.add_option("--threads", threads, "Worker thread cap (default: GAMMA_SOLVE_THREADS)");
  app.add_option("--tol", tol, "Relative residual tolerance override");

  auto *solve = app.add_subcommand("solve", "Solve a configured problem");
  auto *effective = app.add_subcommand("effective", "Compute effective tensors for a Bloch run");
  auto *schrodinger =
      app.add_subcommand("schrodinger", "First-order perturbation of a bound state");

  cli::ProjectOptions project_opts;
  std::string project_in;
  std::string project_out;
  auto *project = app.add_subcommand("project", "Apply a projector to a field file");
  project->add_option("--in", project_in, "Input UPLF field")->required();
  project->add_option("--projector", project_opts.projector, "Projector name")->required();
  project->add_option("--output", project_out, "Output UPLF field")->required();
  project->add_flag("--complement", project_opts.complement, "Apply I - Gamma instead");

  cli::DispersionOptions disp;
  auto *dispersion = app.add_subcommand("dispersion", "Resonator and Love-wave scans as CSV");
  dispersion->add_option("--model", disp.model, "effmass or love")->capture_default_str();
  dispersion->add_option("--scan", disp.scan, "start:stop:steps")->required();
  dispersion->add_option("--M0", disp.bar_mass, "Bar mass");
  dispersion->add_option("--n", disp.cavities, "Cavity count");
  dispersion->add_option("--m", disp.hidden_mass, "Hidden mass");
  dispersion->add_option("--K-re", disp.spring_re, "Spring constant, real part");
  dispersion->add_option("--K-im", disp.spring_im, "Spring constant, imaginary part");
  dispersion->add_option("--thickness", disp.thickness, "Layer thickness");
  dispersion->add_option("--mu1", disp.mu1, "Layer shear modulus");
  dispersion->add_option("--rho1", disp.rho1, "Layer density");
  dispersion->add_option("--mu2", disp.mu2, "Halfspace shear modulus");
  dispersion->add_option("--rho2", disp.rho2, "Halfspace density");
  dispersion->add_option("--omega", disp.omega, "Angular frequency");
  dispersion->add_option("--points", disp.points, "Grid points of the Love scan");

  auto *verify = app.add_subcommand("verify", "Run the built-in verification suites");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    return report("E_USAGE", e.what());
  }

  try
  {
    if (threads)
    {
      set_max_threads(*threads);
    }
    common.config = config;
    if (!out.empty())
    {
      common.out = out;
    }
    common.tol = tol;
    if (solve->parsed())
    {
      return cli::run_solve(common, std::cerr);
    }
    if (effective->parsed())
    {
      return cli::run_effective(common, std::cerr);
    }
    if (schrodinger->parsed())
    {
      return cli::run_schrodinger(common, std::cerr);
    }
    if (project->parsed())
    {
      project_opts.input = project_in;
      project_opts.output = project_out;
      return cli::run_project(project_opts, std::cerr);
    }
    if (dispersion->parsed())
    {
      return cli::run_dispersion(disp, common.out, std::cout, std::cerr);
    }
    if (verify->parsed())
    {
      return cli::run_verify(common.seed, std::cout);
    }
  }
  catch (const Error &e)
  {
    report(to_string(e.code()), e.what());
    return is_solve_failure(e.code()) ? cli::exit_failed : cli::exit_usage;
  }
  catch (const std::exception &e)
  {
    return report("E_INTERNAL", e.what());
  }
  return cli::exit_usage;
}
