// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_CLI_COMMANDS_HPP
#define GAMMASOLVE_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace gammasolve::cli
{

// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_failed = 2;

struct CommonOptions
{
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::uint64_t seed = 42;
  std::optional<double> tol;
};

int run_solve(const CommonOptions &o, std::ostream &log);
int run_effective(const CommonOptions &o, std::ostream &log);
int run_schrodinger(const CommonOptions &o, std::ostream &log);

struct ProjectOptions
{
  std::filesystem::path input;
  std::filesystem::path output;
  std::string projector;
  bool complement = false;
};
int run_project(const ProjectOptions &o, std::ostream &log);

struct DispersionOptions
{
  std::string model = "effmass";
  // start:stop:steps
  std::string scan;
  // Resonator.
  double bar_mass = 1.0;
  int cavities = 1;
  double hidden_mass = 1.0;
  double spring_re = 1.0;
  double spring_im = 0.0;
  // Love profile.
  double thickness = 1.0;
  double mu1 = 1.0;
  double rho1 = 1.0;
  double mu2 = 4.0;
  double rho2 = 1.0;
  double omega = 4.0;
  std::size_t points = 256;
};
int run_dispersion(const DispersionOptions &o, const std::optional<std::filesystem::path> &out,
                   std::ostream &csv, std::ostream &log);

int run_verify(std::uint64_t seed, std::ostream &out);

}  // namespace gammasolve::cli

#endif  // GAMMASOLVE_CLI_COMMANDS_HPP
