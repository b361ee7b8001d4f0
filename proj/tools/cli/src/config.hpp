// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_CLI_CONFIG_HPP
#define GAMMASOLVE_CLI_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gammasolve/physics.hpp"
#include "gammasolve/solver.hpp"

namespace gammasolve::cli
{

// Source descriptors. Amplitudes carry one entry per layout component.
struct ZeroSource
{
};
struct PlaneWaveSource
{
  std::vector<long> k_index;
  std::vector<cplx> amplitude;
};
struct BumpSource
{
  std::vector<double> center;
  double width = 0.1;
  std::vector<cplx> amplitude;
};
struct VoxelSource
{
  std::filesystem::path path;
};
using SourceSpec = std::variant<ZeroSource, PlaneWaveSource, BumpSource, VoxelSource>;

struct BlochSpec
{
  std::vector<double> k0;
  ScalarParam alpha = cplx{0.0};
};

struct RunConfig
{
  std::string physics;
  Grid grid;
  cplx omega = 1.0;
  MaterialSpec material;
  SourceSpec source;
  SolverOptions solver;
  std::optional<BlochSpec> bloch;
  std::optional<std::filesystem::path> output;
};

// Validates a JSON document against the run schema. Unknown keys and type mismatches throw
// ErrorCode::config naming the JSON path; voxel files are read relative to base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {});
RunConfig load_config(const std::filesystem::path &path);

// Real-space source on the physics' layout.
Field build_source(const RunConfig &config, const BlockLayout &layout);

// Real-space scalar field from a descriptor.
Field sample_scalar(const ScalarParam &p, const Grid &grid);

// Soft-Coulomb pair interaction g / sqrt(|x_i - x_j|^2 + a^2) with minimum-image distances.
struct PairInteraction
{
  double strength = 0.0;
  double softening = 1.0;
};

struct SchrodingerConfig
{
  Grid grid;
  int electrons = 1;
  int d_space = 1;
  Eigen::MatrixXd A;
  ScalarParam potential = cplx{0.0};
  std::optional<PairInteraction> pair;
  ScalarParam perturbation = cplx{0.0};
  // Target energy; unset selects eigenpair `state` of the dense solve.
  std::optional<double> energy;
  int state = 0;
  SolverOptions solver;
};

// Potential plus the pairwise interaction summed over all electron pairs.
Field total_potential(const SchrodingerConfig &c);

SchrodingerConfig parse_schrodinger_config(std::string_view text,
                                           const std::filesystem::path &base_dir = {});

}  // namespace gammasolve::cli

#endif  // GAMMASOLVE_CLI_CONFIG_HPP
