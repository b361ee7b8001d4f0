// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_PROJECTORS_HPP
#define GAMMASOLVE_PROJECTORS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/tensorfield.hpp"

namespace gammasolve
{

using SymbolFunction = std::function<Eigen::MatrixXcd(std::span<const double> k)>;

//
// D(ik): field_components x potential_components. The projector onto its range is
// D [D^H D]^+ D^H.
//
struct DSymbol
{
  int field_components = 0;
  int potential_components = 0;
  SymbolFunction evaluate;
};

// Gradient-plus-value form D = (ik, 1) on a (vector(d), scalar) layout.
DSymbol helmholtz_D(int d);
// D = [I; i eta(k)] on (vector(3), vector(3)).
DSymbol maxwell_D();
// D = (ik (x) u, u) column by column on (matrix(d), vector(d)).
DSymbol elastic_D(int d);
// Divergence D = ik^T mapping vector(d) potentials to one scalar field component.
DSymbol divergence_D(int d);

// Range projector of D(ik) by SVD; singular values below 1e-12 * sigma_max are dropped.
// Throws ErrorCode::degenerate_symbol if D(ik) vanishes.
Eigen::MatrixXcd gamma_from_D(const DSymbol &D, std::span<const double> k);

// Closed forms. All use the k^2 + 1 denominator.
Eigen::MatrixXcd gamma_helmholtz(std::span<const double> k);
Eigen::MatrixXcd gamma_maxwell(std::span<const double> k);
Eigen::MatrixXcd gamma_brinkman(std::span<const double> k);
Eigen::MatrixXcd gamma_elastic(std::span<const double> k);
Eigen::MatrixXcd gamma_thermoacoustic(std::span<const double> k);
Eigen::MatrixXcd gamma_schrodinger(std::span<const double> k);
// Scalar Love form: Helmholtz projector on a single vertical wavenumber.
Eigen::MatrixXcd gamma_surface_love(double k3);

//
// A projector builder bound to a field layout. wave_dimension is the length of k the
// symbol expects, which must equal the grid dimension it is applied on.
//
struct Projector
{
  std::string name;
  BlockLayout layout;
  std::size_t wave_dimension = 0;
  SymbolFunction symbol;
};

Projector helmholtz_projector(int d);
Projector maxwell_projector();
Projector brinkman_projector();
Projector elastic_projector(int d);
Projector thermoacoustic_projector();
Projector schrodinger_projector(int dimension);
Projector love_projector();
// Evaluates a 3D builder at (k1, 0, k3) for a 1D vertical grid.
Projector surface_projector(const Projector &base, double k1);
Projector projector_from_D(std::string name, BlockLayout layout, std::size_t wave_dimension,
                           DSymbol D);
// I - Gamma.
Projector complement(const Projector &p);

//
// A projector bound to a grid and an optional Bloch shift, applied in place to
// Fourier-space fields. Symbols are cached per grid point when the table fits the
// memory budget; the cache is built once and read concurrently afterwards.
//
class SpectralProjection
{
public:
  SpectralProjection(Projector projector, Grid grid, std::vector<double> shift = {},
                     std::size_t cache_budget_bytes = default_cache_budget);

  static constexpr std::size_t default_cache_budget = std::size_t{256} << 20;

  const Projector &projector() const { return projector_; }
  const Grid &grid() const { return grid_; }
  const std::vector<double> &shift() const { return shift_; }
  bool cached() const { return !cache_.empty(); }

  // Symbol at a flat grid point (wavevector + shift).
  Eigen::MatrixXcd symbol_at(std::size_t point) const;

  // Gamma (or I - Gamma) applied per Fourier coefficient.
  void apply(Field &f, bool complement = false) const;
  void apply(std::span<cplx> values, bool complement = false) const;

private:
  Projector projector_;
  Grid grid_;
  std::vector<double> shift_;
  std::vector<cplx> cache_;
};

// Multiplies each coefficient of a Fourier-space field by builder(k + shift).
Field apply_projector(const Projector &projector, const Field &f,
                      std::span<const double> shift = {});

}  // namespace gammasolve

#endif  // GAMMASOLVE_PROJECTORS_HPP
