// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_PHYSICS_HPP
#define GAMMASOLVE_PHYSICS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/projectors.hpp"
#include "gammasolve/tensorfield.hpp"

namespace gammasolve
{

//
// Spatial variation descriptors. Every descriptor resolves to one value per grid point.
//
template <typename T>
struct Layered
{
  int axis = 0;
  // Sorted interior breakpoints in cell coordinates; values.size() == breakpoints.size() + 1.
  std::vector<double> breakpoints;
  std::vector<T> values;
};

// Phase index is the sum over axes of floor(2 x_i / L_i), modulo values.size().
template <typename T>
struct Checkerboard
{
  std::vector<T> values;
};

// One value per grid point (voxel files, sampled data).
template <typename T>
struct Table
{
  std::vector<T> values;
};

// Value as a function of the point's position.
template <typename T>
struct Sampled
{
  std::function<T(std::span<const double> x)> function;
};

template <typename T>
using Param = std::variant<T, Layered<T>, Checkerboard<T>, Table<T>, Sampled<T>>;

using ScalarParam = Param<cplx>;
// Matrix-valued parameters. A 1 x 1 value is broadcast to a multiple of the identity.
using MatrixParam = Param<Eigen::MatrixXcd>;

cplx resolve(const ScalarParam &p, const Grid &grid, std::size_t point);
Eigen::MatrixXcd resolve(const MatrixParam &p, const Grid &grid, std::size_t point, int rows,
                         int cols);
bool is_constant(const ScalarParam &p);
bool is_constant(const MatrixParam &p);

// A d x d multiple of the identity.
Eigen::MatrixXcd scalar_matrix(cplx value, int d = 1);

enum class Orientation
{
  // J = L E - s
  direct,
  // E = M J + s; the stored matrix is M.
  inverse,
};

//
// Per-point dense material matrix. Matrices are stored column-major, one per point.
//
class LField
{
public:
  LField() = default;
  LField(Grid grid, BlockLayout layout, Orientation orientation);

  const Grid &grid() const { return grid_; }
  const BlockLayout &layout() const { return layout_; }
  Orientation orientation() const { return orientation_; }
  int components() const { return layout_.total_components(); }
  std::size_t points() const { return grid_.points(); }

  Eigen::Map<Eigen::MatrixXcd> at(std::size_t point);
  Eigen::Map<const Eigen::MatrixXcd> at(std::size_t point) const;

  // True when every point carries the same matrix.
  bool is_uniform() const;
  bool all_finite() const;

  // Pointwise product with a real-space field, in place or into out.
  void apply(std::span<const cplx> in, std::span<cplx> out, bool adjoint = false) const;
  Field apply(const Field &f) const;

  LField with_orientation(Orientation o) const;

private:
  Grid grid_;
  BlockLayout layout_;
  Orientation orientation_ = Orientation::direct;
  std::vector<cplx> data_;
};

//
// Physics parameter bundles. Block orderings follow each projector's layout.
//

// Layout (vector(d), scalar). Stored as the inverse map M = diag(omega rho, -kappa/omega),
// or diag(omega^2 rho, -kappa) when scaled; fields are E = (grad P, P), J = (i v, i div v),
// source s = (f, 0).
struct AcousticsSpec
{
  cplx omega = 1.0;
  ScalarParam kappa = cplx{1.0};
  MatrixParam rho = scalar_matrix(1.0);
  bool scaled = false;
};

// Layout (matrix(d), vector(d)); L = [[-C/omega, D], [D^H, omega rho]].
// C is packed (sym_size(d) square). D is d^2 x d, acting through its symmetric rows.
struct ElastodynamicsSpec
{
  cplx omega = 1.0;
  MatrixParam stiffness;
  MatrixParam rho = scalar_matrix(1.0);
  std::optional<MatrixParam> coupling;
};

// Layout (vector(3), vector(3)); L = diag(omega eps, -(omega mu)^-1).
struct MaxwellSpec
{
  cplx omega = 1.0;
  MatrixParam epsilon = scalar_matrix(1.0);
  MatrixParam mu = scalar_matrix(1.0);
};

// Layout (sym_matrix(3), vector(3)); L = diag(i V, -(omega rho + i eta k^-1)^-1).
struct BrinkmanSpec
{
  cplx omega = 1.0;
  MatrixParam viscosity;
  MatrixParam permeability = scalar_matrix(1.0);
  ScalarParam eta = cplx{1.0};
  MatrixParam rho = scalar_matrix(1.0);
};

// Layout (matrix(3), vector(3)), inverse orientation:
// M = [[C, 0], [U., -omega rho]], C = (kappa - i omega eta_B) Lambda_h / 3 - 2 i omega eta Lambda_s.
struct OseenSpec
{
  cplx omega = 1.0;
  ScalarParam kappa = cplx{1.0};
  ScalarParam bulk_viscosity = cplx{0.0};
  ScalarParam viscosity = cplx{0.0};
  // 3 x 1 background velocity.
  MatrixParam velocity = Eigen::MatrixXcd::Zero(3, 1);
  MatrixParam rho = scalar_matrix(1.0);
};

// Layout (matrix(d), vector(d)); L = [[2 eta Lambda_s + p Lambda_h, 0], [rho v., -i omega rho~]],
// rho~ = rho (I + i (grad v)^T / omega). Stationary replaces -i omega rho~ by rho (grad v)^T.
struct NavierStokesSpec
{
  int dimension = 3;
  cplx omega = 1.0;
  ScalarParam viscosity = cplx{1.0};
  cplx rho = 1.0;
  // d x 1 background velocity and d x d gradient, (grad v)_{ab} = d_a v_b.
  MatrixParam velocity = Eigen::MatrixXcd::Zero(3, 1);
  MatrixParam velocity_gradient = Eigen::MatrixXcd::Zero(3, 3);
  // Defaults to 1e8 * max |2 eta| when unset.
  std::optional<double> penalty;
  bool stationary = false;
};

// Layout (matrix(3), vector(3), vector(3), scalar).
struct ThermoacousticSpec
{
  cplx omega = 1.0;
  cplx bulk_viscosity = 0.0;
  cplx viscosity = 0.0;
  cplx beta_T = 1.0;
  cplx heat_capacity = 1.0;
  cplx alpha0 = 0.0;
  MatrixParam conductivity = scalar_matrix(0.0);
  cplx rho0 = 1.0;
  cplx T0 = 1.0;
};

// 1D layout (vector(1), scalar); L = diag(mu, k1^2 mu - omega^2 rho).
struct LoveSpec
{
  cplx omega = 1.0;
  double k1 = 0.0;
  ScalarParam mu = cplx{1.0};
  ScalarParam rho = cplx{1.0};
};

// Layout (vector(D), scalar) on a D = N d grid; L = diag(-A, E - V).
struct SchrodingerSpec
{
  Eigen::MatrixXd A;
  ScalarParam potential = cplx{0.0};
  cplx energy = 0.0;
};

using MaterialSpec = std::variant<AcousticsSpec, ElastodynamicsSpec, MaxwellSpec, BrinkmanSpec,
                                  OseenSpec, NavierStokesSpec, ThermoacousticSpec, LoveSpec,
                                  SchrodingerSpec>;

LField build_acoustics(const AcousticsSpec &spec, const Grid &grid);
LField build_elastodynamics(const ElastodynamicsSpec &spec, const Grid &grid);
LField build_maxwell(const MaxwellSpec &spec, const Grid &grid);
LField build_brinkman(const BrinkmanSpec &spec, const Grid &grid);
LField build_oseen_inverse(const OseenSpec &spec, const Grid &grid);
LField build_ns_perturbation(const NavierStokesSpec &spec, const Grid &grid);
LField build_thermoacoustic(const ThermoacousticSpec &spec, const Grid &grid);
LField build_love(const LoveSpec &spec, const Grid &grid);
LField build_schrodinger(const SchrodingerSpec &spec, const Grid &grid);

LField build(const MaterialSpec &spec, const Grid &grid);
// Projector paired with each physics on the given grid.
Projector projector_for(const MaterialSpec &spec, const Grid &grid);

// Pair potential V^D(x_1, x_2) on a grid of dimension N d_space.
ScalarParam pair_potential(std::function<cplx(std::span<const double> x1,
                                              std::span<const double> x2)> v,
                           int d_space);

struct PassivityReport
{
  std::vector<double> min_eigenvalue;
  double global_min = 0.0;
  bool passed = false;
  // Points whose minimum eigenvalue falls below the tolerance.
  std::vector<std::size_t> failing_points;
};

// Eigenvalues of (L - L^H) / 2i per point; passes when all are >= tolerance.
PassivityReport passivity_check(const LField &L, double tolerance = -1e-12);

LField phase_rotation(const LField &L, double theta);
// Midpoint of the longest run of a 1e-3 scan over (0, pi) with strictly positive Im.
double find_rotation(const LField &L);

// Pointwise inverse; flips orientation. Throws ErrorCode::material_singularity with the point.
LField invert_blockwise(const LField &L);

}  // namespace gammasolve

#endif  // GAMMASOLVE_PHYSICS_HPP
