// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"
#include "gammasolve/tensor_algebra.hpp"

namespace gammasolve
{

namespace
{

using Eigen::MatrixXcd;

constexpr cplx I1{0.0, 1.0};

template <typename T>
T resolve_generic(const Param<T> &p, const Grid &grid, std::size_t point)
{
  return std::visit(
      [&](const auto &d) -> T {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, T>)
        {
          return d;
        }
        else if constexpr (std::is_same_v<D, Layered<T>>)
        {
          if (d.axis < 0 || static_cast<std::size_t>(d.axis) >= grid.dimension())
          {
            throw Error(ErrorCode::invalid_argument, "layered descriptor axis out of range");
          }
          if (d.values.size() != d.breakpoints.size() + 1)
          {
            throw Error(ErrorCode::shape, "layered descriptor needs one more value than breakpoints");
          }
          const double x = grid.position(point)[static_cast<std::size_t>(d.axis)];
          const auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), x);
          return d.values[static_cast<std::size_t>(it - d.breakpoints.begin())];
        }
        else if constexpr (std::is_same_v<D, Checkerboard<T>>)
        {
          if (d.values.empty())
          {
            throw Error(ErrorCode::shape, "checkerboard descriptor has no values");
          }
          const auto index = grid.unravel(point);
          std::size_t phase = 0;
          for (std::size_t a = 0; a < index.size(); ++a)
          {
            phase += (2 * index[a]) / grid.dims()[a];
          }
          return d.values[phase % d.values.size()];
        }
        else if constexpr (std::is_same_v<D, Table<T>>)
        {
          if (d.values.size() != grid.points())
          {
            throw Error(ErrorCode::shape, "tabulated parameter does not match the grid");
          }
          return d.values[point];
        }
        else
        {
          return d.function(grid.position(point));
        }
      },
      p);
}

template <typename T>
bool constant_generic(const Param<T> &p)
{
  return std::holds_alternative<T>(p);
}

void require_frequency(cplx omega)
{
  if (omega == cplx{0.0} || !std::isfinite(omega.real()) || !std::isfinite(omega.imag()))
  {
    throw Error(ErrorCode::frequency, "frequency must be finite and nonzero");
  }
}

void require_dimension(const Grid &grid, std::size_t d, const char *physics)
{
  if (grid.dimension() != d)
  {
    throw Error(ErrorCode::shape, std::string(physics) + " needs a " + std::to_string(d) +
                                      "-dimensional grid");
  }
}

MatrixXcd checked_inverse(const MatrixXcd &m, std::size_t point, const char *what)
{
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || !(s(s.size() - 1) > 1e-14 * s(0)))
  {
    throw Error(ErrorCode::material_singularity,
                std::string(what) + " is singular at point " + std::to_string(point));
  }
  return m.inverse();
}

template <typename Fn>
LField fill(const Grid &grid, BlockLayout layout, Orientation orientation, Fn &&fn)
{
  LField L(grid, std::move(layout), orientation);
  parallel_for(grid.points(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
    {
      L.at(p) = fn(p);
    }
  });
  if (!L.all_finite())
  {
    throw Error(ErrorCode::non_finite, "material tensor has non-finite entries");
  }
  return L;
}

}  // namespace

cplx resolve(const ScalarParam &p, const Grid &grid, std::size_t point)
{
  return resolve_generic(p, grid, point);
}

MatrixXcd resolve(const MatrixParam &p, const Grid &grid, std::size_t point, int rows, int cols)
{
  MatrixXcd m = resolve_generic(p, grid, point);
  if (m.rows() == 1 && m.cols() == 1 && rows == cols)
  {
    return m(0, 0) * MatrixXcd::Identity(rows, cols);
  }
  if (m.rows() != rows || m.cols() != cols)
  {
    throw Error(ErrorCode::shape, "parameter has shape " + std::to_string(m.rows()) + "x" +
                                      std::to_string(m.cols()) + ", expected " +
                                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  return m;
}

bool is_constant(const ScalarParam &p)
{
  return constant_generic(p);
}

bool is_constant(const MatrixParam &p)
{
  return constant_generic(p);
}

MatrixXcd scalar_matrix(cplx value, int d)
{
  return value * MatrixXcd::Identity(d, d);
}

LField::LField(Grid grid, BlockLayout layout, Orientation orientation)
  : grid_(std::move(grid)), layout_(std::move(layout)), orientation_(orientation),
    data_(grid_.points() * static_cast<std::size_t>(layout_.total_components()) *
          static_cast<std::size_t>(layout_.total_components()))
{
}

Eigen::Map<MatrixXcd> LField::at(std::size_t point)
{
  const int c = components();
  return {data_.data() + point * c * c, c, c};
}

Eigen::Map<const MatrixXcd> LField::at(std::size_t point) const
{
  const int c = components();
  return {data_.data() + point * c * c, c, c};
}

bool LField::is_uniform() const
{
  const std::size_t block = static_cast<std::size_t>(components() * components());
  for (std::size_t p = 1; p < points(); ++p)
  {
    if (!std::equal(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(block),
                    data_.begin() + static_cast<std::ptrdiff_t>(p * block)))
    {
      return false;
    }
  }
  return true;
}

bool LField::all_finite() const
{
  return std::all_of(data_.begin(), data_.end(), [](const cplx &v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

void LField::apply(std::span<const cplx> in, std::span<cplx> out, bool adjoint) const
{
  const int c = components();
  if (in.size() != points() * static_cast<std::size_t>(c) || out.size() != in.size())
  {
    throw Error(ErrorCode::shape, "field size does not match the material tensor");
  }
  parallel_for(points(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
    {
      Eigen::Map<const Eigen::VectorXcd> x(in.data() + p * c, c);
      Eigen::Map<Eigen::VectorXcd> y(out.data() + p * c, c);
      if (adjoint)
      {
        y.noalias() = at(p).adjoint() * x;
      }
      else
      {
        y.noalias() = at(p) * x;
      }
    }
  });
}

Field LField::apply(const Field &f) const
{
  if (f.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::representation, "material tensors act on real-space fields");
  }
  if (!(f.grid() == grid_) || !(f.layout() == layout_))
  {
    throw Error(ErrorCode::shape, "field " + f.layout().describe() +
                                      " does not match material layout " + layout_.describe());
  }
  Field out(grid_, layout_, Representation::real_space);
  apply(f.values(), out.values());
  return out;
}

LField LField::with_orientation(Orientation o) const
{
  LField copy = *this;
  copy.orientation_ = o;
  return copy;
}

LField build_acoustics(const AcousticsSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  const int d = static_cast<int>(grid.dimension());
  const cplx w = spec.omega;
  return fill(grid, {Block::vector(d), Block::scalar()}, Orientation::inverse, [&](std::size_t p) {
    const MatrixXcd rho = resolve(spec.rho, grid, p, d, d);
    const cplx kappa = resolve(spec.kappa, grid, p);
    MatrixXcd m = MatrixXcd::Zero(d + 1, d + 1);
    if (spec.scaled)
    {
      m.topLeftCorner(d, d) = w * w * rho;
      m(d, d) = -kappa;
    }
    else
    {
      m.topLeftCorner(d, d) = w * rho;
      m(d, d) = -kappa / w;
    }
    return m;
  });
}

LField build_elastodynamics(const ElastodynamicsSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  const int d = static_cast<int>(grid.dimension());
  const int n = d * d;
  const cplx w = spec.omega;
  const MatrixXcd pack = packing_matrix(d).cast<cplx>();
  const MatrixXcd sym = pack.transpose() * pack;
  return fill(grid, {Block::matrix(d), Block::vector(d)}, Orientation::direct, [&](std::size_t p) {
    const MatrixXcd c = resolve(spec.stiffness, grid, p, sym_size(d), sym_size(d));
    MatrixXcd m = MatrixXcd::Zero(n + d, n + d);
    m.topLeftCorner(n, n) = -expand_rank4(c, d) / w;
    m.bottomRightCorner(d, d) = w * resolve(spec.rho, grid, p, d, d);
    if (spec.coupling)
    {
      const MatrixXcd D = sym * resolve(*spec.coupling, grid, p, n, d);
      m.topRightCorner(n, d) = D;
      m.bottomLeftCorner(d, n) = D.adjoint();
    }
    return m;
  });
}

LField build_maxwell(const MaxwellSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  require_dimension(grid, 3, "maxwell");
  const cplx w = spec.omega;
  return fill(grid, {Block::vector(3), Block::vector(3)}, Orientation::direct, [&](std::size_t p) {
    MatrixXcd m = MatrixXcd::Zero(6, 6);
    m.topLeftCorner(3, 3) = w * resolve(spec.epsilon, grid, p, 3, 3);
    m.bottomRightCorner(3, 3) = -checked_inverse(w * resolve(spec.mu, grid, p, 3, 3), p, "mu");
    return m;
  });
}

LField build_brinkman(const BrinkmanSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  require_dimension(grid, 3, "brinkman");
  const cplx w = spec.omega;
  return fill(grid, {Block::sym_matrix(3), Block::vector(3)}, Orientation::direct,
              [&](std::size_t p) {
                const MatrixXcd kinv =
                    checked_inverse(resolve(spec.permeability, grid, p, 3, 3), p, "permeability");
                const MatrixXcd bracket =
                    w * resolve(spec.rho, grid, p, 3, 3) + I1 * resolve(spec.eta, grid, p) * kinv;
                MatrixXcd m = MatrixXcd::Zero(9, 9);
                m.topLeftCorner(6, 6) = I1 * resolve(spec.viscosity, grid, p, 6, 6);
                m.bottomRightCorner(3, 3) = -checked_inverse(bracket, p, "Brinkman bracket");
                return m;
              });
}

LField build_oseen_inverse(const OseenSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  require_dimension(grid, 3, "oseen");
  const cplx w = spec.omega;
  const MatrixXcd lh = hydrostatic_projection(3).cast<cplx>();
  const MatrixXcd ls = shear_projection(3).cast<cplx>();
  return fill(grid, {Block::matrix(3), Block::vector(3)}, Orientation::inverse,
              [&](std::size_t p) {
                const cplx kappa = resolve(spec.kappa, grid, p);
                const cplx eta_b = resolve(spec.bulk_viscosity, grid, p);
                const cplx eta = resolve(spec.viscosity, grid, p);
                const MatrixXcd c = (kappa - I1 * w * eta_b) * lh / 3.0 - 2.0 * I1 * w * eta * ls;
                const MatrixXcd u = resolve(spec.velocity, grid, p, 3, 1);
                MatrixXcd m = MatrixXcd::Zero(12, 12);
                m.topLeftCorner(9, 9) = expand_rank4(c, 3);
                for (int j = 0; j < 3; ++j)
                {
                  for (int a = 0; a < 3; ++a)
                  {
                    m(9 + j, a * 3 + j) = u(a, 0);
                  }
                }
                m.bottomRightCorner(3, 3) = -w * resolve(spec.rho, grid, p, 3, 3);
                return m;
              });
}

LField build_ns_perturbation(const NavierStokesSpec &spec, const Grid &grid)
{
  const int d = spec.dimension;
  require_dimension(grid, static_cast<std::size_t>(d), "navier-stokes");
  if (!spec.stationary)
  {
    require_frequency(spec.omega);
  }
  double penalty = 0.0;
  if (spec.penalty)
  {
    penalty = *spec.penalty;
  }
  else
  {
    double eta_max = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p)
    {
      eta_max = std::max(eta_max, std::abs(2.0 * resolve(spec.viscosity, grid, p)));
    }
    penalty = 1e8 * eta_max;
  }
  if (!(penalty > 0.0) || !std::isfinite(penalty))
  {
    throw Error(ErrorCode::invalid_argument, "incompressibility penalty must be positive and finite");
  }
  const int n = d * d;
  const MatrixXcd lh = hydrostatic_projection(d).cast<cplx>();
  const MatrixXcd ls = shear_projection(d).cast<cplx>();
  const cplx w = spec.omega;
  const cplx rho = spec.rho;
  return fill(grid, {Block::matrix(d), Block::vector(d)}, Orientation::direct, [&](std::size_t p) {
    const cplx eta = resolve(spec.viscosity, grid, p);
    const MatrixXcd v = resolve(spec.velocity, grid, p, d, 1);
    const MatrixXcd grad_v = resolve(spec.velocity_gradient, grid, p, d, d);
    MatrixXcd m = MatrixXcd::Zero(n + d, n + d);
    m.topLeftCorner(n, n) = expand_rank4(2.0 * eta * ls + penalty * lh, d);
    for (int j = 0; j < d; ++j)
    {
      for (int a = 0; a < d; ++a)
      {
        m(n + j, a * d + j) = rho * v(a, 0);
      }
    }
    if (spec.stationary)
    {
      m.bottomRightCorner(d, d) = rho * grad_v.transpose();
    }
    else
    {
      const MatrixXcd rho_tilde =
          rho * (MatrixXcd::Identity(d, d) + I1 * grad_v.transpose() / w);
      m.bottomRightCorner(d, d) = -I1 * w * rho_tilde;
    }
    return m;
  });
}

LField build_thermoacoustic(const ThermoacousticSpec &spec, const Grid &grid)
{
  require_frequency(spec.omega);
  require_dimension(grid, 3, "thermoacoustic");
  if (spec.beta_T == cplx{0.0})
  {
    throw Error(ErrorCode::invalid_argument, "isothermal compressibility must be nonzero");
  }
  const cplx w = spec.omega;
  const cplx T0 = spec.T0;
  const cplx beta = spec.beta_T;
  const cplx a0 = spec.alpha0;
  const MatrixXcd visc = expand_rank4(
      spec.bulk_viscosity * hydrostatic_projection(3).cast<cplx>() / 3.0 +
          2.0 * spec.viscosity * shear_projection(3).cast<cplx>(),
      3);
  const Eigen::VectorXcd vi = vec_identity(3).cast<cplx>();
  const cplx thermal = w * a0 * a0 * T0 * T0 / beta - w * spec.rho0 * spec.heat_capacity * T0;
  return fill(grid, {Block::matrix(3), Block::vector(3), Block::vector(3), Block::scalar()},
              Orientation::direct, [&](std::size_t p) {
                MatrixXcd m = MatrixXcd::Zero(16, 16);
                m.topLeftCorner(9, 9) = I1 * visc + vi * vi.transpose() / (w * beta);
                m.block(9, 9, 3, 3) = -w * spec.rho0 * MatrixXcd::Identity(3, 3);
                m.block(12, 12, 3, 3) = I1 * resolve(spec.conductivity, grid, p, 3, 3) * T0;
                m.block(0, 15, 9, 1) = -I1 * a0 * T0 * vi / beta;
                m.block(15, 0, 1, 9) = I1 * a0 * T0 * vi.transpose() / beta;
                m(15, 15) = thermal;
                return m;
              });
}

LField build_love(const LoveSpec &spec, const Grid &grid)
{
  require_dimension(grid, 1, "love");
  const cplx w = spec.omega;
  const double k1 = spec.k1;
  return fill(grid, {Block::vector(1), Block::scalar()}, Orientation::direct, [&](std::size_t p) {
    const cplx mu = resolve(spec.mu, grid, p);
    if (!(mu.real() > 0.0))
    {
      throw Error(ErrorCode::invalid_argument,
                  "shear modulus must be positive at point " + std::to_string(p));
    }
    const cplx rho = resolve(spec.rho, grid, p);
    MatrixXcd m = MatrixXcd::Zero(2, 2);
    m(0, 0) = mu;
    m(1, 1) = k1 * k1 * mu - w * w * rho;
    return m;
  });
}

LField build_schrodinger(const SchrodingerSpec &spec, const Grid &grid)
{
  const int n = static_cast<int>(grid.dimension());
  if (spec.A.rows() != n || spec.A.cols() != n)
  {
    throw Error(ErrorCode::shape, "kinetic matrix A must match the configuration dimension");
  }
  if (!spec.A.isApprox(spec.A.transpose(), 1e-12) ||
      Eigen::LLT<Eigen::MatrixXd>(spec.A).info() != Eigen::Success)
  {
    throw Error(ErrorCode::invalid_argument, "kinetic matrix A must be symmetric positive definite");
  }
  const MatrixXcd a = spec.A.cast<cplx>();
  return fill(grid, {Block::vector(n), Block::scalar()}, Orientation::direct, [&](std::size_t p) {
    MatrixXcd m = MatrixXcd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = -a;
    m(n, n) = spec.energy - resolve(spec.potential, grid, p);
    return m;
  });
}

LField build(const MaterialSpec &spec, const Grid &grid)
{
  return std::visit(
      [&](const auto &s) -> LField {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AcousticsSpec>)
          return build_acoustics(s, grid);
        else if constexpr (std::is_same_v<S, ElastodynamicsSpec>)
          return build_elastodynamics(s, grid);
        else if constexpr (std::is_same_v<S, MaxwellSpec>)
          return build_maxwell(s, grid);
        else if constexpr (std::is_same_v<S, BrinkmanSpec>)
          return build_brinkman(s, grid);
        else if constexpr (std::is_same_v<S, OseenSpec>)
          return build_oseen_inverse(s, grid);
        else if constexpr (std::is_same_v<S, NavierStokesSpec>)
          return build_ns_perturbation(s, grid);
        else if constexpr (std::is_same_v<S, ThermoacousticSpec>)
          return build_thermoacoustic(s, grid);
        else if constexpr (std::is_same_v<S, LoveSpec>)
          return build_love(s, grid);
        else
          return build_schrodinger(s, grid);
      },
      spec);
}

Projector projector_for(const MaterialSpec &spec, const Grid &grid)
{
  const int d = static_cast<int>(grid.dimension());
  return std::visit(
      [&](const auto &s) -> Projector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AcousticsSpec>)
          return helmholtz_projector(d);
        else if constexpr (std::is_same_v<S, ElastodynamicsSpec>)
          return elastic_projector(d);
        else if constexpr (std::is_same_v<S, MaxwellSpec>)
          return maxwell_projector();
        else if constexpr (std::is_same_v<S, BrinkmanSpec>)
          return brinkman_projector();
        else if constexpr (std::is_same_v<S, OseenSpec>)
          // Stored matrix maps (sigma, div sigma) back onto the velocity-gradient pair.
          return complement(elastic_projector(3));
        else if constexpr (std::is_same_v<S, NavierStokesSpec>)
          return elastic_projector(s.dimension);
        else if constexpr (std::is_same_v<S, ThermoacousticSpec>)
          return thermoacoustic_projector();
        else if constexpr (std::is_same_v<S, LoveSpec>)
          return love_projector();
        else
          return schrodinger_projector(d);
      },
      spec);
}

ScalarParam pair_potential(std::function<cplx(std::span<const double>, std::span<const double>)> v,
                           int d_space)
{
  const auto d = static_cast<std::size_t>(d_space);
  return Sampled<cplx>{[v = std::move(v), d](std::span<const double> x) {
    if (x.size() < 2 * d)
    {
      throw Error(ErrorCode::shape, "pair potential needs at least two electrons");
    }
    return v(x.subspan(0, d), x.subspan(d, d));
  }};
}

PassivityReport passivity_check(const LField &L, double tolerance)
{
  PassivityReport report;
  report.min_eigenvalue.resize(L.points());
  parallel_for(L.points(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
    {
      const MatrixXcd m = L.at(p);
      const MatrixXcd im = (m - m.adjoint()) / (2.0 * I1);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(im, Eigen::EigenvaluesOnly);
      report.min_eigenvalue[p] = eig.eigenvalues().minCoeff();
    }
  });
  report.global_min = report.min_eigenvalue.empty()
                          ? 0.0
                          : *std::min_element(report.min_eigenvalue.begin(),
                                              report.min_eigenvalue.end());
  for (std::size_t p = 0; p < L.points(); ++p)
  {
    if (report.min_eigenvalue[p] < tolerance)
    {
      report.failing_points.push_back(p);
    }
  }
  report.passed = report.failing_points.empty();
  return report;
}

LField phase_rotation(const LField &L, double theta)
{
  LField out = L;
  const cplx phase = std::polar(1.0, theta);
  for (std::size_t p = 0; p < out.points(); ++p)
  {
    out.at(p) *= phase;
  }
  return out;
}

double find_rotation(const LField &L)
{
  constexpr double step = 1e-3;
  const int steps = static_cast<int>(std::floor(std::numbers::pi / step));
  // Im(e^{i t} L) = cos t Im L + sin t Re L, with Hermitian parts taken per point.
  std::vector<MatrixXcd> re(L.points());
  std::vector<MatrixXcd> im(L.points());
  for (std::size_t p = 0; p < L.points(); ++p)
  {
    const MatrixXcd m = L.at(p);
    re[p] = (m + m.adjoint()) / 2.0;
    im[p] = (m - m.adjoint()) / (2.0 * I1);
  }
  int best_start = -1;
  int best_length = 0;
  int run_start = -1;
  for (int j = 1; j <= steps; ++j)
  {
    const double t = j * step;
    bool ok = t < std::numbers::pi;
    for (std::size_t p = 0; ok && p < L.points(); ++p)
    {
      const MatrixXcd h = std::cos(t) * im[p] + std::sin(t) * re[p];
      Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
      ok = eig.eigenvalues().minCoeff() > 0.0;
    }
    if (ok && run_start < 0)
    {
      run_start = j;
    }
    if ((!ok || j == steps) && run_start >= 0)
    {
      const int last = ok ? j : j - 1;
      if (last - run_start + 1 > best_length)
      {
        best_length = last - run_start + 1;
        best_start = run_start;
      }
      run_start = -1;
    }
  }
  if (best_start < 0)
  {
    throw Error(ErrorCode::rotation_not_found,
                "no rotation angle in (0, pi) gives a positive definite imaginary part");
  }
  return step * (best_start + (best_length - 1) / 2.0);
}

LField invert_blockwise(const LField &L)
{
  LField out(L.grid(), L.layout(),
             L.orientation() == Orientation::direct ? Orientation::inverse : Orientation::direct);
  for (std::size_t p = 0; p < L.points(); ++p)
  {
    out.at(p) = checked_inverse(L.at(p), p, "material tensor");
  }
  return out;
}

}  // namespace gammasolve
