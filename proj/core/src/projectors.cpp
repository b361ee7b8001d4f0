// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/projectors.hpp"

#include <sstream>

#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"
#include "gammasolve/tensor_algebra.hpp"

namespace gammasolve
{

namespace
{

using Eigen::MatrixXcd;

constexpr cplx I1{0.0, 1.0};

double norm2(std::span<const double> k)
{
  double s = 0.0;
  for (double v : k)
  {
    s += v * v;
  }
  return s;
}

std::string format_k(std::span<const double> k)
{
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < k.size(); ++i)
  {
    os << (i ? ", " : "") << k[i];
  }
  os << ")";
  return os.str();
}

void require_dimension(std::span<const double> k, std::size_t d, const char *what)
{
  if (k.size() != d)
  {
    throw Error(ErrorCode::shape, std::string(what) + " expects a wavevector of length " +
                                      std::to_string(d));
  }
}

// Brinkman D(ik) m = i sym(m (x) k), packed.
MatrixXcd brinkman_D(std::span<const double> k)
{
  MatrixXcd D(6, 3);
  for (int a = 0; a < 3; ++a)
  {
    MatrixXcd m = MatrixXcd::Zero(3, 3);
    for (int b = 0; b < 3; ++b)
    {
      m(a, b) += 0.5 * I1 * k[b];
      m(b, a) += 0.5 * I1 * k[b];
    }
    D.col(a) = mandel(m);
  }
  return D;
}

}  // namespace

DSymbol helmholtz_D(int d)
{
  return {d + 1, 1, [d](std::span<const double> k) {
            require_dimension(k, static_cast<std::size_t>(d), "helmholtz_D");
            MatrixXcd D(d + 1, 1);
            for (int a = 0; a < d; ++a)
            {
              D(a, 0) = I1 * k[a];
            }
            D(d, 0) = 1.0;
            return D;
          }};
}

DSymbol maxwell_D()
{
  return {6, 3, [](std::span<const double> k) {
            require_dimension(k, 3, "maxwell_D");
            MatrixXcd D(6, 3);
            D.topRows(3).setIdentity();
            D.bottomRows(3) = I1 * cross_matrix(k).cast<cplx>();
            return D;
          }};
}

DSymbol elastic_D(int d)
{
  return {d * d + d, d, [d](std::span<const double> k) {
            require_dimension(k, static_cast<std::size_t>(d), "elastic_D");
            MatrixXcd D = MatrixXcd::Zero(d * d + d, d);
            for (int j = 0; j < d; ++j)
            {
              for (int a = 0; a < d; ++a)
              {
                D(a * d + j, j) = I1 * k[a];
              }
              D(d * d + j, j) = 1.0;
            }
            return D;
          }};
}

DSymbol divergence_D(int d)
{
  return {1, d, [d](std::span<const double> k) {
            require_dimension(k, static_cast<std::size_t>(d), "divergence_D");
            MatrixXcd D(1, d);
            for (int a = 0; a < d; ++a)
            {
              D(0, a) = I1 * k[a];
            }
            return D;
          }};
}

MatrixXcd gamma_from_D(const DSymbol &D, std::span<const double> k)
{
  const MatrixXcd m = D.evaluate(k);
  if (m.rows() != D.field_components || m.cols() != D.potential_components)
  {
    throw Error(ErrorCode::shape, "D symbol returned a matrix of the wrong shape");
  }
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto &sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(0) > 0.0))
  {
    throw Error(ErrorCode::degenerate_symbol, "D(ik) vanishes at k = " + format_k(k));
  }
  const double cutoff = 1e-12 * sigma(0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff)
  {
    ++rank;
  }
  const MatrixXcd u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

MatrixXcd gamma_helmholtz(std::span<const double> k)
{
  const int d = static_cast<int>(k.size());
  const double s = 1.0 / (norm2(k) + 1.0);
  MatrixXcd g(d + 1, d + 1);
  for (int a = 0; a < d; ++a)
  {
    for (int b = 0; b < d; ++b)
    {
      g(a, b) = s * k[a] * k[b];
    }
    g(a, d) = s * I1 * k[a];
    g(d, a) = -s * I1 * k[a];
  }
  g(d, d) = s;
  return g;
}

MatrixXcd gamma_maxwell(std::span<const double> k)
{
  require_dimension(k, 3, "gamma_maxwell");
  const Eigen::Vector3d kv(k[0], k[1], k[2]);
  MatrixXcd w(6, 3);
  w.topRows(3).setIdentity();
  w.bottomRows(3) = I1 * cross_matrix(k).cast<cplx>();
  const Eigen::Matrix3d inner = Eigen::Matrix3d::Identity() + kv * kv.transpose();
  return w * inner.cast<cplx>() * w.adjoint() / (kv.squaredNorm() + 1.0);
}

MatrixXcd gamma_brinkman(std::span<const double> k)
{
  require_dimension(k, 3, "gamma_brinkman");
  const MatrixXcd D = brinkman_D(k);
  MatrixXcd g(9, 3);
  g.topRows(6) = D;
  g.bottomRows(3).setIdentity();
  const MatrixXcd inner = D.adjoint() * D + MatrixXcd::Identity(3, 3);
  const MatrixXcd gamma2 = g * inner.inverse() * g.adjoint();
  return MatrixXcd::Identity(9, 9) - gamma2;
}

MatrixXcd gamma_elastic(std::span<const double> k)
{
  const int d = static_cast<int>(k.size());
  const double s = 1.0 / (norm2(k) + 1.0);
  MatrixXcd g = MatrixXcd::Zero(d * d + d, d * d + d);
  for (int j = 0; j < d; ++j)
  {
    const int scalar = d * d + j;
    for (int a = 0; a < d; ++a)
    {
      for (int b = 0; b < d; ++b)
      {
        g(a * d + j, b * d + j) = s * k[a] * k[b];
      }
      g(a * d + j, scalar) = s * I1 * k[a];
      g(scalar, a * d + j) = -s * I1 * k[a];
    }
    g(scalar, scalar) = s;
  }
  return g;
}

MatrixXcd gamma_thermoacoustic(std::span<const double> k)
{
  require_dimension(k, 3, "gamma_thermoacoustic");
  MatrixXcd g = MatrixXcd::Zero(16, 16);
  g.topLeftCorner(12, 12) = gamma_elastic(k);
  g.bottomRightCorner(4, 4) = gamma_helmholtz(k);
  return g;
}

MatrixXcd gamma_schrodinger(std::span<const double> k)
{
  return gamma_helmholtz(k);
}

MatrixXcd gamma_surface_love(double k3)
{
  const double k[1] = {k3};
  return gamma_helmholtz(k);
}

Projector helmholtz_projector(int d)
{
  return {"helmholtz", BlockLayout{Block::vector(d), Block::scalar()},
          static_cast<std::size_t>(d), [](std::span<const double> k) { return gamma_helmholtz(k); }};
}

Projector maxwell_projector()
{
  return {"maxwell", BlockLayout{Block::vector(3), Block::vector(3)}, 3,
          [](std::span<const double> k) { return gamma_maxwell(k); }};
}

Projector brinkman_projector()
{
  return {"brinkman", BlockLayout{Block::sym_matrix(3), Block::vector(3)}, 3,
          [](std::span<const double> k) { return gamma_brinkman(k); }};
}

Projector elastic_projector(int d)
{
  return {"elastic", BlockLayout{Block::matrix(d), Block::vector(d)},
          static_cast<std::size_t>(d), [](std::span<const double> k) { return gamma_elastic(k); }};
}

Projector thermoacoustic_projector()
{
  return {"thermoacoustic",
          BlockLayout{Block::matrix(3), Block::vector(3), Block::vector(3), Block::scalar()}, 3,
          [](std::span<const double> k) { return gamma_thermoacoustic(k); }};
}

Projector schrodinger_projector(int dimension)
{
  return {"schrodinger", BlockLayout{Block::vector(dimension), Block::scalar()},
          static_cast<std::size_t>(dimension),
          [](std::span<const double> k) { return gamma_schrodinger(k); }};
}

Projector love_projector()
{
  return {"love", BlockLayout{Block::vector(1), Block::scalar()}, 1,
          [](std::span<const double> k) { return gamma_surface_love(k[0]); }};
}

Projector surface_projector(const Projector &base, double k1)
{
  if (base.wave_dimension != 3)
  {
    throw Error(ErrorCode::invalid_argument, "surface projector needs a 3D base builder");
  }
  return {base.name + "-surface", base.layout, 1,
          [symbol = base.symbol, k1](std::span<const double> k) {
            const double k3d[3] = {k1, 0.0, k[0]};
            return symbol(k3d);
          }};
}

Projector projector_from_D(std::string name, BlockLayout layout, std::size_t wave_dimension,
                           DSymbol D)
{
  if (D.field_components != layout.total_components())
  {
    throw Error(ErrorCode::shape, "D symbol does not match the field layout");
  }
  return {std::move(name), std::move(layout), wave_dimension,
          [D = std::move(D)](std::span<const double> k) { return gamma_from_D(D, k); }};
}

Projector complement(const Projector &p)
{
  const int c = p.layout.total_components();
  return {p.name + "-complement", p.layout, p.wave_dimension,
          [symbol = p.symbol, c](std::span<const double> k) {
            return MatrixXcd(MatrixXcd::Identity(c, c) - symbol(k));
          }};
}

SpectralProjection::SpectralProjection(Projector projector, Grid grid, std::vector<double> shift,
                                       std::size_t cache_budget_bytes)
  : projector_(std::move(projector)), grid_(std::move(grid)), shift_(std::move(shift))
{
  if (projector_.wave_dimension != grid_.dimension())
  {
    throw Error(ErrorCode::shape, "projector '" + projector_.name + "' expects a " +
                                      std::to_string(projector_.wave_dimension) +
                                      "-dimensional grid");
  }
  if (!shift_.empty() && shift_.size() != grid_.dimension())
  {
    throw Error(ErrorCode::shape, "Bloch shift length does not match the grid dimension");
  }
  const std::size_t c = static_cast<std::size_t>(projector_.layout.total_components());
  const std::size_t bytes = grid_.points() * c * c * sizeof(cplx);
  if (bytes <= cache_budget_bytes)
  {
    std::vector<cplx> table(grid_.points() * c * c);
    parallel_for(grid_.points(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p)
      {
        const MatrixXcd g = symbol_at(p);
        std::copy(g.data(), g.data() + c * c, table.begin() + static_cast<std::ptrdiff_t>(p * c * c));
      }
    });
    cache_ = std::move(table);
  }
}

MatrixXcd SpectralProjection::symbol_at(std::size_t point) const
{
  const int c = projector_.layout.total_components();
  if (!cache_.empty())
  {
    return Eigen::Map<const MatrixXcd>(cache_.data() + point * c * c, c, c);
  }
  std::vector<double> k(grid_.dimension());
  grid_.wavevector_of(point, k);
  for (std::size_t a = 0; a < shift_.size(); ++a)
  {
    k[a] += shift_[a];
  }
  MatrixXcd g = projector_.symbol(k);
  if (g.rows() != c || g.cols() != c)
  {
    throw Error(ErrorCode::shape, "projector symbol does not match its layout");
  }
  return g;
}

void SpectralProjection::apply(std::span<cplx> values, bool complement) const
{
  const int c = projector_.layout.total_components();
  if (values.size() != grid_.points() * static_cast<std::size_t>(c))
  {
    throw Error(ErrorCode::shape, "field size does not match projector and grid");
  }
  parallel_for(grid_.points(), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXcd tmp(c);
    for (std::size_t p = begin; p < end; ++p)
    {
      Eigen::Map<Eigen::VectorXcd> x(values.data() + p * c, c);
      if (!cache_.empty())
      {
        tmp.noalias() = Eigen::Map<const MatrixXcd>(cache_.data() + p * c * c, c, c) * x;
      }
      else
      {
        tmp.noalias() = symbol_at(p) * x;
      }
      if (complement)
      {
        x -= tmp;
      }
      else
      {
        x = tmp;
      }
    }
  });
}

void SpectralProjection::apply(Field &f, bool complement) const
{
  if (f.representation() != Representation::fourier_space)
  {
    throw Error(ErrorCode::representation, "projectors act on Fourier-space fields");
  }
  if (!(f.layout() == projector_.layout) || !(f.grid() == grid_))
  {
    throw Error(ErrorCode::shape, "field layout " + f.layout().describe() +
                                      " does not match projector '" + projector_.name + "' " +
                                      projector_.layout.describe());
  }
  apply(f.values(), complement);
}

Field apply_projector(const Projector &projector, const Field &f, std::span<const double> shift)
{
  SpectralProjection op(projector, f.grid(), std::vector<double>(shift.begin(), shift.end()), 0);
  Field out = f;
  op.apply(out);
  return out;
}

}  // namespace gammasolve
