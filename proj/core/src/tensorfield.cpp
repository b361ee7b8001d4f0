// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/tensorfield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "gammasolve/errors.hpp"
#include "gammasolve/parallel.hpp"

namespace gammasolve
{

int Block::components() const
{
  switch (kind)
  {
    case BlockKind::scalar:
      return 1;
    case BlockKind::vector:
      return dim;
    case BlockKind::matrix:
      return dim * dim;
    case BlockKind::sym_matrix:
      return dim * (dim + 1) / 2;
  }
  return 0;
}

BlockLayout::BlockLayout(std::initializer_list<Block> blocks)
  : BlockLayout(std::vector<Block>(blocks))
{
}

BlockLayout::BlockLayout(std::vector<Block> blocks) : blocks_(std::move(blocks))
{
  offsets_.reserve(blocks_.size());
  for (const auto &b : blocks_)
  {
    if (b.kind != BlockKind::scalar && b.dim < 1)
    {
      throw Error(ErrorCode::shape, "block dimension must be >= 1");
    }
    offsets_.push_back(total_);
    total_ += b.components();
  }
  if (total_ <= 0)
  {
    throw Error(ErrorCode::shape, "layout must have at least one component");
  }
}

std::string BlockLayout::describe() const
{
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < blocks_.size(); ++i)
  {
    if (i > 0)
    {
      os << ", ";
    }
    const auto &b = blocks_[i];
    switch (b.kind)
    {
      case BlockKind::scalar:
        os << "scalar";
        break;
      case BlockKind::vector:
        os << "vector(" << b.dim << ")";
        break;
      case BlockKind::matrix:
        os << "matrix(" << b.dim << ")";
        break;
      case BlockKind::sym_matrix:
        os << "sym_matrix(" << b.dim << ")";
        break;
    }
  }
  os << ")";
  return os.str();
}

Grid::Grid(std::vector<std::size_t> dims, std::vector<double> lengths)
  : dims_(std::move(dims)), lengths_(std::move(lengths))
{
  if (dims_.empty() || dims_.size() != lengths_.size())
  {
    throw Error(ErrorCode::shape, "grid needs matching non-empty dims and lengths");
  }
  points_ = 1;
  for (std::size_t i = 0; i < dims_.size(); ++i)
  {
    if (dims_[i] < 2)
    {
      throw Error(ErrorCode::shape, "every grid axis needs at least 2 points");
    }
    if (!(lengths_[i] > 0.0) || !std::isfinite(lengths_[i]))
    {
      throw Error(ErrorCode::shape, "every cell length must be positive");
    }
    points_ *= dims_[i];
  }
}

Grid Grid::cube(std::size_t dimension, std::size_t n, double length)
{
  return Grid(std::vector<std::size_t>(dimension, n), std::vector<double>(dimension, length));
}

double Grid::cell_volume() const
{
  double v = 1.0;
  for (double l : lengths_)
  {
    v *= l;
  }
  return v;
}

std::vector<std::size_t> Grid::unravel(std::size_t point) const
{
  std::vector<std::size_t> index(dims_.size());
  for (std::size_t a = dims_.size(); a-- > 0;)
  {
    index[a] = point % dims_[a];
    point /= dims_[a];
  }
  return index;
}

std::size_t Grid::ravel(std::span<const std::size_t> index) const
{
  if (index.size() != dims_.size())
  {
    throw Error(ErrorCode::bounds, "index rank does not match grid dimension");
  }
  std::size_t p = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a)
  {
    if (index[a] >= dims_[a])
    {
      throw Error(ErrorCode::bounds, "grid index out of range");
    }
    p = p * dims_[a] + index[a];
  }
  return p;
}

std::vector<double> Grid::position(std::size_t point) const
{
  const auto index = unravel(point);
  std::vector<double> x(dims_.size());
  for (std::size_t a = 0; a < dims_.size(); ++a)
  {
    x[a] = static_cast<double>(index[a]) * lengths_[a] / static_cast<double>(dims_[a]);
  }
  return x;
}

void Grid::wavevector_of(std::size_t point, std::span<double> k) const
{
  for (std::size_t a = dims_.size(); a-- > 0;)
  {
    const std::size_t m = point % dims_[a];
    point /= dims_[a];
    k[a] = 2.0 * std::numbers::pi * static_cast<double>(signed_frequency(m, dims_[a])) /
           lengths_[a];
  }
}

long signed_frequency(std::size_t m, std::size_t n)
{
  const long sm = static_cast<long>(m);
  const long sn = static_cast<long>(n);
  return 2 * sm < sn ? sm : sm - sn;
}

std::vector<double> wavevector(std::span<const std::size_t> index, const Grid &grid)
{
  const std::size_t p = grid.ravel(index);
  std::vector<double> k(grid.dimension());
  grid.wavevector_of(p, k);
  return k;
}

Field::Field(Grid grid, BlockLayout layout, Representation rep)
  : grid_(std::move(grid)), layout_(std::move(layout)), rep_(rep),
    values_(grid_.points() * static_cast<std::size_t>(layout_.total_components()))
{
}

Field::Field(Grid grid, BlockLayout layout, Representation rep, std::vector<cplx> values)
  : grid_(std::move(grid)), layout_(std::move(layout)), rep_(rep), values_(std::move(values))
{
  if (values_.size() != grid_.points() * static_cast<std::size_t>(layout_.total_components()))
  {
    throw Error(ErrorCode::shape, "value count does not match grid points x components");
  }
}

bool Field::all_finite() const
{
  for (const auto &v : values_)
  {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    {
      return false;
    }
  }
  return true;
}

namespace
{

Field transform(const Field &f, bool forward)
{
  Field out(f.grid(), f.layout(),
            forward ? Representation::fourier_space : Representation::real_space);
  detail::fft_interleaved(f.grid().dims(), f.components(), f.values().data(),
                          out.values().data(), forward);
  if (!out.all_finite())
  {
    throw Error(ErrorCode::non_finite, "transform produced non-finite values");
  }
  return out;
}

void require_same_shape(const Field &a, const Field &b, const char *what)
{
  if (!a.same_shape(b))
  {
    throw Error(ErrorCode::shape, std::string(what) + ": grid or layout mismatch");
  }
  if (a.representation() != b.representation())
  {
    throw Error(ErrorCode::representation, std::string(what) + ": representation mismatch");
  }
}

}  // namespace

Field to_fourier(const Field &f)
{
  if (f.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::representation, "to_fourier expects a real-space field");
  }
  return transform(f, true);
}

Field to_real(const Field &f)
{
  if (f.representation() != Representation::fourier_space)
  {
    throw Error(ErrorCode::representation, "to_real expects a Fourier-space field");
  }
  return transform(f, false);
}

cplx inner_product(const Field &f, const Field &g)
{
  require_same_shape(f, g, "inner_product");
  cplx sum = 0.0;
  const auto a = f.values();
  const auto b = g.values();
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    sum += std::conj(a[i]) * b[i];
  }
  return sum * (f.grid().cell_volume() / static_cast<double>(f.points()));
}

double norm(const Field &f)
{
  return std::sqrt(std::max(0.0, inner_product(f, f).real()));
}

Field axpy(cplx a, const Field &x, const Field &y)
{
  require_same_shape(x, y, "axpy");
  Field out = y;
  auto o = out.values();
  const auto xv = x.values();
  for (std::size_t i = 0; i < o.size(); ++i)
  {
    o[i] += a * xv[i];
  }
  return out;
}

Field scale(cplx a, const Field &x)
{
  Field out = x;
  for (auto &v : out.values())
  {
    v *= a;
  }
  return out;
}

Field pointwise_map(const PointMatrixFunction &m, const Field &x)
{
  Field out(x.grid(), x.layout(), x.representation());
  const int c = x.components();
  parallel_for(x.points(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
    {
      const Eigen::MatrixXcd mat = m(p);
      if (mat.rows() != c || mat.cols() != c)
      {
        throw Error(ErrorCode::shape, "pointwise_map matrix does not match layout");
      }
      Eigen::Map<const Eigen::VectorXcd> in(x.at(p).data(), c);
      Eigen::Map<Eigen::VectorXcd> o(out.at(p).data(), c);
      o.noalias() = mat * in;
    }
  });
  return out;
}

Eigen::VectorXcd field_mean(const Field &f)
{
  if (f.representation() != Representation::real_space)
  {
    throw Error(ErrorCode::representation, "field_mean expects a real-space field");
  }
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(f.components());
  for (std::size_t p = 0; p < f.points(); ++p)
  {
    mean += Eigen::Map<const Eigen::VectorXcd>(f.at(p).data(), f.components());
  }
  return mean / static_cast<double>(f.points());
}

}  // namespace gammasolve
