// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_TENSORFIELD_HPP
#define GAMMASOLVE_TENSORFIELD_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gammasolve
{

using cplx = std::complex<double>;

//
// Block structure of a supertensor value at one grid point.
//
// Component ordering inside a block:
//   scalar          1 component
//   vector(d)       d components
//   matrix(d)       d*d components, row-major; the row (first) index is the one a
//                   gradient produces and a divergence contracts
//   sym_matrix(d)   d(d+1)/2 components, diagonal first then off-diagonals row-major,
//                   off-diagonals stored with a sqrt(2) weight so that the plain
//                   component inner product equals the Frobenius inner product
//
enum class BlockKind : std::uint8_t
{
  scalar = 0,
  vector = 1,
  matrix = 2,
  sym_matrix = 3,
};

struct Block
{
  BlockKind kind = BlockKind::scalar;
  int dim = 1;

  static Block scalar() { return {BlockKind::scalar, 1}; }
  static Block vector(int d) { return {BlockKind::vector, d}; }
  static Block matrix(int d) { return {BlockKind::matrix, d}; }
  static Block sym_matrix(int d) { return {BlockKind::sym_matrix, d}; }

  int components() const;

  bool operator==(const Block &) const = default;
};

class BlockLayout
{
public:
  BlockLayout() = default;
  BlockLayout(std::initializer_list<Block> blocks);
  explicit BlockLayout(std::vector<Block> blocks);

  const std::vector<Block> &blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Block &block(std::size_t i) const { return blocks_.at(i); }
  int total_components() const { return total_; }
  // First component index of block i.
  int offset(std::size_t i) const { return offsets_.at(i); }
  std::string describe() const;

  bool operator==(const BlockLayout &other) const { return blocks_ == other.blocks_; }

private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int total_ = 0;
};

//
// Uniform periodic grid on a rectangular cell [0, L_1) x ... x [0, L_D).
// Points are numbered row-major (last axis fastest).
//
class Grid
{
public:
  Grid() = default;
  Grid(std::vector<std::size_t> dims, std::vector<double> lengths);
  static Grid cube(std::size_t dimension, std::size_t n, double length);

  const std::vector<std::size_t> &dims() const { return dims_; }
  const std::vector<double> &lengths() const { return lengths_; }
  std::size_t dimension() const { return dims_.size(); }
  std::size_t points() const { return points_; }
  double cell_volume() const;

  std::vector<std::size_t> unravel(std::size_t point) const;
  std::size_t ravel(std::span<const std::size_t> index) const;
  // Real-space coordinates x_i = m_i L_i / n_i.
  std::vector<double> position(std::size_t point) const;
  // Wavevector of a flat point index, written into k (size D).
  void wavevector_of(std::size_t point, std::span<double> k) const;

  bool operator==(const Grid &other) const
  {
    return dims_ == other.dims_ && lengths_ == other.lengths_;
  }

private:
  std::vector<std::size_t> dims_;
  std::vector<double> lengths_;
  std::size_t points_ = 0;
};

// Signed frequency in [-n/2, n/2); the Nyquist index of an even axis maps to -n/2.
long signed_frequency(std::size_t m, std::size_t n);

// k_i = 2 pi sigma(m_i) / L_i. Throws ErrorCode::bounds for out-of-range indices.
std::vector<double> wavevector(std::span<const std::size_t> index, const Grid &grid);

enum class Representation : std::uint8_t
{
  real_space = 0,
  fourier_space = 1,
};

//
// Complex supertensor field sampled on a grid. Storage is point-major,
// component-minor.
//
class Field
{
public:
  Field() = default;
  Field(Grid grid, BlockLayout layout, Representation rep = Representation::real_space);
  Field(Grid grid, BlockLayout layout, Representation rep, std::vector<cplx> values);

  const Grid &grid() const { return grid_; }
  const BlockLayout &layout() const { return layout_; }
  Representation representation() const { return rep_; }
  int components() const { return layout_.total_components(); }
  std::size_t points() const { return grid_.points(); }
  std::size_t size() const { return values_.size(); }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  std::vector<cplx> &storage() { return values_; }

  std::span<cplx> at(std::size_t point)
  {
    return {values_.data() + point * components(), static_cast<std::size_t>(components())};
  }
  std::span<const cplx> at(std::size_t point) const
  {
    return {values_.data() + point * components(), static_cast<std::size_t>(components())};
  }
  cplx &operator()(std::size_t point, int component)
  {
    return values_[point * components() + component];
  }
  const cplx &operator()(std::size_t point, int component) const
  {
    return values_[point * components() + component];
  }

  bool same_shape(const Field &other) const
  {
    return grid_ == other.grid_ && layout_ == other.layout_;
  }
  bool all_finite() const;

private:
  Grid grid_;
  BlockLayout layout_;
  Representation rep_ = Representation::real_space;
  std::vector<cplx> values_;
};

// Unitary DFT: F(k) = N^{-1/2} sum_x f(x) e^{-i k.x}.
Field to_fourier(const Field &f);
Field to_real(const Field &f);

// sum over points of <f(x), g(x)> (conjugate-linear in f) times cell_volume / points.
// Representation independent because the transform is unitary.
cplx inner_product(const Field &f, const Field &g);
double norm(const Field &f);

Field axpy(cplx a, const Field &x, const Field &y);
Field scale(cplx a, const Field &x);

// Applies a total_components x total_components matrix at every point.
using PointMatrixFunction = std::function<Eigen::MatrixXcd(std::size_t point)>;
Field pointwise_map(const PointMatrixFunction &m, const Field &x);

// Mean over points of each component (real-space fields only).
Eigen::VectorXcd field_mean(const Field &f);

}  // namespace gammasolve

#endif  // GAMMASOLVE_TENSORFIELD_HPP
