// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/tensor_algebra.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "gammasolve/errors.hpp"

namespace gammasolve
{

int mandel_index(int i, int j, int d)
{
  if (i == j)
  {
    return i;
  }
  if (i > j)
  {
    std::swap(i, j);
  }
  // Off-diagonals row-major after the d diagonal slots.
  int index = d;
  for (int r = 0; r < i; ++r)
  {
    index += d - r - 1;
  }
  return index + (j - i - 1);
}

Eigen::MatrixXd packing_matrix(int d)
{
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(sym_size(d), d * d);
  const double w = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < d; ++i)
  {
    for (int j = 0; j < d; ++j)
    {
      p(mandel_index(i, j, d), i * d + j) = i == j ? 1.0 : w;
    }
  }
  return p;
}

Eigen::VectorXcd mandel(const Eigen::MatrixXcd &m)
{
  if (m.rows() != m.cols())
  {
    throw Error(ErrorCode::shape, "mandel packing needs a square matrix");
  }
  const int d = static_cast<int>(m.rows());
  Eigen::MatrixXcd mt = m.transpose();
  Eigen::Map<const Eigen::VectorXcd> flat(mt.data(), d * d);
  return packing_matrix(d).cast<cplx>() * flat;
}

Eigen::MatrixXcd unmandel(const Eigen::VectorXcd &v, int d)
{
  if (v.size() != sym_size(d))
  {
    throw Error(ErrorCode::shape, "packed vector has the wrong length");
  }
  const Eigen::VectorXcd flat = packing_matrix(d).transpose().cast<cplx>() * v;
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
  {
    for (int j = 0; j < d; ++j)
    {
      m(i, j) = flat(i * d + j);
    }
  }
  return m;
}

Eigen::MatrixXd hydrostatic_projection(int d)
{
  Eigen::VectorXd h = Eigen::VectorXd::Zero(sym_size(d));
  h.head(d).setOnes();
  return h * h.transpose() / static_cast<double>(d);
}

Eigen::MatrixXd shear_projection(int d)
{
  return Eigen::MatrixXd::Identity(sym_size(d), sym_size(d)) - hydrostatic_projection(d);
}

Eigen::MatrixXcd isotropic_tensor(int d, cplx bulk, cplx shear)
{
  return 3.0 * bulk * hydrostatic_projection(d).cast<cplx>() +
         2.0 * shear * shear_projection(d).cast<cplx>();
}

Eigen::MatrixXcd expand_rank4(const Eigen::MatrixXcd &packed, int d)
{
  if (packed.rows() != sym_size(d) || packed.cols() != sym_size(d))
  {
    throw Error(ErrorCode::shape, "rank-4 tensor must be sym_size(d) square");
  }
  const Eigen::MatrixXcd p = packing_matrix(d).cast<cplx>();
  return p.transpose() * packed * p;
}

Eigen::VectorXd vec_identity(int d)
{
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d * d);
  for (int i = 0; i < d; ++i)
  {
    v(i * d + i) = 1.0;
  }
  return v;
}

Eigen::Matrix3d cross_matrix(std::span<const double> k)
{
  if (k.size() != 3)
  {
    throw Error(ErrorCode::shape, "cross product needs a 3-vector");
  }
  Eigen::Matrix3d eta;
  eta << 0.0, -k[2], k[1], k[2], 0.0, -k[0], -k[1], k[0], 0.0;
  return eta;
}

}  // namespace gammasolve
