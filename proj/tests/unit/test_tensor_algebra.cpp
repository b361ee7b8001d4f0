// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gammasolve/tensor_algebra.hpp"

namespace
{

using namespace gammasolve;
using Eigen::MatrixXcd;

MatrixXcd random_matrix(int d, std::mt19937_64 &rng)
{
  std::normal_distribution<double> n;
  MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
  {
    for (int j = 0; j < d; ++j)
    {
      m(i, j) = {n(rng), n(rng)};
    }
  }
  return m;
}

Eigen::VectorXcd row_major(const MatrixXcd &m)
{
  Eigen::VectorXcd v(m.size());
  for (int i = 0; i < m.rows(); ++i)
  {
    for (int j = 0; j < m.cols(); ++j)
    {
      v(i * m.cols() + j) = m(i, j);
    }
  }
  return v;
}

TEST(Mandel, OrderingIsDiagonalFirst)
{
  EXPECT_EQ(mandel_index(0, 0, 3), 0);
  EXPECT_EQ(mandel_index(2, 2, 3), 2);
  EXPECT_EQ(mandel_index(0, 1, 3), 3);
  EXPECT_EQ(mandel_index(1, 0, 3), 3);
  EXPECT_EQ(mandel_index(0, 2, 3), 4);
  EXPECT_EQ(mandel_index(1, 2, 3), 5);
}

TEST(Mandel, PreservesFrobeniusProducts)
{
  std::mt19937_64 rng(1);
  for (int d : {1, 2, 3})
  {
    MatrixXcd a = random_matrix(d, rng);
    MatrixXcd b = random_matrix(d, rng);
    a = (a + a.transpose()).eval();
    b = (b + b.transpose()).eval();
    const cplx frob = (a.adjoint() * b).trace();
    EXPECT_LT(std::abs(mandel(a).dot(mandel(b)) - frob), 1e-12);
    EXPECT_LT((unmandel(mandel(a), d) - a).norm(), 1e-13);
  }
}

TEST(Mandel, PackingMatrixIsAPartialIsometry)
{
  for (int d : {2, 3})
  {
    const Eigen::MatrixXd P = packing_matrix(d);
    EXPECT_LT((P * P.transpose() - Eigen::MatrixXd::Identity(sym_size(d), sym_size(d))).norm(),
              1e-14);
  }
}

TEST(Isotropic, ProjectionsAreComplementary)
{
  for (int d : {2, 3})
  {
    const Eigen::MatrixXd h = hydrostatic_projection(d);
    const Eigen::MatrixXd s = shear_projection(d);
    const auto n = sym_size(d);
    EXPECT_LT((h * h - h).norm(), 1e-14);
    EXPECT_LT((s * s - s).norm(), 1e-14);
    EXPECT_LT((h + s - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-14);
    EXPECT_NEAR(h.trace(), 1.0, 1e-14);
  }
}

TEST(Isotropic, ActsOnTraceAndDeviator)
{
  // C e = 3 kappa (tr e / 3) I + 2 mu dev e.
  std::mt19937_64 rng(2);
  MatrixXcd e = random_matrix(3, rng);
  e = (e + e.transpose()).eval();
  const cplx kappa{2.0, 0.1};
  const cplx mu{0.7, 0.0};
  const MatrixXcd out = unmandel(isotropic_tensor(3, kappa, mu) * mandel(e), 3);
  const MatrixXcd I = MatrixXcd::Identity(3, 3);
  const MatrixXcd dev = e - e.trace() / 3.0 * I;
  const MatrixXcd expected = kappa * e.trace() * I + 2.0 * mu * dev;
  EXPECT_LT((out - expected).norm(), 1e-12);
}

TEST(Expand, KillsAntisymmetricInputs)
{
  std::mt19937_64 rng(3);
  const MatrixXcd C = isotropic_tensor(3, 1.5, 0.5);
  const MatrixXcd full = expand_rank4(C, 3);
  MatrixXcd a = random_matrix(3, rng);
  const MatrixXcd anti = a - a.transpose();
  EXPECT_LT((full * row_major(anti)).norm(), 1e-13);
  const MatrixXcd sym = a + a.transpose();
  const Eigen::VectorXcd direct = row_major(unmandel(C * mandel(sym), 3));
  EXPECT_LT((full * row_major(sym) - direct).norm(), 1e-12);
}

TEST(Cross, MatchesCrossProduct)
{
  const double k[3] = {1.0, 0.0, 0.0};
  const Eigen::Matrix3d eta = cross_matrix(k);
  EXPECT_LT((eta * Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitZ()).norm(), 1e-15);
  EXPECT_LT((eta * Eigen::Vector3d::UnitZ() + Eigen::Vector3d::UnitY()).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(vec_identity(3).sum(), 3.0);
}

}  // namespace
