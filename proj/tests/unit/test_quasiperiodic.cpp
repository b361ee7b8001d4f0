// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gammasolve/errors.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/quasiperiodic.hpp"
#include "gammasolve_verify/verify.hpp"

namespace
{

using namespace gammasolve;
using Eigen::MatrixXcd;

constexpr double pi = std::numbers::pi;

struct Cell
{
  Grid grid{{8, 8}, {1.0, 1.0}};
  Projector gamma = helmholtz_projector(2);
  std::vector<double> k0{0.7, -0.4};

  Field zero_alpha() const { return Field(grid, BlockLayout{Block::scalar()}); }

  Field random_alpha(std::uint64_t seed) const
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    Field a(grid, BlockLayout{Block::scalar()});
    for (auto &v : a.values())
    {
      v = u(rng);
    }
    return a;
  }

  LField uniform(const MatrixXcd &m) const
  {
    LField L(grid, gamma.layout, Orientation::direct);
    for (std::size_t p = 0; p < grid.points(); ++p)
    {
      L.at(p) = m;
    }
    return L;
  }

  LField two_phase(double loss) const
  {
    AcousticsSpec s;
    s.omega = 1.1;
    s.kappa = Checkerboard<cplx>{{cplx{1.0, loss}, cplx{2.5, 2.0 * loss}}};
    return invert_blockwise(build_acoustics(s, grid));
  }

  SolverOptions options() const
  {
    SolverOptions o;
    o.tol = 1e-12;
    return o;
  }
};

TEST(Quasiperiodic, ScalarMaterialClosedForm)
{
  const Cell s;
  const cplx c{1.5, 0.5};
  const Eigen::Vector3cd s0(1.0, cplx{0.0, 2.0}, -0.5);
  const QuasiResult r = solve_quasiperiodic(s.uniform(c * MatrixXcd::Identity(3, 3)), s.gamma,
                                            QuasiSource(s.k0, s0, s.zero_alpha()), s.options());
  const MatrixXcd g = gamma_helmholtz(s.k0);
  EXPECT_LT((r.E0 - g * s0 / c).norm(), 1e-12);
  EXPECT_LT(norm(r.E_fluct), 1e-12);
}

TEST(Quasiperiodic, ConstantAnisotropicMaterialMatchesPseudoSolve)
{
  const Cell s;
  MatrixXcd m(3, 3);
  m << cplx{2.0, 0.3}, 0.4, 0.0, 0.4, cplx{1.0, 0.2}, 0.1, 0.0, 0.1, cplx{3.0, 0.1};
  const Eigen::Vector3cd s0(0.3, 1.0, cplx{0.0, -1.0});
  const QuasiResult r = solve_quasiperiodic(s.uniform(m), s.gamma,
                                            QuasiSource(s.k0, s0, s.zero_alpha()), s.options());
  const MatrixXcd g = gamma_helmholtz(s.k0);
  const MatrixXcd restricted = g * m * g;
  const Eigen::VectorXcd expected =
      restricted.completeOrthogonalDecomposition().pseudoInverse() * (g * s0);
  EXPECT_LT((r.E0 - expected).norm(), 1e-10 * expected.norm());
}

TEST(Quasiperiodic, FluctuationsHaveZeroMean)
{
  const Cell s;
  const QuasiResult r = solve_quasiperiodic(
      s.two_phase(0.2), s.gamma, QuasiSource(s.k0, Eigen::Vector3cd(1.0, 0.0, 0.5), s.random_alpha(1)),
      s.options());
  EXPECT_LT(field_mean(r.E_fluct).norm(), 1e-12 * norm(r.E_fluct));
  EXPECT_LT(field_mean(r.J_fluct).norm(), 1e-12 * norm(r.J_fluct));
}

TEST(Quasiperiodic, SourceMeanIsRemoved)
{
  const Cell s;
  Field alpha = s.random_alpha(3);
  for (auto &v : alpha.values())
  {
    v += 0.7;
  }
  const QuasiSource q(s.k0, Eigen::Vector3cd(1.0, 0.0, 0.0), alpha);
  EXPECT_LT(std::abs(field_mean(q.alpha())(0)), 1e-14);
}

TEST(Quasiperiodic, ReciprocalShiftReindexesSymbols)
{
  const Cell s;
  const std::vector<double> shifted{s.k0[0] + 2.0 * pi, s.k0[1]};
  const SpectralProjection a(s.gamma, s.grid, s.k0);
  const SpectralProjection b(s.gamma, s.grid, shifted);
  for (std::size_t i = 0; i + 1 < 4; ++i)
  {
    for (std::size_t j = 0; j < 8; ++j)
    {
      const std::size_t p = i * 8 + j;
      EXPECT_LT((b.symbol_at(p) - a.symbol_at(p + 8)).norm(), 1e-13) << i << "," << j;
    }
  }
}

TEST(Effective, ScalarMaterial)
{
  const Cell s;
  const cplx c{2.0, -0.5};
  const EffectiveTensors t =
      effective_tensors(s.uniform(c * MatrixXcd::Identity(3, 3)), s.gamma, s.k0, s.zero_alpha(),
                        s.options());
  EXPECT_LT((t.LE - gamma_helmholtz(s.k0) / c).norm(), 1e-12);
  EXPECT_EQ(t.k0, s.k0);
}

TEST(Effective, ColumnsSuperpose)
{
  const Cell s;
  const LField L = s.two_phase(0.1);
  const Field alpha = s.random_alpha(5);
  const SolverOptions o = s.options();
  const EffectiveTensors t = effective_tensors(L, s.gamma, s.k0, alpha, o);
  const QuasiResult r =
      solve_quasiperiodic(L, s.gamma, QuasiSource(s.k0, Eigen::Vector3cd(1.0, 1.0, 0.0), alpha), o);
  const Eigen::VectorXcd sum = t.LE.col(0) + t.LE.col(1);
  EXPECT_LE((r.E0 - sum).norm(), 2.0 * o.tol * 100.0 * sum.norm());
}

TEST(Effective, LinearInSmallModulation)
{
  const Cell s;
  const LField L = s.two_phase(0.1);
  const Field alpha = s.random_alpha(9);
  const double eps = 1e-3;
  auto at = [&](double scale_factor) {
    return effective_tensors(L, s.gamma, s.k0, scale(scale_factor, alpha), s.options()).LE;
  };
  const MatrixXcd zero = at(0.0);
  const MatrixXcd extrapolated = 2.0 * at(eps) - at(2.0 * eps);
  EXPECT_LE((extrapolated - zero).norm(), 1e-6);
}

TEST(Effective, FailingColumnsAreReported)
{
  const Cell s;
  SolverOptions o = s.options();
  o.max_iter = 1;
  try
  {
    effective_tensors(s.two_phase(0.1), s.gamma, s.k0, s.random_alpha(2), o);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::partial_result);
    EXPECT_NE(std::string(e.what()).find("column 0"), std::string::npos);
  }
}

}  // namespace
