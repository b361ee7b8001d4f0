// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gammasolve/errors.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/solver.hpp"
#include "gammasolve/tensor_algebra.hpp"

namespace
{

using namespace gammasolve;
using Eigen::MatrixXcd;

const cplx I{0.0, 1.0};

MatrixXcd diag(std::initializer_list<cplx> v)
{
  MatrixXcd m = MatrixXcd::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const cplx x : v)
  {
    m(i, i) = x;
    ++i;
  }
  return m;
}

void expect_close(const MatrixXcd &a, const MatrixXcd &b, double tol = 1e-14)
{
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LT((a - b).norm(), tol) << "got\n" << a << "\nexpected\n" << b;
}

ErrorCode code_of(const std::function<void()> &f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::guard;
}

LField uniform(const MatrixXcd &m, Orientation o = Orientation::direct)
{
  const Grid g({2}, {1.0});
  std::vector<Block> blocks;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    blocks.push_back(Block::scalar());
  }
  LField L(g, BlockLayout(blocks), o);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    L.at(p) = m;
  }
  return L;
}

const Grid grid3({2, 2, 2}, {1.0, 1.0, 1.0});

TEST(Acoustics, UnitMaterial)
{
  const LField M = build_acoustics({}, grid3);
  EXPECT_EQ(M.orientation(), Orientation::inverse);
  expect_close(M.at(0), diag({1.0, 1.0, 1.0, -1.0}));
}

TEST(Acoustics, ScaledVariant)
{
  AcousticsSpec s;
  s.omega = 2.0;
  s.scaled = true;
  expect_close(build_acoustics(s, grid3).at(3), diag({4.0, 4.0, 4.0, -1.0}));
}

TEST(Acoustics, ImaginaryFrequencyIsPassive)
{
  AcousticsSpec s;
  s.omega = I;
  const LField M = build_acoustics(s, grid3);
  EXPECT_NEAR((-1.0 / s.omega).imag(), 1.0, 1e-15);
  EXPECT_TRUE(passivity_check(M).passed);
}

TEST(Acoustics, ZeroFrequencyIsRejected)
{
  AcousticsSpec s;
  s.omega = 0.0;
  EXPECT_EQ(code_of([&] { build_acoustics(s, grid3); }), ErrorCode::frequency);
}

TEST(Acoustics, BuilderIsPointwiseLocal)
{
  const Grid g({4, 4}, {1.0, 1.0});
  Table<cplx> kappa{std::vector<cplx>(16, cplx{2.0})};
  AcousticsSpec s;
  s.kappa = kappa;
  const LField a = build_acoustics(s, g);
  kappa.values[5] = cplx{7.0, 0.5};
  s.kappa = kappa;
  const LField b = build_acoustics(s, g);
  for (std::size_t p = 0; p < 16; ++p)
  {
    EXPECT_EQ((a.at(p) - b.at(p)).norm() > 0.0, p == 5) << p;
  }
}

TEST(Elastodynamics, IsotropicWithoutCoupling)
{
  ElastodynamicsSpec s;
  const MatrixXcd C = isotropic_tensor(3, 2.0, 0.5);
  s.stiffness = C;
  s.rho = scalar_matrix(1.5);
  const LField L = build_elastodynamics(s, grid3);
  ASSERT_EQ(L.components(), 12);
  const MatrixXcd full = expand_rank4(C, 3);
  expect_close(L.at(0).topLeftCorner(9, 9), -full, 1e-13);
  expect_close(L.at(0).bottomRightCorner(3, 3), 1.5 * MatrixXcd::Identity(3, 3));
  EXPECT_LT(L.at(0).topRightCorner(9, 3).norm(), 1e-15);
}

TEST(Elastodynamics, WillisBlocksAreAdjoint)
{
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  MatrixXcd D(9, 3);
  for (Eigen::Index i = 0; i < D.size(); ++i)
  {
    D(i) = {n(rng), n(rng)};
  }
  ElastodynamicsSpec s;
  s.omega = cplx{1.0, 0.2};
  s.stiffness = isotropic_tensor(3, 2.0, 0.5);
  s.coupling = D;
  const LField L = build_elastodynamics(s, grid3);
  const MatrixXcd m = L.at(1);
  EXPECT_GT(m.topRightCorner(9, 3).norm(), 0.0);
  expect_close(m.topRightCorner(9, 3), m.bottomLeftCorner(3, 9).adjoint(), 1e-13);
}

TEST(Elastodynamics, DampedLosslessMaterialIsPassive)
{
  ElastodynamicsSpec s;
  s.omega = cplx{1.0, 0.1};
  s.stiffness = isotropic_tensor(3, 2.0, 0.5);
  const PassivityReport r = passivity_check(build_elastodynamics(s, grid3));
  EXPECT_TRUE(r.passed);
}

TEST(Maxwell, Vacuum)
{
  const LField L = build_maxwell({}, grid3);
  expect_close(L.at(0), diag({1.0, 1.0, 1.0, -1.0, -1.0, -1.0}));
  const PassivityReport r = passivity_check(L);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.global_min, 0.0, 1e-15);
}

TEST(Maxwell, SingularPermeabilityNamesThePoint)
{
  MaxwellSpec s;
  s.mu = MatrixXcd(diag({1.0, 0.0, 1.0}));
  try
  {
    build_maxwell(s, grid3);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::material_singularity);
    EXPECT_NE(std::string(e.what()).find("point"), std::string::npos);
  }
}

TEST(Maxwell, GainMediumFailsPassivity)
{
  MaxwellSpec s;
  s.epsilon = Checkerboard<MatrixXcd>{{scalar_matrix(1.0), scalar_matrix(cplx{1.0, -0.1})}};
  const PassivityReport r = passivity_check(build_maxwell(s, grid3));
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.failing_points.size(), 4u);
  EXPECT_NEAR(r.global_min, -0.1, 1e-14);
}

TEST(Brinkman, LowerBlock)
{
  BrinkmanSpec s;
  s.viscosity = scalar_matrix(1.0);
  const LField L = build_brinkman(s, grid3);
  ASSERT_EQ(L.components(), 9);
  expect_close(L.at(0).bottomRightCorner(3, 3), cplx{-0.5, 0.5} * MatrixXcd::Identity(3, 3));
}

TEST(Oseen, HydrostaticOnlyStiffness)
{
  OseenSpec s;
  s.kappa = 3.0;
  const LField M = build_oseen_inverse(s, grid3);
  EXPECT_EQ(M.orientation(), Orientation::inverse);
  const Eigen::MatrixXd h = hydrostatic_projection(3);
  const MatrixXcd full = expand_rank4(h.cast<cplx>(), 3);
  expect_close(M.at(0).topLeftCorner(9, 9), full, 1e-13);
  EXPECT_LT(M.at(0).bottomLeftCorner(3, 9).norm(), 1e-15);
  // Lambda_h has rank one, so the stored matrix has no inverse.
  EXPECT_EQ(code_of([&] { invert_blockwise(M); }), ErrorCode::material_singularity);
}

TEST(Oseen, VelocityContractsTheRowIndex)
{
  OseenSpec s;
  s.velocity = MatrixXcd(Eigen::Vector3cd(1.0, 0.0, 0.0));
  const MatrixXcd m = build_oseen_inverse(s, grid3).at(0);
  // (U . G)_b = G_{1b}: row b of the lower-left block picks entry (0, b) of G.
  for (int b = 0; b < 3; ++b)
  {
    for (int a = 0; a < 3; ++a)
    {
      EXPECT_EQ(std::abs(m(9 + b, 3 * a + b)), a == 0 ? 1.0 : 0.0);
    }
  }
}

TEST(NavierStokes, LowerRightBlock)
{
  NavierStokesSpec s;
  s.penalty = 1.0;
  const LField L = build_ns_perturbation(s, grid3);
  expect_close(L.at(0).bottomRightCorner(3, 3), -I * MatrixXcd::Identity(3, 3));
  s.penalty = 0.0;
  EXPECT_THROW(build_ns_perturbation(s, grid3), Error);
}

TEST(NavierStokes, StationaryShearFlow)
{
  NavierStokesSpec s;
  s.rho = 2.0;
  s.stationary = true;
  MatrixXcd grad = MatrixXcd::Zero(3, 3);
  grad(1, 0) = 0.7;
  s.velocity_gradient = grad;
  const LField L = build_ns_perturbation(s, grid3);
  expect_close(L.at(0).bottomRightCorner(3, 3), 2.0 * grad.transpose());
}

TEST(NavierStokes, PenaltyEnforcesIncompressibility)
{
  const Grid g({8, 8}, {1.0, 1.0});
  auto divergence = [&](double penalty) {
    NavierStokesSpec s;
    s.dimension = 2;
    s.velocity = Eigen::MatrixXcd::Zero(2, 1);
    s.velocity_gradient = Eigen::MatrixXcd::Zero(2, 2);
    s.penalty = penalty;
    Problem p{build_ns_perturbation(s, g), elastic_projector(2), Field(g, BlockLayout{Block::matrix(2), Block::vector(2)}), {}, {}};
    for (std::size_t i = 0; i < g.points(); ++i)
    {
      const auto x = g.position(i);
      p.source(i, 4) = std::sin(2.0 * std::numbers::pi * x[0]);
      p.source(i, 5) = std::cos(2.0 * std::numbers::pi * (x[0] + x[1]));
    }
    p.options.tol = 1e-8;
    const SolveResult r = solve(p);
    EXPECT_TRUE(r.converged);
    double div = 0.0;
    for (std::size_t i = 0; i < g.points(); ++i)
    {
      div += std::norm(r.E(i, 0) + r.E(i, 3));
    }
    return std::sqrt(div);
  };
  const double a = divergence(1e6);
  const double b = divergence(2e6);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(b, a);
}

TEST(Thermoacoustic, CouplingIsAntisymmetricTranspose)
{
  ThermoacousticSpec s;
  s.omega = cplx{1.0, 0.1};
  s.bulk_viscosity = 0.3;
  s.viscosity = 0.2;
  s.alpha0 = 0.4;
  s.conductivity = scalar_matrix(0.5);
  const LField L = build_thermoacoustic(s, grid3);
  ASSERT_EQ(L.components(), 16);
  const MatrixXcd m = L.at(0);
  EXPECT_GT(m.block(0, 15, 9, 1).norm(), 0.0);
  expect_close(m.block(0, 15, 9, 1), -m.block(15, 0, 1, 9).transpose());
}

TEST(Love, Examples)
{
  const Grid g({16}, {1.0});
  LoveSpec s;
  s.k1 = 1.0;
  expect_close(build_love(s, g).at(0), diag({1.0, 0.0}));
  s.omega = 2.0;
  expect_close(build_love(s, g).at(7), diag({1.0, -3.0}));
}

TEST(Schrodinger, FreeParticle)
{
  const Grid g({4, 4}, {1.0, 1.0});
  SchrodingerSpec s;
  s.A = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  s.energy = 1.0;
  expect_close(build_schrodinger(s, g).at(2), diag({-0.5, -0.5, 1.0}));
}

TEST(Rotation, IdentityAtZeroAngle)
{
  const LField L = uniform(diag({1.0, cplx{2.0, 1.0}}));
  expect_close(phase_rotation(L, 0.0).at(1), L.at(1));
}

TEST(Rotation, PositiveMaterialRotatesByQuarterTurn)
{
  const LField L = uniform(diag({1.0, 1.0}));
  const double theta = find_rotation(L);
  EXPECT_NEAR(theta, std::numbers::pi / 2.0, 1e-3);
  EXPECT_TRUE(passivity_check(phase_rotation(L, theta)).passed);
}

TEST(Rotation, IndefiniteMaterialHasNoRotation)
{
  EXPECT_EQ(code_of([] { find_rotation(uniform(diag({-1.0, 1.0}))); }),
            ErrorCode::rotation_not_found);
}

TEST(Rotation, FoundAnglesAlwaysPass)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial)
  {
    const LField L = uniform(diag({cplx{2.0 + u(rng), u(rng)}, cplx{1.5 + u(rng), u(rng)}}));
    const double theta = find_rotation(L);
    EXPECT_TRUE(passivity_check(phase_rotation(L, theta), 0.0).passed);
  }
}

TEST(Inversion, Diagonal)
{
  const LField L = uniform(diag({2.0, cplx{0.0, 4.0}}));
  const LField M = invert_blockwise(L);
  EXPECT_EQ(M.orientation(), Orientation::inverse);
  expect_close(M.at(0), diag({0.5, cplx{0.0, -0.25}}));
}

TEST(Inversion, RoundTrip)
{
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  const Grid g({3, 3}, {1.0, 1.0});
  LField L(g, BlockLayout{Block::vector(2), Block::scalar()}, Orientation::direct);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    MatrixXcd m = 4.0 * MatrixXcd::Identity(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i)
    {
      m(i) += cplx{n(rng), n(rng)} * 0.3;
    }
    L.at(p) = m;
  }
  const LField back = invert_blockwise(invert_blockwise(L));
  EXPECT_EQ(back.orientation(), Orientation::direct);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    EXPECT_LT((back.at(p) - L.at(p)).norm(), 1e-12);
  }
}

TEST(Inversion, SingularPointIsReported)
{
  EXPECT_EQ(code_of([] { invert_blockwise(uniform(diag({1.0, 0.0}))); }),
            ErrorCode::material_singularity);
}

TEST(Structure, LayoutsMatchProjectors)
{
  const std::vector<MaterialSpec> specs{
      AcousticsSpec{},
      ElastodynamicsSpec{1.0, isotropic_tensor(3, 1.0, 1.0), scalar_matrix(1.0), std::nullopt},
      MaxwellSpec{},
      BrinkmanSpec{1.0, scalar_matrix(1.0)},
      OseenSpec{},
      NavierStokesSpec{},
      ThermoacousticSpec{},
  };
  for (const MaterialSpec &s : specs)
  {
    const LField L = build(s, grid3);
    EXPECT_EQ(L.layout().total_components(), projector_for(s, grid3).layout.total_components());
  }
}

}  // namespace
