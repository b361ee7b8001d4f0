// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gammasolve/errors.hpp"
#include "gammasolve/fermionic.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/solver.hpp"
#include "gammasolve_verify/verify.hpp"

namespace
{

using namespace gammasolve;

constexpr double pi = std::numbers::pi;
const BlockLayout scalar_layout{Block::scalar()};

using PointFunction = std::function<cplx(std::span<const double>)>;

Field sample(const Grid &g, const PointFunction &f)
{
  Field out(g, scalar_layout);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    out(p, 0) = f(g.position(p));
  }
  return out;
}

Field random_scalar(const Grid &g, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  return verify::random_field(g, scalar_layout, rng);
}

double gap(const Field &a, const Field &b)
{
  return norm(axpy(-1.0, b, a));
}

// Smooth, asymmetric two-electron function.
cplx phi2(double x1, double x2)
{
  return std::exp(cplx{std::sin(2.0 * pi * x1), std::cos(2.0 * pi * (x1 + 2.0 * x2))}) +
         0.3 * std::sin(4.0 * pi * x2);
}

TEST(Antisymmetrize, TwoElectronFormula)
{
  const MultiElectronGrid m{2, 1, 8, 1.0, false};
  const Grid g = m.grid();
  const Field phi = sample(g, [](auto x) { return phi2(x[0], x[1]); });
  const Field expected =
      sample(g, [](auto x) { return 0.5 * (phi2(x[0], x[1]) - phi2(x[1], x[0])); });
  EXPECT_LT(gap(antisymmetrize_full(phi, m), expected), 1e-14);
  EXPECT_LT(gap(lambda_a(phi, m, false), expected), 1e-14);
}

TEST(Antisymmetrize, FixesAntisymmetricAndKillsSymmetricInputs)
{
  const MultiElectronGrid m{3, 1, 6, 1.0, false};
  const Field a = antisymmetrize_full(random_scalar(m.grid(), 1), m);
  EXPECT_LT(gap(antisymmetrize_full(a, m), a), 1e-14);
  const Field sym = sample(m.grid(), [](auto x) { return cplx{x[0] * x[1] * x[2] + x[0] + x[1] + x[2]}; });
  EXPECT_LT(norm(antisymmetrize_full(sym, m)), 1e-14);
  EXPECT_LT(scalar_symmetry_defect(a, m), 1e-14);
  EXPECT_GT(scalar_symmetry_defect(random_scalar(m.grid(), 2), m), 0.1);
}

TEST(Antisymmetrize, CapsBruteForceSize)
{
  const MultiElectronGrid m{5, 1, 2, 1.0, false};
  try
  {
    antisymmetrize_full(Field(m.grid(), scalar_layout), m);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::guard);
  }
}

TEST(Permutations, ParityAndCount)
{
  EXPECT_EQ(parity({0, 1, 2}), 1);
  EXPECT_EQ(parity({1, 0, 2}), -1);
  EXPECT_EQ(parity({1, 2, 0}), 1);
  EXPECT_EQ(all_permutations(4).size(), 24u);
}

class ReducedAntisymmetrizer : public ::testing::TestWithParam<int>
{
};

TEST_P(ReducedAntisymmetrizer, MatchesBruteForceOnTailSymmetricInputs)
{
  const int n = GetParam();
  const MultiElectronGrid m{n, 1, n == 4 ? 4u : 6u, 1.0, false};
  Field phi = random_scalar(m.grid(), 10 + n);
  // Antisymmetrize electrons 3..N only by composing with tail permutations.
  if (n > 2)
  {
    Field tail(m.grid(), scalar_layout);
    int count = 0;
    for (const Permutation &p : all_permutations(n))
    {
      if (p.slots[0] == 0 && p.slots[1] == 1)
      {
        tail = axpy(static_cast<double>(p.sign), compose(phi, m, p.slots), tail);
        ++count;
      }
    }
    phi = scale(1.0 / count, tail);
  }
  const Field reduced = lambda_a(phi, m, true);
  EXPECT_LT(gap(reduced, antisymmetrize_full(phi, m)), 1e-13 * norm(phi));
  EXPECT_LT(gap(lambda_a(reduced, m, true), reduced), 1e-13 * norm(phi));
}

INSTANTIATE_TEST_SUITE_P(Electrons, ReducedAntisymmetrizer, ::testing::Values(2, 3, 4));

TEST(ReducedAntisymmetrizerGuard, RejectsTailViolations)
{
  const MultiElectronGrid m{4, 1, 4, 1.0, false};
  EXPECT_THROW(lambda_a(random_scalar(m.grid(), 4), m, true), Error);
  const Field phi = random_scalar(m.grid(), 4);
  EXPECT_LT(gap(lambda_a(phi, m, false), antisymmetrize_full(phi, m)), 1e-13 * norm(phi));
}

TEST(Projections, AreSelfAdjoint)
{
  const MultiElectronGrid m{3, 1, 4, 1.0, false};
  const Grid g = m.grid();
  const Field a = random_scalar(g, 5);
  const Field b = random_scalar(g, 6);
  EXPECT_LT(std::abs(inner_product(lambda_a(a, m, false), b) - inner_product(a, lambda_a(b, m, false))),
            1e-12);
  std::mt19937_64 rng(7);
  const BlockLayout vl{Block::vector(3)};
  const Field p = verify::random_field(g, vl, rng);
  const Field q = verify::random_field(g, vl, rng);
  EXPECT_LT(std::abs(inner_product(lambda_A(p, m), q) - inner_product(p, lambda_A(q, m))), 1e-12);
}

TEST(VectorProjection, SatisfiesExchangeFamilies)
{
  const MultiElectronGrid m{3, 1, 4, 1.0, false};
  std::mt19937_64 rng(8);
  const Field p = verify::random_field(m.grid(), BlockLayout{Block::vector(3)}, rng);
  const Field q = lambda_A(p, m);
  EXPECT_GT(vector_symmetry_defect(p, m), 0.1);
  EXPECT_LT(vector_symmetry_defect(q, m), 1e-13);
  EXPECT_LT(gap(lambda_A(q, m), q), 1e-14 * norm(q) + 1e-14);
  EXPECT_LT(gap(q, antisymmetrize_vector_full(p, m)), 1e-13 * norm(p));
  // q_1(x1, x2, x3) = -q_2(x2, x1, x3).
  const auto swap = exchange_table(m, {1, 0, 2});
  for (std::size_t i = 0; i < m.grid().points(); ++i)
  {
    EXPECT_LT(std::abs(q(i, 0) + q(swap[i], 1)), 1e-13);
  }
}

TEST(VectorProjection, CommutesWithGradient)
{
  const MultiElectronGrid m{3, 1, 8, 1.0, false};
  const Field phi = sample(m.grid(), [](auto x) {
    return std::exp(cplx{std::sin(2.0 * pi * x[0]) * std::cos(2.0 * pi * x[2]),
                         0.5 * std::sin(2.0 * pi * (x[1] - x[0]))});
  });
  const Field lhs = lambda_A(spectral_gradient(phi), m);
  const Field rhs = spectral_gradient(lambda_a(phi, m, false));
  EXPECT_LT(gap(lhs, rhs), 1e-12 * norm(lhs));
}

TEST(Spin, ExchangeSwapsSpinAndPositionTogether)
{
  const MultiElectronGrid m{2, 1, 4, 1.0, true};
  const Grid g = m.grid();
  ASSERT_EQ(g.dimension(), 4u);
  auto f = [](std::span<const double> x) {
    return cplx{x[0] + 2.0 * x[1], 3.0 * x[2] - x[3] * x[3]};
  };
  const Field phi = sample(g, f);
  const Field swapped = compose(phi, m, {1, 0});
  const Field expected = sample(g, [&](auto x) {
    const double y[4] = {x[1], x[0], x[3], x[2]};
    return f(y);
  });
  EXPECT_EQ(gap(swapped, expected), 0.0);
  const Field a = antisymmetrize_full(phi, m);
  EXPECT_LT(scalar_symmetry_defect(a, m), 1e-15);
}

TEST(SymmetrizedOperator, TwoElectronsReduceToTheDirectOperator)
{
  const MultiElectronGrid m{2, 1, 8, 1.0, false};
  const Grid g = m.grid();
  SchrodingerSpec s;
  s.A = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  s.energy = 1.5;
  s.potential = pair_potential(
      [](auto x1, auto x2) { return cplx{std::cos(2.0 * pi * (x1[0] - x2[0]))}; }, 1);
  const LField LD = build_schrodinger(s, g);
  const auto op = symmetrized_L(LD, m);
  std::mt19937_64 rng(3);
  Field E(g, LD.layout());
  const Field psi = antisymmetrize_full(random_scalar(g, 9), m);
  const Field grad = spectral_gradient(psi);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    E(p, 0) = grad(p, 0);
    E(p, 1) = grad(p, 1);
    E(p, 2) = psi(p, 0);
  }
  EXPECT_LT(gap(op(E), LD.apply(E)), 1e-12 * norm(E));
}

TEST(SymmetrizedOperator, PairScaleMatchesDenseExpectation)
{
  const MultiElectronGrid m{3, 1, 4, 1.0, false};
  const Grid g = m.grid();
  auto bump = [](double a, double b) {
    const double d = std::remainder(a - b, 1.0);
    return std::exp(-d * d / 0.02);
  };
  SchrodingerSpec s;
  s.A = Eigen::MatrixXd::Identity(3, 3);
  s.potential = pair_potential([&](auto x1, auto x2) { return cplx{bump(x1[0], x2[0])}; }, 1);
  const LField LD = build_schrodinger(s, g);
  const Field psi = antisymmetrize_full(random_scalar(g, 21), m);
  Field E(g, LD.layout());
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    E(p, 3) = psi(p, 0);
  }
  const Field out = symmetrized_L(LD, m)(E);
  Field outs(g, scalar_layout);
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    outs(p, 0) = out(p, 3);
  }
  const double symmetrized = -inner_product(psi, outs).real();
  const Field pairwise = sample(g, [&](auto x) {
    return cplx{bump(x[0], x[1]) + bump(x[0], x[2]) + bump(x[1], x[2])};
  });
  double dense = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p)
  {
    dense += std::norm(psi(p, 0)) * pairwise(p, 0).real();
  }
  dense *= g.cell_volume() / static_cast<double>(g.points());
  EXPECT_DOUBLE_EQ(pair_scale(3), 3.0);
  EXPECT_NEAR(symmetrized, dense / pair_scale(3), 1e-12 * dense);
}

TEST(Normalize, Examples)
{
  const Grid g({4, 4}, {1.0, 1.0});
  Field one(g, scalar_layout);
  for (auto &v : one.values())
  {
    v = 1.0;
  }
  EXPECT_LT(gap(normalize(one), one), 1e-15);
  const Field r = random_scalar(g, 3);
  const Field n = normalize(r);
  EXPECT_NEAR(inner_product(n, n).real(), 1.0, 1e-14);
  EXPECT_LT(gap(normalize(scale(cplx{0.0, -3.0}, r)), n), 1e-14);
  EXPECT_THROW(normalize(Field(g, scalar_layout)), Error);
}

class Well : public ::testing::Test
{
protected:
  Grid grid{{24}, {10.0}};
  Eigen::MatrixXd A = 0.5 * Eigen::MatrixXd::Identity(1, 1);
  Field V{grid, scalar_layout};
  Field x2{grid, scalar_layout};

  void SetUp() override
  {
    for (std::size_t p = 0; p < grid.points(); ++p)
    {
      const double x = grid.position(p)[0] - 5.0;
      V(p, 0) = std::abs(x) < 2.5 ? -5.0 : 0.0;
      x2(p, 0) = x * x;
    }
  }

  std::pair<double, Field> ground(const Field &potential) const
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense_hamiltonian(grid, A, potential));
    const Eigen::VectorXcd v = eig.eigenvectors().col(0);
    return {eig.eigenvalues()(0),
            normalize(Field(grid, scalar_layout, Representation::real_space,
                            std::vector<cplx>(v.data(), v.data() + v.size())))};
  }
};

TEST_F(Well, EnergyShiftExamples)
{
  const auto [e, psi] = ground(V);
  Field unit(grid, scalar_layout);
  Field odd(grid, scalar_layout);
  for (std::size_t p = 0; p < grid.points(); ++p)
  {
    unit(p, 0) = 1.0;
    odd(p, 0) = std::sin(2.0 * pi * (grid.position(p)[0] - 5.0) / 10.0);
  }
  EXPECT_NEAR(perturbation_energy(psi, unit), 1.0, 1e-12);
  EXPECT_NEAR(perturbation_energy(psi, odd), 0.0, 1e-12);
  const double h = 1e-5;
  const double fd = (ground(axpy(h, x2, V)).first - ground(axpy(-h, x2, V)).first) / (2.0 * h);
  EXPECT_NEAR(perturbation_energy(psi, x2), fd, 1e-6);
}

TEST_F(Well, ConstantPerturbationHasNoStateCorrection)
{
  const auto [e, psi] = ground(V);
  Field c(grid, scalar_layout);
  for (auto &v : c.values())
  {
    v = 0.75;
  }
  const PerturbationResult r = perturbation_solve(psi, e, c, A, V);
  EXPECT_NEAR(r.energy1, 0.75, 1e-12);
  EXPECT_LT(norm(r.psi1), 1e-12);
}

TEST_F(Well, StateCorrectionMatchesFiniteDifference)
{
  const auto [e, psi] = ground(V);
  SolverOptions o;
  o.tol = 1e-12;
  const PerturbationResult r = perturbation_solve(psi, e, x2, A, V, o);
  EXPECT_LT(r.orthogonality, 1e-10);
  const double h = 1e-5;
  const Field plus = ground(axpy(h, x2, V)).second;
  const Field minus = ground(axpy(-h, x2, V)).second;
  const Field fd = scale(0.5 / h, axpy(-1.0, minus, plus));
  EXPECT_LT(gap(r.psi1, fd), 1e-6 * std::max(1.0, norm(fd)));
}

TEST_F(Well, RandomPerturbationsStayOrthogonal)
{
  const auto [e, psi] = ground(V);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Field dV(grid, scalar_layout);
    for (auto &v : dV.values())
    {
      v = n(rng);
    }
    SolverOptions o;
    o.tol = 1e-12;
    EXPECT_LT(perturbation_solve(psi, e, dV, A, V, o).orthogonality, 1e-10);
  }
}

TEST(Sector, BasisIsOrthonormalAndAntisymmetric)
{
  const MultiElectronGrid m{3, 1, 5, 1.0, false};
  const Eigen::MatrixXd Q = antisymmetric_basis(m);
  // C(5, 3) orbits without coincident electrons.
  ASSERT_EQ(Q.cols(), 10);
  EXPECT_LT((Q.transpose() * Q - Eigen::MatrixXd::Identity(10, 10)).norm(), 1e-14);
  for (Eigen::Index c = 0; c < Q.cols(); ++c)
  {
    const Eigen::VectorXcd v = Q.col(c).cast<cplx>();
    const Field f(m.grid(), scalar_layout, Representation::real_space,
                  std::vector<cplx>(v.data(), v.data() + v.size()));
    EXPECT_LT(scalar_symmetry_defect(f, m), 1e-15);
  }
}

TEST(Sector, NonInteractingPairFillsTheTwoLowestOrbitals)
{
  const MultiElectronGrid m{2, 1, 12, 1.0, false};
  const Grid line({12}, {1.0});
  Field v1(line, scalar_layout);
  for (std::size_t p = 0; p < 12; ++p)
  {
    v1(p, 0) = 3.0 * std::cos(2.0 * pi * line.position(p)[0]);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> single(
      dense_hamiltonian(line, 0.5 * Eigen::MatrixXd::Identity(1, 1), v1));
  const Field V = sample(m.grid(), [](auto x) {
    return cplx{3.0 * std::cos(2.0 * pi * x[0]) + 3.0 * std::cos(2.0 * pi * x[1])};
  });
  const Eigen::MatrixXd A = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  const auto pairs = antisymmetric_eigenpairs(m, A, V);
  ASSERT_EQ(pairs.size(), 66u);
  EXPECT_NEAR(pairs[0].energy, single.eigenvalues()(0) + single.eigenvalues()(1), 1e-10);
  EXPECT_LT(scalar_symmetry_defect(pairs[0].psi, m), 1e-12);
  EXPECT_NEAR(inner_product(pairs[0].psi, pairs[0].psi).real(), 1.0, 1e-13);

  // The symmetric sector holds a state at the same energy; the sector solve ignores it.
  const Field dV = sample(m.grid(), [](auto x) {
    return cplx{std::sin(2.0 * pi * x[0]) + std::sin(2.0 * pi * x[1])};
  });
  EXPECT_THROW(perturbation_solve(pairs[0].psi, pairs[0].energy, dV, A, V), Error);
  SolverOptions o;
  o.tol = 1e-12;
  const PerturbationResult r = perturbation_solve(pairs[0].psi, pairs[0].energy, dV, A, V, m, o);
  EXPECT_LT(r.orthogonality, 1e-10);
  EXPECT_LT(scalar_symmetry_defect(r.psi1, m), 1e-12);
  const double h = 1e-5;
  const double fd = (antisymmetric_eigenpairs(m, A, axpy(h, dV, V))[0].energy -
                     antisymmetric_eigenpairs(m, A, axpy(-h, dV, V))[0].energy) /
                    (2.0 * h);
  EXPECT_NEAR(r.energy1, fd, 1e-6);
}

TEST(Degeneracy, IsRejected)
{
  // Free particle on a ring: the first excited level is doubly degenerate.
  const Grid g({16}, {1.0});
  const Eigen::MatrixXd A = 0.5 * Eigen::MatrixXd::Identity(1, 1);
  const Field V(g, scalar_layout);
  Field psi(g, scalar_layout);
  for (std::size_t p = 0; p < 16; ++p)
  {
    psi(p, 0) = std::cos(2.0 * pi * g.position(p)[0]);
  }
  psi = normalize(psi);
  const double e = 0.5 * 4.0 * pi * pi;
  try
  {
    perturbation_solve(psi, e, V, A, V);
    FAIL();
  }
  catch (const Error &ex)
  {
    EXPECT_EQ(ex.code(), ErrorCode::degeneracy);
  }
}

}  // namespace
