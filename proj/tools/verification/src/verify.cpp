// SPDX-License-Identifier: Apache-2.0

#include "gammasolve_verify/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "gammasolve/errors.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/tensor_algebra.hpp"
#include "gammasolve/uplf.hpp"

namespace gammasolve::verify
{

namespace
{

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr cplx I1{0.0, 1.0};

CheckResult check(std::string suite, std::string name, double value, double limit)
{
  return {std::move(suite), std::move(name), std::isfinite(value) && value <= limit, value, limit};
}

// kron(F, I_c) in point-major, component-minor order.
MatrixXcd expand(const MatrixXcd &F, int c)
{
  const auto n = F.rows();
  MatrixXcd out = MatrixXcd::Zero(n * c, n * c);
  for (Eigen::Index p = 0; p < n; ++p)
  {
    for (Eigen::Index q = 0; q < n; ++q)
    {
      for (int a = 0; a < c; ++a)
      {
        out(p * c + a, q * c + a) = F(p, q);
      }
    }
  }
  return out;
}

MatrixXcd material_matrix(const LField &L)
{
  const int c = L.components();
  const auto n = static_cast<Eigen::Index>(L.points());
  MatrixXcd out = MatrixXcd::Zero(n * c, n * c);
  for (Eigen::Index p = 0; p < n; ++p)
  {
    out.block(p * c, p * c, c, c) = L.at(static_cast<std::size_t>(p));
  }
  return out;
}

VectorXcd as_vector(const Field &f)
{
  VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i)
  {
    v(static_cast<Eigen::Index>(i)) = f.values()[i];
  }
  return v;
}

Field as_field(const VectorXcd &v, const Grid &grid, const BlockLayout &layout)
{
  return Field(grid, layout, Representation::real_space,
               std::vector<cplx>(v.data(), v.data() + v.size()));
}

double relative_gap(const Field &a, const Field &b)
{
  return norm(axpy(-1.0, b, a)) / std::max(norm(b), 1e-300);
}

}  // namespace

Field random_field(const Grid &grid, const BlockLayout &layout, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  Field f(grid, layout);
  for (auto &v : f.values())
  {
    v = {normal(rng), normal(rng)};
  }
  return f;
}

std::vector<double> random_wavevector(std::size_t dimension, std::mt19937_64 &rng, double scale)
{
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> k(dimension);
  for (auto &v : k)
  {
    v = u(rng);
  }
  return k;
}

MatrixXcd dft_matrix(const Grid &grid)
{
  const auto n = static_cast<Eigen::Index>(grid.points());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> k(grid.dimension());
  MatrixXcd F(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
  {
    grid.wavevector_of(static_cast<std::size_t>(p), k);
    for (Eigen::Index q = 0; q < n; ++q)
    {
      const auto x = grid.position(static_cast<std::size_t>(q));
      double phase = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i)
      {
        phase += k[i] * x[i];
      }
      F(p, q) = scale * std::exp(-I1 * phase);
    }
  }
  return F;
}

MatrixXcd projector_matrix(const Projector &gamma, const Grid &grid,
                           const std::vector<double> &shift)
{
  const int c = gamma.layout.total_components();
  const auto n = static_cast<Eigen::Index>(grid.points());
  std::vector<double> k(grid.dimension());
  MatrixXcd out = MatrixXcd::Zero(n * c, n * c);
  for (Eigen::Index p = 0; p < n; ++p)
  {
    grid.wavevector_of(static_cast<std::size_t>(p), k);
    for (std::size_t i = 0; i < shift.size() && i < k.size(); ++i)
    {
      k[i] += shift[i];
    }
    out.block(p * c, p * c, c, c) = gamma.symbol(k);
  }
  return out;
}

std::pair<Field, Field> dense_solve(const Problem &problem)
{
  if (problem.extra)
  {
    throw Error(ErrorCode::invalid_argument, "dense reference does not take extra terms");
  }
  const bool dual = problem.L.orientation() == Orientation::inverse;
  const Grid &grid = problem.L.grid();
  const BlockLayout &layout = problem.L.layout();
  const int c = layout.total_components();
  const MatrixXcd Fc = expand(dft_matrix(grid), c);
  const MatrixXcd Finv = Fc.adjoint();
  MatrixXcd G = projector_matrix(problem.gamma, grid, problem.options.bloch_shift);
  const auto n = G.rows();
  if (dual)
  {
    G = MatrixXcd::Identity(n, n) - G;
  }
  const MatrixXcd L = material_matrix(problem.L);
  VectorXcd s = as_vector(problem.source);
  if (dual)
  {
    s = -s;
  }
  const MatrixXcd A = G * Fc * L * Finv * G + (MatrixXcd::Identity(n, n) - G);
  const VectorXcd x = A.partialPivLu().solve(G * Fc * s);
  const VectorXcd e = Finv * x;
  const VectorXcd j = L * e - s;
  Field E = as_field(e, grid, layout);
  Field J = as_field(j, grid, layout);
  if (dual)
  {
    std::swap(E, J);
  }
  return {std::move(E), std::move(J)};
}

std::vector<Projector> standard_projectors()
{
  return {helmholtz_projector(3), maxwell_projector(),       brinkman_projector(),
          elastic_projector(3),   thermoacoustic_projector(), schrodinger_projector(3),
          love_projector()};
}

std::vector<CheckResult> projector_algebra(const Projector &gamma, std::mt19937_64 &rng,
                                           int samples)
{
  double idem = 0.0;
  double adj = 0.0;
  double comp = 0.0;
  for (int s = 0; s < samples; ++s)
  {
    const auto k = random_wavevector(gamma.wave_dimension, rng);
    const MatrixXcd g = gamma.symbol(k);
    const double scale = std::max(g.norm(), 1e-300);
    const MatrixXcd g2 = MatrixXcd::Identity(g.rows(), g.cols()) - g;
    idem = std::max(idem, (g * g - g).norm() / scale);
    adj = std::max(adj, (g - g.adjoint()).norm() / scale);
    comp = std::max(comp, (g * g2).norm());
  }
  return {check("projector", gamma.name + " idempotent", idem, 1e-12),
          check("projector", gamma.name + " self-adjoint", adj, 1e-12),
          check("projector", gamma.name + " complementary", comp, 1e-12)};
}

std::vector<CheckResult> generic_vs_closed_form(std::mt19937_64 &rng, int samples)
{
  struct Pair
  {
    std::string name;
    DSymbol D;
    SymbolFunction closed;
    std::size_t dimension;
  };
  const std::vector<Pair> pairs = {
      {"helmholtz", helmholtz_D(3), [](std::span<const double> k) { return gamma_helmholtz(k); }, 3},
      {"maxwell", maxwell_D(), [](std::span<const double> k) { return gamma_maxwell(k); }, 3},
      {"schrodinger", helmholtz_D(3),
       [](std::span<const double> k) { return gamma_schrodinger(k); }, 3},
  };
  std::vector<CheckResult> out;
  for (const auto &p : pairs)
  {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s)
    {
      const auto k = random_wavevector(p.dimension, rng);
      worst = std::max(worst, (gamma_from_D(p.D, k) - p.closed(k)).cwiseAbs().maxCoeff());
    }
    out.push_back(check("generic", p.name + " matches closed form", worst, 1e-12));
  }
  return out;
}

std::vector<CheckResult> round_trip(std::mt19937_64 &rng)
{
  std::vector<CheckResult> out;
  const Grid grid({16, 12, 10}, {1.0, 2.0, 0.5});
  const BlockLayout layout{Block::vector(3), Block::scalar()};
  const Field f = random_field(grid, layout, rng);
  const Field g = random_field(grid, layout, rng);
  const Field fh = to_fourier(f);
  out.push_back(check("round-trip", "fft inverse", relative_gap(to_real(fh), f), 1e-13));
  const double plancherel = std::abs(norm(fh) - norm(f)) / norm(f);
  const cplx ip_real = inner_product(f, g);
  const cplx ip_fourier = inner_product(fh, to_fourier(g));
  const double parseval = std::abs(ip_real - ip_fourier) / (norm(f) * norm(g));
  out.push_back(check("round-trip", "plancherel", std::max(plancherel, parseval), 1e-12));

  const auto bytes = encode_uplf(fh);
  const Field back = decode_uplf(bytes);
  const bool same = back.same_shape(fh) && back.representation() == fh.representation() &&
                    std::equal(back.values().begin(), back.values().end(), fh.values().begin()) &&
                    encode_uplf(back) == bytes;
  out.push_back(check("round-trip", "uplf bytes", same ? 0.0 : 1.0, 0.0));
  return out;
}

std::vector<CheckResult> dense_oracle(std::mt19937_64 &rng)
{
  std::vector<CheckResult> out;
  SolverOptions options;
  options.tol = 1e-12;
  {
    const Grid grid({8, 8}, {1.0, 1.0});
    AcousticsSpec spec;
    spec.omega = 1.3;
    spec.kappa = Checkerboard<cplx>{{cplx{1.0, 0.1}, cplx{3.0, 0.4}}};
    spec.rho = scalar_matrix(cplx{1.2, 0.05});
    Problem p{build_acoustics(spec, grid), helmholtz_projector(2),
              random_field(grid, BlockLayout{Block::vector(2), Block::scalar()}, rng), options, {}};
    const auto [E, J] = dense_solve(p);
    const SolveResult r = solve(p);
    out.push_back(check("dense", "acoustics checkerboard",
                        std::max(relative_gap(r.E, E), relative_gap(r.J, J)), 1e-8));
  }
  {
    const Grid grid({6, 6}, {1.0, 1.0});
    ElastodynamicsSpec spec;
    spec.omega = 1.1;
    spec.stiffness = Checkerboard<MatrixXcd>{
        {isotropic_tensor(2, cplx{2.0, 0.1}, cplx{1.0, 0.05}),
         isotropic_tensor(2, cplx{5.0, 0.2}, cplx{3.0, 0.1})}};
    spec.rho = scalar_matrix(cplx{1.0, 0.02}, 2);
    MatrixXcd coupling(4, 2);
    coupling << cplx{0.2, 0.01}, 0.1, 0.05, cplx{0.0, 0.03}, 0.05, cplx{0.0, 0.03}, -0.1, 0.15;
    spec.coupling = coupling;
    Problem p{build_elastodynamics(spec, grid), elastic_projector(2),
              random_field(grid, BlockLayout{Block::matrix(2), Block::vector(2)}, rng), options,
              {}};
    const auto [E, J] = dense_solve(p);
    const SolveResult r = solve(p);
    out.push_back(check("dense", "willis elastodynamics",
                        std::max(relative_gap(r.E, E), relative_gap(r.J, J)), 1e-8));
  }
  return out;
}

std::vector<CheckResult> run_all(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  for (const auto &g : standard_projectors())
  {
    const auto r = projector_algebra(g, rng);
    out.insert(out.end(), r.begin(), r.end());
  }
  for (auto *suite : {&generic_vs_closed_form})
  {
    const auto r = suite(rng, 100);
    out.insert(out.end(), r.begin(), r.end());
  }
  for (auto *suite : {&round_trip, &dense_oracle})
  {
    const auto r = suite(rng);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

bool print_table(std::ostream &out, const std::vector<CheckResult> &results)
{
  bool all = true;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-40s %-6s %12s %12s\n", "suite", "check", "status",
                "value", "limit");
  out << line;
  for (const auto &r : results)
  {
    all = all && r.passed;
    std::snprintf(line, sizeof line, "%-12s %-40s %-6s %12.3e %12.3e\n", r.suite.c_str(),
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.value, r.limit);
    out << line;
  }
  return all;
}

}  // namespace gammasolve::verify
