// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "gammasolve/models.hpp"
#include "gammasolve/physics.hpp"
#include "gammasolve/solver.hpp"

namespace
{

using namespace gammasolve;

Problem checkerboard(std::size_t n, Method method)
{
  const Grid g({n, n, n}, {1.0, 1.0, 1.0});
  AcousticsSpec s;
  s.omega = cplx{1.5, 0.05};
  s.kappa = Checkerboard<cplx>{{cplx{1.0}, cplx{5.0, 0.2}}};
  Problem p{build_acoustics(s, g), helmholtz_projector(3), Field(g, BlockLayout{Block::vector(3), Block::scalar()}), {}, {}};
  if (method == Method::fixed_point)
  {
    p.L = invert_blockwise(p.L);
    p.options.method = method;
    p.options.reference = operator_norm_estimate(p);
  }
  for (std::size_t i = 0; i < g.points(); ++i)
  {
    p.source(i, 1) = std::sin(2.0 * std::numbers::pi * g.position(i)[1]);
  }
  p.options.tol = 1e-6;
  return p;
}

void BM_KrylovSolve(benchmark::State &state)
{
  const Problem p = checkerboard(static_cast<std::size_t>(state.range(0)), Method::krylov);
  std::size_t iterations = 0;
  for (auto _ : state)
  {
    const SolveResult r = solve(p);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.residual);
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_KrylovSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FixedPointSolve(benchmark::State &state)
{
  const Problem p = checkerboard(static_cast<std::size_t>(state.range(0)), Method::fixed_point);
  std::size_t iterations = 0;
  for (auto _ : state)
  {
    const SolveResult r = solve(p);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.residual);
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_FixedPointSolve)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LoveResponse(benchmark::State &state)
{
  LoveScanOptions o;
  o.points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(love_response(LoveProfile{}, 4.0, 3.5, o));
  }
}
BENCHMARK(BM_LoveResponse)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
