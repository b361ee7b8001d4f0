// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "gammasolve/projectors.hpp"

namespace
{

using namespace gammasolve;

Field random_fourier(const Grid &g, const BlockLayout &layout)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  Field f(g, layout, Representation::fourier_space);
  for (auto &v : f.values())
  {
    v = {n(rng), n(rng)};
  }
  return f;
}

// range(0): points per axis; range(1): 1 caches symbols, 0 evaluates them per apply.
template <Projector (*Make)()>
void BM_Apply(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g({n, n, n}, {1.0, 1.0, 1.0});
  const Projector p = Make();
  const SpectralProjection projection(p, g, {},
                                      state.range(1) ? SpectralProjection::default_cache_budget : 0);
  Field f = random_fourier(g, p.layout);
  for (auto _ : state)
  {
    projection.apply(f);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.points()));
}

Projector helmholtz3() { return helmholtz_projector(3); }
Projector elastic3() { return elastic_projector(3); }

BENCHMARK_TEMPLATE(BM_Apply, helmholtz3)->Args({32, 0})->Args({32, 1});
BENCHMARK_TEMPLATE(BM_Apply, maxwell_projector)->Args({32, 0})->Args({32, 1});
BENCHMARK_TEMPLATE(BM_Apply, elastic3)->Args({16, 0})->Args({16, 1});

void BM_GenericSymbol(benchmark::State &state)
{
  const DSymbol D = maxwell_D();
  const double k[3] = {0.3, -1.2, 2.5};
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(gamma_from_D(D, k));
  }
}
BENCHMARK(BM_GenericSymbol);

void BM_ClosedFormSymbol(benchmark::State &state)
{
  const double k[3] = {0.3, -1.2, 2.5};
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(gamma_maxwell(k));
  }
}
BENCHMARK(BM_ClosedFormSymbol);

}  // namespace
