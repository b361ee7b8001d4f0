// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "gammasolve/tensorfield.hpp"

namespace
{

using namespace gammasolve;

Field random_field(const Grid &g, const BlockLayout &layout)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  Field f(g, layout);
  for (auto &v : f.values())
  {
    v = {n(rng), n(rng)};
  }
  return f;
}

void BM_FourierRoundTrip(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g({n, n, n}, {1.0, 1.0, 1.0});
  const Field f = random_field(g, BlockLayout{Block::vector(3), Block::scalar()});
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(to_real(to_fourier(f)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_FourierRoundTrip)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_InnerProduct(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g({n, n, n}, {1.0, 1.0, 1.0});
  const Field a = random_field(g, BlockLayout{Block::vector(3), Block::scalar()});
  const Field b = random_field(g, BlockLayout{Block::vector(3), Block::scalar()});
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(inner_product(a, b));
  }
}
BENCHMARK(BM_InnerProduct)->Arg(32)->Arg(64);

}  // namespace
