// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace gammasolve
{

namespace
{

std::atomic<unsigned> configured_threads{0};

constexpr std::size_t min_chunk = 8192;

unsigned default_threads()
{
  if (const char *env = std::getenv("GAMMA_SOLVE_THREADS"))
  {
    try
    {
      const long value = std::stol(env);
      if (value > 0)
      {
        return static_cast<unsigned>(value);
      }
    }
    catch (...)
    {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_max_threads(unsigned threads)
{
  configured_threads.store(threads);
}

unsigned max_threads()
{
  const unsigned t = configured_threads.load();
  return t > 0 ? t : default_threads();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body)
{
  const std::size_t workers =
      std::min<std::size_t>(max_threads(), std::max<std::size_t>(1, n / min_chunk));
  if (workers <= 1)
  {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
    {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end)
      {
        pool.emplace_back([&body, &errors, w, begin, end] {
          try
          {
            body(begin, end);
          }
          catch (...)
          {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    try
    {
      body(0, std::min(n, chunk));
    }
    catch (...)
    {
      errors[0] = std::current_exception();
    }
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace gammasolve
