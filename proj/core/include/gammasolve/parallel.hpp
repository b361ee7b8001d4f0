// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_PARALLEL_HPP
#define GAMMASOLVE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace gammasolve
{

// Caps the number of worker threads used by pointwise and per-k loops.
// Zero restores the default (GAMMA_SOLVE_THREADS, else hardware concurrency).
void set_max_threads(unsigned threads);
unsigned max_threads();

// Runs body(begin, end) over disjoint chunks of [0, n). Small ranges run inline.
// Bodies must only write to locations owned by their chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body);

}  // namespace gammasolve

#endif  // GAMMASOLVE_PARALLEL_HPP
