// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace gammasolve::detail
{

namespace
{

using PlanKey = std::tuple<std::vector<std::size_t>, int, bool>;

// The FFTW planner is not thread safe; execution of an existing plan on new
// arrays is.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto &[key, plan] : plans_)
    {
      fftw_destroy_plan(plan);
    }
  }

  fftw_plan get(const std::vector<std::size_t> &dims, int howmany, bool forward)
  {
    std::lock_guard lock(mutex_);
    PlanKey key{dims, howmany, forward};
    if (auto it = plans_.find(key); it != plans_.end())
    {
      return it->second;
    }
    std::vector<int> n(dims.begin(), dims.end());
    std::size_t total = 1;
    for (auto d : dims)
    {
      total *= d;
    }
    const std::size_t count = total * static_cast<std::size_t>(howmany);
    auto *a = fftw_alloc_complex(count);
    auto *b = fftw_alloc_complex(count);
    fftw_plan plan = fftw_plan_many_dft(static_cast<int>(n.size()), n.data(), howmany, a, nullptr,
                                        howmany, 1, b, nullptr, howmany, 1,
                                        forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plans_.emplace(std::move(key), plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache &cache()
{
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_interleaved(const std::vector<std::size_t> &dims, int howmany,
                     const std::complex<double> *in, std::complex<double> *out, bool forward)
{
  std::size_t total = 1;
  for (auto d : dims)
  {
    total *= d;
  }
  fftw_plan plan = cache().get(dims, howmany, forward);
  // fftw_execute_dft never writes to its input for out-of-place complex plans.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                   reinterpret_cast<fftw_complex *>(out));
  const double s = 1.0 / std::sqrt(static_cast<double>(total));
  const std::size_t count = total * static_cast<std::size_t>(howmany);
  for (std::size_t i = 0; i < count; ++i)
  {
    out[i] *= s;
  }
}

}  // namespace gammasolve::detail
