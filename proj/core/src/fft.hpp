// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_SRC_FFT_HPP
#define GAMMASOLVE_SRC_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace gammasolve::detail
{

// Unitary multidimensional DFT over the grid axes of `howmany` interleaved
// components (point-major, component-minor). forward uses e^{-i k.x}.
void fft_interleaved(const std::vector<std::size_t> &dims, int howmany,
                     const std::complex<double> *in, std::complex<double> *out, bool forward);

}  // namespace gammasolve::detail

#endif  // GAMMASOLVE_SRC_FFT_HPP
