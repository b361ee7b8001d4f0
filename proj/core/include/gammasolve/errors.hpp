// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_ERRORS_HPP
#define GAMMASOLVE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gammasolve
{

// Machine-readable error categories. The CLI prints these verbatim as the
// leading token of its single-line error report.
enum class ErrorCode
{
  representation,
  shape,
  bounds,
  degenerate_symbol,
  frequency,
  material_singularity,
  invalid_argument,
  singular_operator,
  not_converged,
  resonance,
  rotation_not_found,
  precondition,
  guard,
  degeneracy,
  normalization,
  pole,
  partial_result,
  io,
  config,
  non_finite,
};

std::string_view to_string(ErrorCode code);

// Compact %.6g rendering for error messages.
std::string format_real(double value);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace gammasolve

#endif  // GAMMASOLVE_ERRORS_HPP
