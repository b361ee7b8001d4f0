// SPDX-License-Identifier: Apache-2.0

#include "gammasolve/errors.hpp"

#include <cstdio>

namespace gammasolve
{

std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::representation:
      return "E_REPRESENTATION";
    case ErrorCode::shape:
      return "E_SHAPE";
    case ErrorCode::bounds:
      return "E_BOUNDS";
    case ErrorCode::degenerate_symbol:
      return "E_DEGENERATE_SYMBOL";
    case ErrorCode::frequency:
      return "E_FREQUENCY";
    case ErrorCode::material_singularity:
      return "E_MATERIAL_SINGULARITY";
    case ErrorCode::invalid_argument:
      return "E_INVALID_ARGUMENT";
    case ErrorCode::singular_operator:
      return "E_SINGULAR_OPERATOR";
    case ErrorCode::not_converged:
      return "E_NOT_CONVERGED";
    case ErrorCode::resonance:
      return "E_RESONANCE";
    case ErrorCode::rotation_not_found:
      return "E_ROTATION_NOT_FOUND";
    case ErrorCode::precondition:
      return "E_PRECONDITION";
    case ErrorCode::guard:
      return "E_GUARD";
    case ErrorCode::degeneracy:
      return "E_DEGENERACY";
    case ErrorCode::normalization:
      return "E_NORMALIZATION";
    case ErrorCode::pole:
      return "E_POLE";
    case ErrorCode::partial_result:
      return "E_PARTIAL_RESULT";
    case ErrorCode::io:
      return "E_IO";
    case ErrorCode::config:
      return "E_CONFIG";
    case ErrorCode::non_finite:
      return "E_NON_FINITE";
  }
  return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string &message)
  : std::runtime_error(message), code_(code)
{
}

std::string format_real(double value)
{
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

}  // namespace gammasolve
