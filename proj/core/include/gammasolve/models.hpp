// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_MODELS_HPP
#define GAMMASOLVE_MODELS_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/solver.hpp"

namespace gammasolve
{

// Bar of mass M0 with n cavities, each holding a hidden mass m on springs of constant K.
// Requires M0 > 0, n >= 1, m > 0, Re K > 0. A complex K = K'(1 + i eta) uses the loss-factor
// convention: eta >= 0 is damping. It enters the e^{-i omega t} formulas as conj(K).
struct ResonatorSpec
{
  double bar_mass = 1.0;
  int cavities = 1;
  double hidden_mass = 1.0;
  cplx spring = 1.0;
};

// M = M0 + 2 K n m / (2 K - m omega^2) with K replaced by conj(K). Throws ErrorCode::pole at an
// exact real resonance.
cplx effective_mass(cplx omega, const ResonatorSpec &r);

// omega* = sqrt(2 Re K / m).
double resonance_frequency(const ResonatorSpec &r);

// diag(M_axis(omega)) / volume. Axes are uncoupled.
Eigen::MatrixXcd build_resonator_density(cplx omega, const std::vector<ResonatorSpec> &axes,
                                         double volume = 1.0);

// Layer of thickness h and parameters (mu1, rho1) over a halfspace (mu2, rho2).
// Guided waves need sqrt(mu1 / rho1) < sqrt(mu2 / rho2).
struct LoveProfile
{
  double thickness = 1.0;
  double mu1 = 1.0;
  double rho1 = 1.0;
  double mu2 = 4.0;
  double rho2 = 1.0;
};

// Admissible k1 window (omega / c2, omega / c1).
std::pair<double, double> love_window(const LoveProfile &p, double omega);

// mu1 q1 sin(q1 h) - mu2 q2 cos(q1 h), normalized by mu1 q1 + mu2 q2.
double love_relation_residual(const LoveProfile &p, double omega, double k1);

// Roots of tan(q1 h) = mu2 q2 / (mu1 q1) in the admissible window, ascending. The largest is
// the fundamental mode. Empty when the window holds no root.
std::vector<double> love_dispersion_roots(const LoveProfile &p, double omega);

struct LoveScanOptions
{
  std::size_t points = 256;
  // Periodic cell length in units of h; the cell holds a centered slab of thickness 2h.
  double cell_factor = 8.0;
  // Relative loss added to both shear moduli.
  double loss = 1e-6;
  std::size_t samples = 48;
  // Scan window; defaults to the admissible window shrunk by 1% at each end.
  std::optional<std::pair<double, double>> k_range;
  double solver_tol = 1e-8;
  // Relative width of the final golden-section bracket.
  double refine_tol = 1e-7;
};

struct LoveScanResult
{
  std::vector<double> k;
  // |E| / |s| per sample.
  std::vector<double> response;
  // Refined location of the largest-k local maximum.
  double peak = 0.0;
  double peak_response = 0.0;
  double loss = 0.0;
};

// Response of the 1D guided-wave problem to a source at both slab interfaces as k1 varies.
LoveScanResult love_resonance_scan(const LoveProfile &p, double omega,
                                   const LoveScanOptions &options = {});

// |E| / |s| at a single k1.
double love_response(const LoveProfile &p, double omega, double k1,
                     const LoveScanOptions &options = {});

}  // namespace gammasolve

#endif  // GAMMASOLVE_MODELS_HPP
