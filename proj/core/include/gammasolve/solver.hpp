// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_SOLVER_HPP
#define GAMMASOLVE_SOLVER_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/physics.hpp"
#include "gammasolve/projectors.hpp"
#include "gammasolve/tensorfield.hpp"

namespace gammasolve
{

enum class Method
{
  krylov,
  fixed_point,
};

struct SolverOptions
{
  // Relative residual |Gamma1 (L E - s)| / |Gamma1 s|.
  double tol = 1e-8;
  // Defaults to min(10 * unknowns, 2000).
  std::optional<std::size_t> max_iter;
  // GMRES restart length; defaults to clamp(4e6 / unknowns, 30, 500).
  std::optional<std::size_t> restart;
  Method method = Method::krylov;
  // Fixed-point reference constant c.
  cplx reference = 1.0;
  // Bloch shift k0 added to every wavevector.
  std::vector<double> bloch_shift;
  std::size_t symbol_cache_bytes = SpectralProjection::default_cache_budget;
};

// Extra linear term added to L E in real space: out += extra(E).
using OperatorTerm = std::function<void(const Field &E, Field &out)>;

//
// J = L E - s, Gamma1 E = E, Gamma1 J = 0 on a periodic grid. With inverse orientation the
// stored matrix M and source satisfy E = M J + s instead; the solve then runs on the dual
// problem (I - Gamma1, M, -s) and swaps the roles of E and J.
//
struct Problem
{
  LField L;
  Projector gamma;
  // Real-space source with the projector's layout.
  Field source;
  SolverOptions options;
  // Optional additional term in the operator (direct orientation only).
  OperatorTerm extra;
};

struct SolveResult
{
  Field E;
  Field J;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

SolveResult solve(const Problem &problem);

// Writes "iteration,residual" rows.
void write_history_csv(std::ostream &out, const std::vector<double> &history);

//
// Restarted GMRES on an abstract operator. x starts at zero. Returns the relative residual
// history (index 0 is 1.0). Throws ErrorCode::singular_operator on breakdown or stagnation
// above tolerance.
//
struct GmresResult
{
  std::vector<cplx> x;
  std::vector<double> history;
  std::size_t iterations = 0;
  bool converged = false;
};
using LinearOperator = std::function<void(std::span<const cplx> x, std::span<cplx> y)>;
GmresResult gmres(const LinearOperator &A, std::span<const cplx> b, double tol,
                  std::size_t max_iter, std::size_t restart);

// Psi = [z I - D^H B D]^{-1} f for a potential field f. B acts on D's field layout.
// Uniform B uses the exact per-k inverse. Throws ErrorCode::resonance when z hits the spectrum.
Field solve_resolvent(cplx z, const LField &B, const Field &f, const DSymbol &D,
                      const SolverOptions &options = {});

// W = |p - s|^2 + E''^2 integrated over the cell, p = div(A grad psi) + (E' - V) psi.
// psi must have unit norm within 1e-10.
double residual_functional(const Field &psi, const Eigen::MatrixXd &A, const Field &V,
                           double e1, double e2, const Field &s);

// Power iteration for |Gamma1 L Gamma1| (50 iterations, fixed seed).
double operator_norm_estimate(const Problem &problem, int iterations = 50);

// Spectral gradient of a scalar real-space field, returned as a vector(D) field.
Field spectral_gradient(const Field &scalar);

}  // namespace gammasolve

#endif  // GAMMASOLVE_SOLVER_HPP
