// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_QUASIPERIODIC_HPP
#define GAMMASOLVE_QUASIPERIODIC_HPP

#include <vector>

#include <Eigen/Dense>

#include "gammasolve/solver.hpp"

namespace gammasolve
{

//
// Source s(x) = s0 (1 + alpha(x)) e^{i k0.x}. alpha is a real-space scalar field; its
// mean is removed on construction.
//
class QuasiSource
{
public:
  QuasiSource(std::vector<double> k0, Eigen::VectorXcd s0, Field alpha);

  const std::vector<double> &k0() const { return k0_; }
  const Eigen::VectorXcd &s0() const { return s0_; }
  const Field &alpha() const { return alpha_; }

  // Periodic factor s0 (1 + alpha(x)) on the given layout.
  Field periodic_source(const BlockLayout &layout) const;

private:
  std::vector<double> k0_;
  Eigen::VectorXcd s0_;
  Field alpha_;
};

struct QuasiResult
{
  Eigen::VectorXcd E0;
  Eigen::VectorXcd J0;
  // Periodic factors of the fluctuations; multiply by e^{i k0.x} for the physical fields.
  Field E_fluct;
  Field J_fluct;
  SolveResult solve;
};

// Solves with projector symbols evaluated at k + k0. Throws ErrorCode::resonance on
// non-convergence, which signals proximity to the dispersion relation.
QuasiResult solve_quasiperiodic(const LField &L, const Projector &gamma, const QuasiSource &q,
                                const SolverOptions &options = {});

struct EffectiveTensors
{
  Eigen::MatrixXcd LE;
  Eigen::MatrixXcd LJ;
  std::vector<double> k0;
};

// One solve per unit source vector; columns run concurrently. Throws
// ErrorCode::partial_result listing failed columns.
EffectiveTensors effective_tensors(const LField &L, const Projector &gamma,
                                   const std::vector<double> &k0, const Field &alpha,
                                   const SolverOptions &options = {});

}  // namespace gammasolve

#endif  // GAMMASOLVE_QUASIPERIODIC_HPP
