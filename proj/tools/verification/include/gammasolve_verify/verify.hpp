// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_VERIFY_VERIFY_HPP
#define GAMMASOLVE_VERIFY_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/projectors.hpp"
#include "gammasolve/solver.hpp"

namespace gammasolve::verify
{

struct CheckResult
{
  std::string suite;
  std::string name;
  bool passed = false;
  // Measured quantity and the bound it was held to.
  double value = 0.0;
  double limit = 0.0;
};

//
// Dense references. These build explicit matrices and are meant for grids with at most a few
// thousand unknowns.
//

// Unitary DFT matrix on a grid, acting on point-major scalar samples.
Eigen::MatrixXcd dft_matrix(const Grid &grid);

// Block-diagonal projector matrix (Fourier space, point-major, component-minor).
Eigen::MatrixXcd projector_matrix(const Projector &gamma, const Grid &grid,
                                  const std::vector<double> &shift = {});

// Solves the problem by dense LU on Gamma1 F L F^-1 Gamma1 + Gamma2 and returns (E, J).
std::pair<Field, Field> dense_solve(const Problem &problem);

//
// Check suites. Random inputs come from the supplied generator.
//

// Idempotence, self-adjointness and complementarity of a builder at random wavevectors,
// each relative to |Gamma|_F at tolerance 1e-12.
std::vector<CheckResult> projector_algebra(const Projector &gamma, std::mt19937_64 &rng,
                                           int samples = 100);

// The builders checked by the algebra suite.
std::vector<Projector> standard_projectors();

// Entrywise agreement of gamma_from_D with the closed forms.
std::vector<CheckResult> generic_vs_closed_form(std::mt19937_64 &rng, int samples = 100);

// FFT round trip, Plancherel identity and UPLF byte round trip.
std::vector<CheckResult> round_trip(std::mt19937_64 &rng);

// Krylov against dense solves on small acoustic and Willis-coupled elastic problems.
std::vector<CheckResult> dense_oracle(std::mt19937_64 &rng);

// All suites above.
std::vector<CheckResult> run_all(std::uint64_t seed);

// Prints one row per check; returns true when every check passed.
bool print_table(std::ostream &out, const std::vector<CheckResult> &results);

// Seeded random field helpers.
Field random_field(const Grid &grid, const BlockLayout &layout, std::mt19937_64 &rng);
std::vector<double> random_wavevector(std::size_t dimension, std::mt19937_64 &rng,
                                      double scale = 10.0);

}  // namespace gammasolve::verify

#endif  // GAMMASOLVE_VERIFY_VERIFY_HPP
