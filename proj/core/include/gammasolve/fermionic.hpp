// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_FERMIONIC_HPP
#define GAMMASOLVE_FERMIONIC_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gammasolve/physics.hpp"
#include "gammasolve/solver.hpp"

namespace gammasolve
{

//
// Configuration grid for N electrons with d_space coordinates each. With spin on, each
// electron also owns a leading 2-point axis of length 2, so quadrature over that axis is a
// unit-weight spin sum. Axis order: [spin_1 .. spin_N] then [r_1 .. r_N].
//
struct MultiElectronGrid
{
  int electrons = 2;
  int d_space = 1;
  std::size_t points_per_axis = 8;
  double length = 1.0;
  bool spin = false;

  Grid grid() const;
  int spatial_dimension() const { return electrons * d_space; }
};

// (phi o pi)(x) = phi(x_{pi[0]}, ..., x_{pi[N-1]}); pi lists electron labels per argument slot.
struct Permutation
{
  std::vector<int> slots;
  int sign = 1;
};

int parity(const std::vector<int> &slots);
std::vector<Permutation> all_permutations(int n);

// Point map T with (phi o pi)(x_p) = phi(x_{T[p]}).
std::vector<std::size_t> exchange_table(const MultiElectronGrid &g, const std::vector<int> &slots);

// phi o pi for scalar fields.
Field compose(const Field &phi, const MultiElectronGrid &g, const std::vector<int> &slots);

// (1/N!) sum sign(pi) phi o pi. N! must not exceed 24.
Field antisymmetrize_full(const Field &phi, const MultiElectronGrid &g);

// Reduced pair-insertion antisymmetrizer with C(N,2) terms. With assume_tail_symmetry the
// input must already be antisymmetric in electrons 3..N (checked to 1e-10); otherwise the
// tail is antisymmetrized first.
Field lambda_a(const Field &phi, const MultiElectronGrid &g, bool assume_tail_symmetry);

// Projection of vector(N d) fields onto the exchange-compatible subspace:
// (pi . p)_m(x) = p_{pi^-1(m)}(x o pi). N = 2, 3 use explicit term lists; N = 4 sums all
// permutations.
Field lambda_A(const Field &p, const MultiElectronGrid &g);
Field antisymmetrize_vector_full(const Field &p, const MultiElectronGrid &g);

// Largest pointwise violation of scalar antisymmetry and of both vector exchange families.
double scalar_symmetry_defect(const Field &phi, const MultiElectronGrid &g);
double vector_symmetry_defect(const Field &q, const MultiElectronGrid &g);

// E -> Lambda (L^D E) on (vector(N d), scalar) fields, Lambda = diag(Lambda_A, Lambda_a).
std::function<Field(const Field &)> symmetrized_L(const LField &LD, const MultiElectronGrid &g);

// Number of electron pairs N(N-1)/2: pairwise-summed potential energies are this multiple of
// the single-pair desymmetrized energy on antisymmetric states.
double pair_scale(int electrons);

// Unit norm with the largest-magnitude component made real and positive.
Field normalize(const Field &psi);

// E' = integral |psi|^2 V'. psi must be normalized within 1e-10.
double perturbation_energy(const Field &psi, const Field &dV);

// Dense spectral Hamiltonian F^H diag(k^T A k) F + diag(V) for scalar fields.
Eigen::MatrixXcd dense_hamiltonian(const Grid &grid, const Eigen::MatrixXd &A, const Field &V);

struct PerturbationResult
{
  Field psi1;
  double energy1 = 0.0;
  // |integral (psi1 conj(psi) + psi conj(psi1))|.
  double orthogonality = 0.0;
  SolveResult solve;
};

// First-order correction for H = -div A grad + V at the eigenpair (E, psi), perturbation dV.
// Solves (H - E) psi1 = (E' - dV) psi with a rank-one deflation of psi, then removes any
// remaining psi component.
PerturbationResult perturbation_solve(const Field &psi, double energy, const Field &dV,
                                      const Eigen::MatrixXd &A, const Field &V,
                                      const SolverOptions &options = {});

// Same, restricted to the antisymmetric sector of g: degeneracy is checked against that
// sector's spectrum only and psi1 is projected with lambda_a. psi and V must be exchange
// symmetric in the sense of the sector (psi antisymmetric, V symmetric).
PerturbationResult perturbation_solve(const Field &psi, double energy, const Field &dV,
                                      const Eigen::MatrixXd &A, const Field &V,
                                      const MultiElectronGrid &g,
                                      const SolverOptions &options = {});

// Orthonormal basis (Euclidean on grid values) of the antisymmetric fields on g, one column
// per exchange orbit without coincident electrons. N! must not exceed 24.
Eigen::MatrixXd antisymmetric_basis(const MultiElectronGrid &g);

struct Eigenpair
{
  double energy = 0.0;
  Field psi;
};

// Dense eigenpairs of H = -div A grad + V in the antisymmetric sector, ascending, with psi
// normalized. The configuration grid must hold at most 4096 points.
std::vector<Eigenpair> antisymmetric_eigenpairs(const MultiElectronGrid &g,
                                                const Eigen::MatrixXd &A, const Field &V);

}  // namespace gammasolve

#endif  // GAMMASOLVE_FERMIONIC_HPP
