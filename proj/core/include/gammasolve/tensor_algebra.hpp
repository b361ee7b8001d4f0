// SPDX-License-Identifier: Apache-2.0

#ifndef GAMMASOLVE_TENSOR_ALGEBRA_HPP
#define GAMMASOLVE_TENSOR_ALGEBRA_HPP

#include <span>

#include <Eigen/Dense>

#include "gammasolve/tensorfield.hpp"

namespace gammasolve
{

// Number of packed components of a symmetric d x d matrix.
inline int sym_size(int d)
{
  return d * (d + 1) / 2;
}

// Packed (Mandel) index of entry (i, j) and its weight (1 on the diagonal, sqrt 2 off it).
int mandel_index(int i, int j, int d);

// Packs the symmetric part of a d x d matrix. Frobenius products are preserved.
Eigen::VectorXcd mandel(const Eigen::MatrixXcd &m);
Eigen::MatrixXcd unmandel(const Eigen::VectorXcd &v, int d);

// sym_size(d) x d^2 map from a row-major full matrix to the packed symmetric part.
// Its transpose is the inverse packing, so P^T C P expands a packed rank-4 tensor.
Eigen::MatrixXd packing_matrix(int d);

// Packed rank-4 projections onto hydrostatic (trace) and trace-free symmetric matrices.
Eigen::MatrixXd hydrostatic_projection(int d);
Eigen::MatrixXd shear_projection(int d);

// 3 kappa Lambda_h + 2 mu Lambda_s in packed form.
Eigen::MatrixXcd isotropic_tensor(int d, cplx bulk, cplx shear);

// d^2 x d^2 action on row-major full matrices: symmetrize, apply, unpack.
// Antisymmetric inputs are annihilated.
Eigen::MatrixXcd expand_rank4(const Eigen::MatrixXcd &packed, int d);

// Row-major flattening of the identity matrix.
Eigen::VectorXd vec_identity(int d);

// Cross-product matrix: eta(k) a = k x a.
Eigen::Matrix3d cross_matrix(std::span<const double> k);

}  // namespace gammasolve

#endif  // GAMMASOLVE_TENSOR_ALGEBRA_HPP
