#ifndef SPINORLAB_LINALG_HPP
#define SPINORLAB_LINALG_HPP

#include <Eigen/Dense>

#include "spinorlab/tensor.hpp"
#include "spinorlab/tolerance.hpp"

namespace spinorlab {

/// Count of singular values above tol.svd_rank_cutoff * sigma_max.
/// Throws ToleranceAmbiguous when a singular value lies within a factor 10
/// of the cutoff.
int numerical_rank(const Eigen::MatrixXcd& M, const ToleranceContext& tol = {});

/// Same, for a two-index DenseTensor using its own tolerance context.
int numerical_rank(const DenseTensor& t);

/// Orthonormal basis of the column span (columns of the result).
Eigen::MatrixXcd span_basis(const Eigen::MatrixXcd& columns, const ToleranceContext& tol = {});

/// Orthonormal basis of the right null space of M.
Eigen::MatrixXcd kernel(const Eigen::MatrixXcd& M, const ToleranceContext& tol = {});

/// Orthonormal basis of span(A) ∩ span(B) (inputs are column-span bases).
Eigen::MatrixXcd intersect(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                           const ToleranceContext& tol = {});

/// True when v lies in the column span of the orthonormal basis Q.
bool subspace_contains(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& v,
                       const ToleranceContext& tol = {});

/// Dimension of a subspace given by a (possibly redundant) spanning set.
int subspace_dim(const Eigen::MatrixXcd& columns, const ToleranceContext& tol = {});

} // namespace spinorlab

#endif
