#include "spinorlab/linalg.hpp"

#include <Eigen/SVD>

namespace spinorlab {

namespace {

Eigen::BDCSVD<Eigen::MatrixXcd> svd_of(const Eigen::MatrixXcd& M, unsigned options) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, options);
  return svd;
}

int rank_from_singular_values(const Eigen::VectorXd& sv, const ToleranceContext& tol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  const double cutoff = tol.svd_rank_cutoff * smax;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (s > cutoff * 10.0) {
      ++rank;
    } else if (s >= cutoff / 10.0) {
      throw ToleranceAmbiguous("singular value " + std::to_string(s) +
                               " within a factor 10 of cutoff " + std::to_string(cutoff));
    }
  }
  return rank;
}

} // namespace

int numerical_rank(const Eigen::MatrixXcd& M, const ToleranceContext& tol) {
  if (M.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return rank_from_singular_values(svd.singularValues(), tol);
}

int numerical_rank(const DenseTensor& t) { return numerical_rank(t.as_matrix(), t.tol()); }

Eigen::MatrixXcd span_basis(const Eigen::MatrixXcd& columns, const ToleranceContext& tol) {
  if (columns.size() == 0) return Eigen::MatrixXcd(columns.rows(), 0);
  auto svd = svd_of(columns, Eigen::ComputeThinU);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXcd kernel(const Eigen::MatrixXcd& M, const ToleranceContext& tol) {
  if (M.size() == 0) return Eigen::MatrixXcd::Identity(M.cols(), M.cols());
  auto svd = svd_of(M, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

Eigen::MatrixXcd intersect(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                           const ToleranceContext& tol) {
  if (A.cols() == 0 || B.cols() == 0) return Eigen::MatrixXcd(A.rows(), 0);
  Eigen::MatrixXcd stacked(A.rows(), A.cols() + B.cols());
  stacked << A, -B;
  const Eigen::MatrixXcd null = kernel(stacked, tol);
  if (null.cols() == 0) return Eigen::MatrixXcd(A.rows(), 0);
  const Eigen::MatrixXcd inter = A * null.topRows(A.cols());
  return span_basis(inter, tol);
}

bool subspace_contains(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& v,
                       const ToleranceContext& tol) {
  const double nv = v.norm();
  if (nv == 0.0) return true;
  const Eigen::VectorXcd res = v - Q * (Q.adjoint() * v);
  return res.norm() <= tol.eps_rel * nv + tol.eps_abs;
}

int subspace_dim(const Eigen::MatrixXcd& columns, const ToleranceContext& tol) {
  return numerical_rank(columns, tol);
}

} // namespace spinorlab
