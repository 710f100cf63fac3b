#include "spinorlab/pure_spinor.hpp"

#include <cmath>

namespace spinorlab {

namespace {

// columns γ_a χ for all a (dim_s × n)
Eigen::MatrixXcd gamma_columns(const CliffordModel& md, const Eigen::VectorXcd& chi, bool up) {
  Eigen::MatrixXcd M(md.dim_s(), md.n());
  for (int a = 0; a < md.n(); ++a)
    M.col(a) = (up ? md.gamma_up(a) : md.gamma(a)) * chi;
  return M;
}

} // namespace

PurityReport is_pure(const CliffordModel& model, const Eigen::VectorXcd& chi) {
  const double scale = chi.norm();
  if (scale == 0.0) throw ZeroSpinor("is_pure");
  if (model.chirality_of(chi) == 0)
    throw ValidationError("is_pure expects a chiral spinor");

  PurityReport rep;
  const ToleranceContext tol{};
  const int m = model.m();

  // kernel test: dim ker(a -> γ_a χ) == m
  const Eigen::MatrixXcd K = gamma_columns(model, chi, false);
  rep.kernel_dim = model.n() - numerical_rank(K / scale, tol);
  const bool kernel_pure = (rep.kernel_dim == m);

  // quadric test: ξ^{aA} ξ_a^B = 0
  const Eigen::MatrixXcd Ku = gamma_columns(model, chi, true);
  Eigen::MatrixXcd quad = Eigen::MatrixXcd::Zero(model.dim_s(), model.dim_s());
  for (int a = 0; a < model.n(); ++a) quad += Ku.col(a) * K.col(a).transpose();
  rep.quadric_residual = quad.norm() / (scale * scale * std::sqrt(model.n()));
  const bool quadric_pure = rep.quadric_residual < tol.eps_rel;

  // Cartan test: γ_{a1..ap}(χ,χ) = 0 for p < m, m − p ≡ 0 (mod 4), top form ≠ 0
  bool cartan_pure = true;
  for (int p = m - 4; p >= 0; p -= 4) {
    const DenseTensor form = model.pform_bilinear(p, chi, chi);
    const double res = form.norm() / (scale * scale);
    rep.cartan_degrees.push_back(p);
    rep.cartan_residuals.push_back(res);
    if (res >= tol.eps_rel) cartan_pure = false;
  }
  const DenseTensor top = model.pform_bilinear(m, chi, chi);
  rep.top_form_norm = top.norm() / (scale * scale);
  if (rep.top_form_norm < tol.eps_rel) cartan_pure = false;

  if (kernel_pure != quadric_pure || kernel_pure != cartan_pure)
    throw InconsistentVerdict("purity tests disagree: kernel=" + std::to_string(kernel_pure) +
                              " quadric=" + std::to_string(quadric_pure) +
                              " cartan=" + std::to_string(cartan_pure));
  rep.pure = kernel_pure;
  return rep;
}

PureSpinor PureSpinor::make(const CliffordModel& model, const Eigen::VectorXcd& components) {
  PureSpinor out;
  out.certificate_ = is_pure(model, components);
  if (!out.certificate_.pure) throw NotPure("PureSpinor::make");
  out.chirality_ = model.chirality_of(components);
  out.components_ = components;
  const Eigen::MatrixXcd K = gamma_columns(model, components, false) / components.norm();
  out.annihilator_ = kernel(K, ToleranceContext{});
  return out;
}

PureSpinor PureSpinor::canonical(const CliffordModel& model) {
  return make(model, model.canonical_pure_spinor());
}

PureSpinor PureSpinor::random(const CliffordModel& model, Rng& rng, int chirality) {
  Eigen::VectorXcd seed;
  if (chirality > 0) {
    seed = model.canonical_pure_spinor();
  } else {
    // e_1∧..∧e_{m−1} has opposite parity to the canonical spinor
    seed = Eigen::VectorXcd::Zero(model.dim_s());
    seed((1 << (model.m() - 1)) - 1) = 1.0;
  }
  const Eigen::MatrixXcd phi = 0.5 * rng.skew_matrix(model.n());
  return make(model, model.spin_group(phi) * seed);
}

PureSpinor PureSpinor::from_null_plane(const CliffordModel& model, const Eigen::MatrixXcd& plane) {
  if (plane.rows() != model.n() || plane.cols() != model.m())
    throw ValidationError("from_null_plane: plane must be n×m");
  // null check
  const Eigen::MatrixXcd gram = plane.transpose() * model.metric() * plane;
  if (gram.norm() > 1e-10 * plane.norm() * plane.norm())
    throw ValidationError("from_null_plane: plane is not totally null");
  // joint kernel of the γ(V_i)
  Eigen::MatrixXcd stacked(model.dim_s() * model.m(), model.dim_s());
  for (int i = 0; i < model.m(); ++i)
    stacked.middleRows(i * model.dim_s(), model.dim_s()) =
        model.gamma_vector(plane.col(i)) / plane.col(i).norm();
  const Eigen::MatrixXcd null = kernel(stacked, ToleranceContext{});
  if (null.cols() != 1)
    throw ValidationError("from_null_plane: annihilated space is not a line");
  return make(model, null.col(0));
}

int intersection_dim(const CliffordModel& model, const PureSpinor& a, const PureSpinor& b) {
  const int m = model.m();
  const double scale = a.components().norm() * b.components().norm();
  const ToleranceContext tol{};

  // γ-bilinear ladder: smallest degree with a nonvanishing bilinear
  const bool same_chirality = (a.chirality() == b.chirality());
  // meaningful degrees have the parity of the expected intersection dims
  int p0;
  if (same_chirality)
    p0 = (m % 2 == 0) ? 0 : 1;
  else
    p0 = (m % 2 == 0) ? 1 : 0;
  int k_bilinear = -1;
  for (int p = p0; p <= m; p += 2) {
    const DenseTensor form = model.pform_bilinear(p, a.components(), b.components());
    if (form.norm() / scale >= tol.eps_rel) {
      k_bilinear = p;
      break;
    }
  }

  // subspace oracle
  const Eigen::MatrixXcd inter = intersect(a.annihilator(), b.annihilator(), tol);
  const int k_oracle = static_cast<int>(inter.cols());

  if (k_bilinear != k_oracle)
    throw InconsistentVerdict("intersection_dim: bilinear ladder gives " +
                              std::to_string(k_bilinear) + ", subspace oracle gives " +
                              std::to_string(k_oracle));
  return k_oracle;
}

DualPair DualPair::make(const CliffordModel& model, const PureSpinor& xi, std::uint64_t seed) {
  DualPair dp;
  dp.model_ = &model;
  dp.xi_ = xi;
  const int n = model.n(), m = model.m(), ds = model.dim_s();
  const ToleranceContext tol{};

  // dual spinor from a random pure spinor of the complementary corner;
  // B pairs equal chiralities when m is even and opposite ones when m is odd
  const int want_chir = (m % 2 == 0) ? xi.chirality() : -xi.chirality();
  Eigen::VectorXcd corner = model.canonical_opposite_spinor();
  if (model.chirality_of(corner) != want_chir) {
    corner = Eigen::VectorXcd::Zero(ds);
    corner(1) = 1.0; // e_1 ∈ Λ^1 N, the pure spinor of span{e_1, f_2..f_m}
  }
  Rng rng(seed);
  Eigen::VectorXcd chi;
  Complex pairing(0.0, 0.0);
  bool found = false;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Eigen::MatrixXcd phi = 0.5 * rng.skew_matrix(n);
    chi = model.spin_group(phi) * corner;
    pairing = model.bilinear(chi, xi.components());
    if (std::abs(pairing) > 1e-6 * chi.norm() * xi.components().norm()) {
      found = true;
      break;
    }
  }
  if (!found) throw DegenerateDual("no transverse dual candidate after 8 attempts");
  // normalise ξ·η = −1/2
  dp.eta_coef_ = (model.bilinear_matrix().transpose() * chi) * (-0.5 / pairing);

  // planes
  dp.v_plus_ = xi.annihilator();
  Eigen::MatrixXcd eta_rows(n, ds);
  for (int a = 0; a < n; ++a) eta_rows.row(a) = dp.eta_coef_.transpose() * model.gamma(a);
  dp.v_minus_ = kernel(eta_rows.transpose(), tol);
  if (dp.v_minus_.cols() != m) throw DegenerateDual("dual plane has wrong dimension");

  // biorthogonalise: g(u_i, w_j) = δ_ij / 2
  const Eigen::MatrixXcd G = dp.v_plus_.transpose() * model.metric() * dp.v_minus_;
  dp.v_minus_ = dp.v_minus_ * G.inverse() * 0.5;

  // grading element E_{ab} = −ξ_{[a}^A η_{b]A} = −η(γ_{ab} ξ), ω = −2E
  dp.E_.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      dp.E_(a, b) = -(dp.eta_coef_.transpose() * (model.gamma_multi({a, b}) * xi.components()))(0);
  dp.omega_ = -2.0 * dp.E_;

  dp.xi_low_full_ = gamma_columns(model, xi.components(), false);
  dp.xi_up_full_ = gamma_columns(model, xi.components(), true);
  dp.eta_low_full_ = eta_rows;
  dp.eta_up_full_.resize(n, ds);
  for (int a = 0; a < n; ++a)
    dp.eta_up_full_.row(a) = dp.eta_coef_.transpose() * model.gamma_up(a);

  dp.I_ = Eigen::MatrixXcd::Zero(ds, ds);
  for (int a = 0; a < n; ++a)
    dp.I_ += dp.xi_up_full_.col(a) * dp.eta_low_full_.row(a);

  // reduced index machinery
  dp.b_basis_.resize(ds, m);
  for (int A = 0; A < m; ++A)
    dp.b_basis_.col(A) = model.gamma_vector(dp.v_minus_.col(A)) * xi.components();
  Eigen::MatrixXcd raw_rows(m, ds);
  for (int A = 0; A < m; ++A)
    raw_rows.row(A) = dp.eta_coef_.transpose() * model.gamma_vector(dp.v_plus_.col(A));
  const Eigen::MatrixXcd P = raw_rows * dp.b_basis_;
  dp.b_coords_ = P.inverse() * raw_rows;

  dp.xi_low_ = (dp.b_coords_ * dp.xi_low_full_).transpose();
  dp.xi_up_ = (dp.b_coords_ * dp.xi_up_full_).transpose();
  dp.eta_low_ = dp.eta_low_full_ * dp.b_basis_;
  dp.eta_up_ = dp.eta_up_full_ * dp.b_basis_;

  return dp;
}

} // namespace spinorlab
