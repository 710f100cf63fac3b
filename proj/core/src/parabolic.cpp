#include "spinorlab/parabolic.hpp"

namespace spinorlab {

namespace {

Eigen::MatrixXcd gamma_columns(const CliffordModel& md, const Eigen::VectorXcd& chi, bool up) {
  Eigen::MatrixXcd M(md.dim_s(), md.n());
  for (int a = 0; a < md.n(); ++a)
    M.col(a) = (up ? md.gamma_up(a) : md.gamma(a)) * chi;
  return M;
}

} // namespace

LieElement LieElement::make(const CliffordModel& model, const Eigen::MatrixXcd& phi_lower) {
  if (phi_lower.rows() != model.n() || phi_lower.cols() != model.n())
    throw ValidationError("LieElement: wrong matrix size");
  const double scale = phi_lower.norm();
  if ((phi_lower + phi_lower.transpose()).norm() > 1e-12 * std::max(scale, 1.0))
    throw NotSkew("LieElement");
  LieElement e;
  e.phi_ = phi_lower;
  return e;
}

LieElement::Graded LieElement::graded(const DualPair& dp) const {
  Graded g;
  const Eigen::MatrixXcd& XU = dp.xi_up();
  const Eigen::MatrixXcd& EU = dp.eta_up();
  g.minus = XU.transpose() * phi_ * XU;  // φ^{AB}
  g.zero = EU.transpose() * phi_ * XU;   // φ_A^B
  g.plus = EU.transpose() * phi_ * EU;   // φ_{AB}
  return g;
}

int g_filtration_level(const CliffordModel& model, const PureSpinor& xi,
                       const Eigen::MatrixXcd& phi_lower) {
  const ToleranceContext tol{};
  const double nphi = phi_lower.norm();
  const double nxi = xi.components().norm();
  if (nphi == 0.0) return kLevelInfinity;
  const Eigen::MatrixXcd XU = gamma_columns(model, xi.components(), true);

  const double r1 = (XU * phi_lower).norm() / (nphi * nxi);
  if (r1 < tol.eps_rel) return 1;
  const double r0 = (XU * phi_lower * XU.transpose()).norm() / (nphi * nxi * nxi);
  if (r0 < tol.eps_rel) return 0;
  return -1;
}

GProjections g_projections(const CliffordModel& model, const PureSpinor& xi,
                           const Eigen::MatrixXcd& phi_lower) {
  if ((phi_lower + phi_lower.transpose()).norm() > 1e-12 * std::max(phi_lower.norm(), 1.0))
    throw NotSkew("g_projections");
  GProjections out;
  const Eigen::MatrixXcd XU = gamma_columns(model, xi.components(), true);
  out.pi_m1_0 = XU * phi_lower * XU.transpose();
  out.pi_0_0 = -4.0 * (model.spin_action(phi_lower) * xi.components());
  const Eigen::MatrixXcd first = XU * phi_lower; // column b: ξ^{cA} φ_{cb}
  out.pi_0_1.resize(model.dim_s(), model.n());
  for (int b = 0; b < model.n(); ++b)
    out.pi_0_1.col(b) =
        first.col(b) + (1.0 / model.n()) * (model.gamma(b) * out.pi_0_0);
  return out;
}

bool stabilizer_check(const CliffordModel& model, const PureSpinor& xi,
                      const Eigen::MatrixXcd& phi_lower) {
  const ToleranceContext tol{};
  const Eigen::VectorXcd psi = model.spin_action(phi_lower) * xi.components();
  const Eigen::VectorXcd& x = xi.components();
  const Complex coeff = x.dot(psi) / x.squaredNorm();
  const double res = (psi - coeff * x).norm();
  const bool stab = res <= tol.eps_rel * phi_lower.norm() * x.norm() + tol.eps_abs;
  return stab;
}

int spinor_filtration_level(const CliffordModel& model, const PureSpinor& xi,
                            const Eigen::VectorXcd& chi) {
  const ToleranceContext tol{};
  if (chi.norm() == 0.0) return 0;
  const int chir = model.chirality_of(chi);
  if (chir == 0) throw ValidationError("spinor_filtration_level expects a chiral spinor");
  const bool same_side = (chir == xi.chirality());
  const int n = model.n();

  std::vector<Eigen::VectorXcd> images;
  int k = 0;
  Eigen::MatrixXcd basis(model.dim_s(), 0);
  while (true) {
    const int p = same_side ? 2 * k : 2 * k + 1;
    if (p > n) return k; // filtration exhausted
    // append images of degree-p multi-γ applied to ξ
    std::vector<int> combo(p);
    for (int i = 0; i < p; ++i) combo[i] = i;
    std::vector<Eigen::VectorXcd> cols;
    if (p == 0) {
      cols.push_back(xi.components());
    } else {
      while (true) {
        cols.push_back(model.gamma_multi(combo) * xi.components());
        int kk = p - 1;
        while (kk >= 0 && combo[kk] == n - p + kk) --kk;
        if (kk < 0) break;
        ++combo[kk];
        for (int i = kk + 1; i < p; ++i) combo[i] = combo[i - 1] + 1;
      }
    }
    Eigen::MatrixXcd all(model.dim_s(), basis.cols() + cols.size());
    all.leftCols(basis.cols()) = basis;
    for (std::size_t i = 0; i < cols.size(); ++i)
      all.col(basis.cols() + i) = cols[i] / std::max(cols[i].norm(), 1.0);
    basis = span_basis(all, tol);
    if (subspace_contains(basis, chi, tol)) return k;
    ++k;
  }
}

GComponentDims dim_g_components(int m) {
  GComponentDims d;
  d.g_pm1 = m * (m - 1) / 2;
  d.z0 = 1;
  d.sl0 = m * m - 1;
  d.total = m * (2 * m - 1);
  return d;
}

Eigen::MatrixXcd lie_bracket(const CliffordModel& model, const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd Ma = model.vector_action(a);
  const Eigen::MatrixXcd Mb = model.vector_action(b);
  return model.metric() * (Ma * Mb - Mb * Ma);
}

Eigen::MatrixXcd g1_representative(const DualPair& dp, Rng& rng) {
  const int m = dp.model().m();
  const Eigen::MatrixXcd c = rng.skew_matrix(m);
  return dp.xi_low() * c * dp.xi_low().transpose();
}

Eigen::MatrixXcd gm1_representative(const DualPair& dp, Rng& rng) {
  const int m = dp.model().m();
  const Eigen::MatrixXcd c = rng.skew_matrix(m);
  return dp.eta_low() * c * dp.eta_low().transpose();
}

Eigen::MatrixXcd sl0_representative(const DualPair& dp, Rng& rng) {
  const int m = dp.model().m();
  Eigen::MatrixXcd t = rng.matrix(m, m);
  t -= (t.trace() / static_cast<double>(m)) * Eigen::MatrixXcd::Identity(m, m);
  const Eigen::MatrixXcd m1 = dp.xi_low() * t * dp.eta_low().transpose();
  return m1 - m1.transpose();
}

Eigen::MatrixXcd z0_representative(const DualPair& dp) { return dp.grading_element(); }

} // namespace spinorlab
