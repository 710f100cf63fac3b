#include "spinorlab/clifford.hpp"

#include <algorithm>
#include <bit>

#include <unsupported/Eigen/MatrixFunctions>

namespace spinorlab {

namespace {

// sign of moving e_i past the elements of S below i
double wedge_sign(std::uint32_t mask, int i) {
  const std::uint32_t below = mask & ((1u << i) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

int CliffordModel::popcount(std::uint32_t v) { return std::popcount(v); }

CliffordModel CliffordModel::build(int m) {
  if (m < 2 || m > 6) throw UnsupportedDimension("m must lie in [2,6], got " + std::to_string(m));
  CliffordModel md;
  md.m_ = m;
  md.n_ = 2 * m;
  md.dim_s_ = 1 << m;
  const int n = md.n_, ds = md.dim_s_;

  md.g_ = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    md.g_(i, m + i) = 0.5;
    md.g_(m + i, i) = 0.5;
  }
  md.ginv_ = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    md.ginv_(i, m + i) = 2.0;
    md.ginv_(m + i, i) = 2.0;
  }

  // γ_{e_i} ξ = e_i ∧ ξ,  γ_{f_i} ξ = −f_i ⌟ ξ
  md.gamma_.assign(n, Eigen::MatrixXcd::Zero(ds, ds));
  for (int i = 0; i < m; ++i) {
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(ds); ++s) {
      if (!(s & (1u << i)))
        md.gamma_[i](s | (1u << i), s) = wedge_sign(s, i);
      else
        md.gamma_[m + i](s & ~(1u << i), s) = -wedge_sign(s & ~(1u << i), i);
    }
  }
  md.gamma_up_.resize(n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(ds, ds);
    for (int b = 0; b < n; ++b)
      if (md.ginv_(a, b) != 0.0) acc += md.ginv_(a, b) * md.gamma_[b];
    md.gamma_up_[a] = acc;
  }
  // γ^{ab} in index-chain order: the first index acts first, so as a matrix
  // product the chain a,b is γ^b γ^a
  md.gamma_up_pair_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      md.gamma_up_pair_[static_cast<std::size_t>(a) * n + b] =
          0.5 * (md.gamma_up_[b] * md.gamma_up_[a] - md.gamma_up_[a] * md.gamma_up_[b]);

  // orientation element: the volume multi-γ is the product of the commuting
  // hyperbolic-pair bivectors γ_{e_i f_i}; normalised on e_1∧..∧e_m
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(ds, ds);
  for (int i = 0; i < m; ++i)
    q = q * (0.5 * (md.gamma_[i] * md.gamma_[m + i] - md.gamma_[m + i] * md.gamma_[i]));
  const std::uint32_t top = (1u << m) - 1u;
  const Complex mu = q(top, top);
  md.orientation_ = q / mu;
  md.proj_plus_ = 0.5 * (Eigen::MatrixXcd::Identity(ds, ds) + md.orientation_);
  md.proj_minus_ = 0.5 * (Eigen::MatrixXcd::Identity(ds, ds) - md.orientation_);

  // bilinear pairing: B(e_X, e_Y) = rev-sign(|X|) × [e_X ∧ e_Y = ± top]
  md.B_ = Eigen::MatrixXcd::Zero(ds, ds);
  for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(ds); ++x) {
    const std::uint32_t y = top & ~x;
    const int k = std::popcount(x);
    double rev = (((k * (k - 1)) / 2) % 2 == 0) ? 1.0 : -1.0;
    // sign of sorting the concatenation (x ascending, y ascending) into the top
    int inversions = 0;
    for (int i = 0; i < md.m_; ++i)
      if (y & (1u << i))
        for (int j = i + 1; j < md.m_; ++j)
          if (x & (1u << j)) ++inversions;
    const double wedge = (inversions % 2 == 0) ? 1.0 : -1.0;
    md.B_(x, y) = rev * wedge;
  }
  md.eps_ = (Eigen::MatrixXcd::Identity(ds, ds) - 2.0 * md.proj_plus_) * md.B_;

  // Hodge normalisation: make γ_m(ξ,ξ) of the canonical pure spinor self-dual
  md.eps_norm_ = 1.0;
  const DenseTensor phi = md.pform_bilinear(m, md.canonical_pure_spinor(), md.canonical_pure_spinor());
  const DenseTensor star_phi = md.hodge_star(phi);
  Complex kappa(0.0, 0.0);
  double best = -1.0;
  for (std::size_t f = 0; f < phi.size(); ++f) {
    const double a = std::abs(phi[f]);
    if (a > best && a > 0.0) {
      best = a;
      kappa = star_phi[f] / phi[f];
    }
  }
  md.eps_norm_ = 1.0 / kappa.real();

  return md;
}

Eigen::MatrixXcd CliffordModel::gamma_vector(const Eigen::VectorXcd& v_up) const {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim_s_, dim_s_);
  for (int a = 0; a < n_; ++a)
    if (v_up(a) != 0.0) acc += v_up(a) * gamma_[a];
  return acc;
}

int CliffordModel::chirality_of(const Eigen::VectorXcd& s) const {
  const double plus = (proj_plus_ * s).norm();
  const double minus = (proj_minus_ * s).norm();
  const double total = s.norm();
  if (total == 0.0) return 0;
  if (minus <= 1e-12 * total) return 1;
  if (plus <= 1e-12 * total) return -1;
  return 0;
}

Eigen::MatrixXcd CliffordModel::gamma_multi_mask(std::uint32_t mask) const {
  auto it = multi_cache_.find(mask);
  if (it != multi_cache_.end()) return it->second;
  Eigen::MatrixXcd result;
  if (mask == 0) {
    result = Eigen::MatrixXcd::Identity(dim_s_, dim_s_);
  } else {
    // γ_{a b_1..b_q} = γ_a γ_{b_1..b_q} + Σ_j (−1)^{j-1} g_{a b_j} γ_{b_1..^b_j..b_q}
    int a = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << a);
    result = gamma_[a] * gamma_multi_mask(rest);
    int j = 0;
    for (int b = 0; b < n_; ++b) {
      if (!(rest & (1u << b))) continue;
      ++j;
      if (g_(a, b) != 0.0) {
        const double sgn = (j % 2 == 1) ? 1.0 : -1.0;
        result += sgn * g_(a, b) * gamma_multi_mask(rest & ~(1u << b));
      }
    }
  }
  multi_cache_.emplace(mask, result);
  return result;
}

Eigen::MatrixXcd CliffordModel::gamma_multi(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) > n_)
    throw ValidationError("gamma_multi: degree exceeds n");
  std::vector<int> idx(indices.begin(), indices.end());
  for (int a : idx)
    if (a < 0 || a >= n_) throw ValidationError("gamma_multi: index out of range");
  // sort with sign; repeated indices make the antisymmetrisation vanish
  double sign = 1.0;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
  std::uint32_t mask = 0;
  for (int a : idx) {
    if (mask & (1u << a)) return Eigen::MatrixXcd::Zero(dim_s_, dim_s_);
    mask |= (1u << a);
  }
  // index chains compose left-to-right (the first index acts first), which
  // reverses the matrix product and costs (−1)^{p(p−1)/2}
  const int p = static_cast<int>(idx.size());
  if (((p * (p - 1)) / 2) % 2 == 1) sign = -sign;
  return sign * gamma_multi_mask(mask);
}

Eigen::MatrixXcd CliffordModel::gamma_multi(std::initializer_list<int> indices) const {
  std::vector<int> v(indices);
  return gamma_multi(std::span<const int>(v));
}

Complex CliffordModel::bilinear(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta) const {
  return xi.transpose() * B_ * eta;
}

Eigen::MatrixXcd CliffordModel::lowered_gamma_multi(std::span<const int> indices) const {
  return gamma_multi(indices).transpose() * eps_;
}

DenseTensor CliffordModel::pform_bilinear(int p, const Eigen::VectorXcd& xi,
                                          const Eigen::VectorXcd& eta) const {
  if (p < 0 || p > n_) throw ValidationError("pform_bilinear: bad degree");
  if (p == 0) return DenseTensor::scalar(xi.transpose() * eps_ * eta);
  DenseTensor out(std::vector<int>(p, n_), std::vector<IndexRole>(p, IndexRole::VectorDown));
  std::vector<int> combo(p);
  for (int i = 0; i < p; ++i) combo[i] = i;
  const Eigen::VectorXcd eps_eta = eps_ * eta;
  std::vector<int> idx(p);
  while (true) {
    const Complex value = (gamma_multi(combo) * xi).transpose() * eps_eta;
    if (value != Complex(0.0, 0.0)) {
      // distribute over all permutations with sign
      std::vector<int> perm(p);
      for (int i = 0; i < p; ++i) perm[i] = i;
      std::sort(perm.begin(), perm.end());
      do {
        int inversions = 0;
        for (int a = 0; a < p; ++a)
          for (int b = a + 1; b < p; ++b)
            if (perm[a] > perm[b]) ++inversions;
        for (int i = 0; i < p; ++i) idx[i] = combo[perm[i]];
        out.at(idx) = ((inversions % 2 == 0) ? 1.0 : -1.0) * value;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    // next increasing combination
    int k = p - 1;
    while (k >= 0 && combo[k] == n_ - p + k) --k;
    if (k < 0) break;
    ++combo[k];
    for (int i = k + 1; i < p; ++i) combo[i] = combo[i - 1] + 1;
  }
  return out;
}

Eigen::MatrixXcd CliffordModel::spin_action(const Eigen::MatrixXcd& phi_lower) const {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim_s_, dim_s_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (phi_lower(a, b) != 0.0)
        acc += phi_lower(a, b) * gamma_up_pair_[static_cast<std::size_t>(a) * n_ + b];
  return -0.25 * acc;
}

Eigen::MatrixXcd CliffordModel::vector_action(const Eigen::MatrixXcd& phi_lower) const {
  return -ginv_ * phi_lower;
}

Eigen::MatrixXcd CliffordModel::spin_group(const Eigen::MatrixXcd& phi_lower) const {
  return spin_action(phi_lower).exp();
}

Eigen::MatrixXcd CliffordModel::vector_group(const Eigen::MatrixXcd& phi_lower) const {
  return vector_action(phi_lower).exp();
}

DenseTensor CliffordModel::lie_action_lower(const Eigen::MatrixXcd& phi_lower,
                                            const DenseTensor& T) const {
  for (IndexRole r : T.roles())
    if (r != IndexRole::VectorDown)
      throw RoleMismatch("lie_action_lower expects all-lower vector indices");
  const Eigen::MatrixXcd M = vector_action(phi_lower); // (φ·V)^b = M[b][c] V^c
  DenseTensor out(T.shape(), T.roles(), T.tol());
  const int r = T.rank();
  std::vector<int> idx(r), src(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    Complex acc(0.0, 0.0);
    for (int slot = 0; slot < r; ++slot) {
      src = idx;
      for (int c = 0; c < n_; ++c) {
        if (M(c, idx[slot]) == 0.0) continue;
        src[slot] = c;
        acc -= M(c, idx[slot]) * T.at(src);
      }
    }
    out[f] = acc;
  }
  return out;
}

DenseTensor CliffordModel::hodge_star(const DenseTensor& form) const {
  const int p = form.rank();
  if (p > n_) throw ValidationError("hodge_star: degree exceeds n");
  bool upper = true, lower = true;
  for (IndexRole r : form.roles()) {
    upper = upper && (r == IndexRole::VectorUp);
    lower = lower && (r == IndexRole::VectorDown);
  }
  if (!(upper || lower)) throw RoleMismatch("hodge_star expects uniform vector indices");
  if (p > 0) {
    const DenseTensor skew = [&] {
      std::vector<int> all(p);
      for (int i = 0; i < p; ++i) all[i] = i;
      return form.antisymmetrize(all);
    }();
    double scale = std::max(form.norm(), 1.0);
    if ((form - skew).norm() > form.tol().eps_abs * scale)
      throw NotSkew("hodge_star input");
  }

  // raise all indices if the input carries lower ones
  DenseTensor up = form;
  if (lower && p > 0) {
    DenseTensor raised(form.shape(), std::vector<IndexRole>(p, IndexRole::VectorUp), form.tol());
    std::vector<int> idx(p), src(p);
    for (std::size_t f = 0; f < raised.size(); ++f) {
      raised.unflatten(f, idx);
      // each slot pairs e_i ↔ f_i with factor 2 in g^{-1}
      Complex acc(0.0, 0.0);
      double coeff = 1.0;
      for (int s = 0; s < p; ++s) {
        src[s] = (idx[s] + m_) % n_;
        coeff *= 2.0;
      }
      acc = coeff * form.at(src);
      raised[f] = acc;
    }
    up = raised;
  }

  const int q = n_ - p;
  DenseTensor out(std::vector<int>(q, n_),
                  std::vector<IndexRole>(q, lower ? IndexRole::VectorDown : IndexRole::VectorUp),
                  form.tol());
  if (q == 0) {
    // scalar: (*η) = (1/p!) η^{a1..an} ε_{a1..an} → single increasing term × eps
    std::vector<int> a(n_);
    for (int i = 0; i < n_; ++i) a[i] = i;
    DenseTensor scal = DenseTensor::scalar(up.at(a) * eps_norm_, form.tol());
    return scal;
  }

  std::vector<int> bsel(q), asel(p), idx(q);
  // iterate over increasing b-tuples
  std::vector<int> combo(q);
  for (int i = 0; i < q; ++i) combo[i] = i;
  while (true) {
    // complement of combo
    int ai = 0;
    {
      std::vector<char> used(n_, 0);
      for (int b : combo) used[b] = 1;
      for (int v = 0; v < n_; ++v)
        if (!used[v]) asel[ai++] = v;
    }
    Complex value(0.0, 0.0);
    if (p == 0) {
      value = up.data()[0];
    } else {
      value = up.at(asel);
    }
    if (value != Complex(0.0, 0.0)) {
      // ε sign of (asel ++ combo) as a permutation of 0..n-1
      std::vector<int> full(asel.begin(), asel.begin() + p);
      full.insert(full.end(), combo.begin(), combo.end());
      int inversions = 0;
      for (std::size_t x = 0; x < full.size(); ++x)
        for (std::size_t y = x + 1; y < full.size(); ++y)
          if (full[x] > full[y]) ++inversions;
      const double sgn = (inversions % 2 == 0) ? 1.0 : -1.0;
      const Complex comp = value * sgn * eps_norm_;
      // fill the skew output over permutations of combo
      std::vector<int> perm(q);
      for (int i = 0; i < q; ++i) perm[i] = i;
      do {
        int inv2 = 0;
        for (int x = 0; x < q; ++x)
          for (int y = x + 1; y < q; ++y)
            if (perm[x] > perm[y]) ++inv2;
        for (int i = 0; i < q; ++i) idx[i] = combo[perm[i]];
        out.at(idx) = ((inv2 % 2 == 0) ? 1.0 : -1.0) * comp;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int k = q - 1;
    while (k >= 0 && combo[k] == n_ - q + k) --k;
    if (k < 0) break;
    ++combo[k];
    for (int i = k + 1; i < q; ++i) combo[i] = combo[i - 1] + 1;
  }
  return out;
}

Eigen::VectorXcd CliffordModel::canonical_pure_spinor() const {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(dim_s_);
  s((1 << m_) - 1) = 1.0;
  return s;
}

Eigen::VectorXcd CliffordModel::canonical_opposite_spinor() const {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(dim_s_);
  s(0) = 1.0;
  return s;
}

} // namespace spinorlab
