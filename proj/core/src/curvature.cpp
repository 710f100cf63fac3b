#include "spinorlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spinorlab {

namespace {

constexpr double kFixedPointTol = 1e-13;

// orthogonal projection onto the kernel of the g-trace over slots (i, j)
DenseTensor remove_trace(const CliffordModel& md, const DenseTensor& t, int i, int j) {
  const int n = md.n();
  double c = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c += std::norm(md.metric_inv()(a, b));

  std::vector<int> tshape;
  std::vector<IndexRole> troles;
  for (int k = 0; k < t.rank(); ++k) {
    if (k == i || k == j) continue;
    tshape.push_back(t.shape()[k]);
    troles.push_back(t.roles()[k]);
  }
  if (tshape.empty()) tshape = {};
  DenseTensor tr(tshape, troles, t.tol());
  std::vector<int> idx(t.rank()), oidx(std::max<std::size_t>(tr.rank(), 1));
  for (std::size_t f = 0; f < tr.size(); ++f) {
    tr.unflatten(f, std::span<int>(oidx.data(), tr.rank()));
    int p = 0;
    for (int k = 0; k < t.rank(); ++k)
      if (k != i && k != j) idx[k] = oidx[p++];
    Complex acc(0.0, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (md.metric_inv()(a, b) == 0.0) continue;
        idx[i] = a;
        idx[j] = b;
        acc += md.metric_inv()(a, b) * t.at(idx);
      }
    tr[f] = acc;
  }
  DenseTensor out = t;
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    int p = 0;
    for (int k = 0; k < t.rank(); ++k)
      if (k != i && k != j) oidx[p++] = idx[k];
    const Complex gv = md.metric_inv()(idx[i], idx[j]);
    if (gv != 0.0) out[f] -= gv * tr.at(std::span<const int>(oidx.data(), p)) / c;
  }
  return out;
}

const CliffordModel& model_for(const DenseTensor& t) {
  static std::map<int, CliffordModel> cache;
  const int n = t.shape().empty() ? 0 : t.shape()[0];
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, CliffordModel::build(n / 2)).first;
  return it->second;
}

DenseTensor weyl_project_once(const CliffordModel& md, const DenseTensor& t) {
  DenseTensor u = t.antisymmetrize({0, 1}).antisymmetrize({2, 3});
  u = u - u.antisymmetrize({0, 1, 2});
  u = remove_trace(md, u, 0, 2);
  return u;
}

DenseTensor cotton_project_once(const CliffordModel& md, const DenseTensor& t) {
  DenseTensor u = t.antisymmetrize({1, 2});
  u = u - u.antisymmetrize({0, 1, 2});
  u = remove_trace(md, u, 0, 1);
  return u;
}

} // namespace

DenseTensor project_to_tracefree_ricci(const DenseTensor& raw) {
  if (raw.rank() != 2) throw ValidationError("project_to_tracefree_ricci expects rank 2");
  return remove_trace(model_for(raw), raw.symmetrize({0, 1}), 0, 1);
}

DenseTensor project_to_cotton(const DenseTensor& raw) {
  if (raw.rank() != 3) throw ValidationError("project_to_cotton expects rank 3");
  const CliffordModel& md = model_for(raw);
  DenseTensor u = raw;
  for (int it = 0; it < 400; ++it) {
    DenseTensor v = cotton_project_once(md, u);
    const double delta = (v - u).norm();
    u = v;
    if (delta <= kFixedPointTol * std::max(1.0, u.norm())) break;
  }
  return u;
}

DenseTensor project_to_weyl(const DenseTensor& raw) {
  if (raw.rank() != 4) throw ValidationError("project_to_weyl expects rank 4");
  const CliffordModel& md = model_for(raw);
  DenseTensor u = raw;
  for (int it = 0; it < 400; ++it) {
    DenseTensor v = weyl_project_once(md, u);
    const double delta = (v - u).norm();
    u = v;
    if (delta <= kFixedPointTol * std::max(1.0, u.norm())) break;
  }
  return u;
}

double symmetry_residual(CurvKind kind, const DenseTensor& t) {
  const double scale = std::max(t.norm(), 1e-300);
  switch (kind) {
    case CurvKind::TracefreeRicci: return (t - project_to_tracefree_ricci(t)).norm() / scale;
    case CurvKind::Cotton: return (t - project_to_cotton(t)).norm() / scale;
    case CurvKind::Weyl: return (t - project_to_weyl(t)).norm() / scale;
  }
  return 0.0;
}

TracefreeRicci TracefreeRicci::from(const DenseTensor& t) {
  if (symmetry_residual(CurvKind::TracefreeRicci, t) > 1e-8)
    throw SymmetryViolation("tracefree Ricci");
  TracefreeRicci r;
  r.t_ = t;
  return r;
}

CottonTensor CottonTensor::from(const DenseTensor& t) {
  if (symmetry_residual(CurvKind::Cotton, t) > 1e-8) throw SymmetryViolation("Cotton-York");
  CottonTensor r;
  r.t_ = t;
  return r;
}

WeylTensor WeylTensor::from(const DenseTensor& t) {
  if (symmetry_residual(CurvKind::Weyl, t) > 1e-8) throw SymmetryViolation("Weyl");
  WeylTensor r;
  r.t_ = t;
  return r;
}

// ---------------------------------------------------------------------------
// Projection maps
// ---------------------------------------------------------------------------

namespace {

// ξ-contraction context with optional output-slot probes.  Probes compress
// the free spinor slots of the map outputs (rank computations only); the
// identity probes give the full maps.
struct XiCtx {
  const CliffordModel* md;
  int n, ds, m, km, kp;
  Eigen::VectorXcd xi;
  Eigen::MatrixXcd XL, XU;            // ds × n: γ_a ξ, γ^a ξ
  Eigen::MatrixXcd XU2;               // ds × n²: ξ^{ab}
  Eigen::MatrixXcd PM, PP;            // probes (k × ds)
  Eigen::MatrixXcd XUp, XU2p;         // probed views
  std::vector<Eigen::MatrixXcd> gamP; // PM·γ_a

  XiCtx(const CliffordModel& model, const Eigen::VectorXcd& spinor,
        const Eigen::MatrixXcd* probe_minus = nullptr,
        const Eigen::MatrixXcd* probe_plus = nullptr)
      : md(&model), n(model.n()), ds(model.dim_s()), m(model.m()) {
    xi = spinor / spinor.norm();
    XL.resize(ds, n);
    XU.resize(ds, n);
    for (int a = 0; a < n; ++a) {
      XL.col(a) = model.gamma(a) * xi;
      XU.col(a) = model.gamma_up(a) * xi;
    }
    XU2.resize(ds, n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Eigen::MatrixXcd g2 = Eigen::MatrixXcd::Zero(ds, ds);
        for (int c = 0; c < n; ++c) {
          if (model.metric_inv()(a, c) == 0.0) continue;
          for (int d = 0; d < n; ++d) {
            if (model.metric_inv()(b, d) == 0.0) continue;
            g2 += model.metric_inv()(a, c) * model.metric_inv()(b, d) * model.gamma_multi({c, d});
          }
        }
        XU2.col(a * n + b) = g2 * xi;
      }
    PM = probe_minus ? *probe_minus : Eigen::MatrixXcd::Identity(ds, ds);
    PP = probe_plus ? *probe_plus : Eigen::MatrixXcd::Identity(ds, ds);
    km = static_cast<int>(PM.rows());
    kp = static_cast<int>(PP.rows());
    XUp = PM * XU;
    XU2p = PP * XU2;
    gamP.resize(n);
    for (int a = 0; a < n; ++a) gamP[a] = PM * model.gamma(a);
  }
};

IndexRole mrole() { return IndexRole::SpinorMinus; }
IndexRole prole() { return IndexRole::SpinorPlus; }
IndexRole vrole() { return IndexRole::VectorDown; }

// W(s, x, y) = Σ_{ae} ξ^{ae}(s) T_{ae x y}
std::vector<Complex> left_pair4(const XiCtx& X, const DenseTensor& C) {
  const int n = X.n, ds = X.ds;
  std::vector<Complex> W(static_cast<std::size_t>(ds) * n * n, Complex(0, 0));
  std::vector<int> idx(4);
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e) {
      const auto col = X.XU2.col(a * n + e);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          idx = {a, e, x, y};
          const Complex v = C.at(idx);
          if (v == Complex(0, 0)) continue;
          for (int s = 0; s < ds; ++s)
            W[(static_cast<std::size_t>(s) * n + x) * n + y] += col(s) * v;
        }
    }
  return W;
}

DenseTensor pi_F_impl(const XiCtx& X, int i2, int j, const DenseTensor& F) {
  const int n = X.n, km = X.km;
  if (j != 0 || (i2 != -2 && i2 != 0)) throw UndefinedComponent("pi_F");
  if (i2 == -2) {
    DenseTensor out({km, km}, {mrole(), mrole()}, F.tol());
    const Eigen::MatrixXcd M = X.XUp * F.as_matrix() * X.XUp.transpose();
    for (int A = 0; A < km; ++A)
      for (int B = 0; B < km; ++B) out(A, B) = M(A, B);
    return out;
  }
  DenseTensor out({km, n}, {mrole(), vrole()}, F.tol());
  const Eigen::MatrixXcd M = X.XUp * F.as_matrix();
  for (int A = 0; A < km; ++A)
    for (int b = 0; b < n; ++b) out(A, b) = M(A, b);
  return out;
}

DenseTensor pi_A_impl(const XiCtx& X, int i2, int j, const DenseTensor& A) {
  const int n = X.n, ds = X.ds, km = X.km, kp = X.kp;
  const double dn = 2.0 * X.m;

  // WA(·, d) = Σ_{bc} ξ^{bc} A_{dbc}
  Eigen::MatrixXcd WA = Eigen::MatrixXcd::Zero(ds, n);
  {
    std::vector<int> idx(3);
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          idx = {d, b, c};
          const Complex v = A.at(idx);
          if (v != Complex(0, 0)) WA.col(d) += v * X.XU2.col(b * n + c);
        }
  }
  const Eigen::MatrixXcd WAp = X.PP * WA;

  std::vector<int> idx(3);
  if (i2 == -3 && j == 0) {
    DenseTensor out({km, km, km}, {mrole(), mrole(), mrole()}, A.tol());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          idx = {a, b, c};
          const Complex v = A.at(idx);
          if (v == Complex(0, 0)) continue;
          for (int P = 0; P < km; ++P) {
            const Complex pa = X.XUp(P, a) * v;
            if (pa == Complex(0, 0)) continue;
            for (int Q = 0; Q < km; ++Q) {
              const Complex pb = X.XUp(Q, b) * pa;
              for (int R = 0; R < km; ++R) out(P, Q, R) += pb * X.XUp(R, c);
            }
          }
        }
    return out;
  }
  if (i2 == -1 && j == 0) {
    DenseTensor out({km, kp}, {mrole(), prole()}, A.tol());
    for (int a = 0; a < n; ++a)
      for (int P = 0; P < km; ++P)
        for (int Q = 0; Q < kp; ++Q) out(P, Q) += X.XUp(P, a) * WAp(Q, a);
    return out;
  }
  if (i2 == -1 && (j == 1 || j == 2)) {
    const bool skew = (j == 1);
    const double coeff = skew ? 1.0 / (dn - 2.0) : 3.0 / (2.0 * (dn + 2.0));
    DenseTensor out({n, km, km}, {vrole(), mrole(), mrole()}, A.tol());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          idx = {a, b, c};
          const Complex v = A.at(idx);
          if (v == Complex(0, 0)) continue;
          for (int P = 0; P < km; ++P)
            for (int Q = 0; Q < km; ++Q) {
              if (skew)
                out(a, P, Q) += X.XUp(P, b) * X.XUp(Q, c) * v; // ξ^{bB} ξ^{cC} A_{abc}
              else
                out(c, P, Q) += X.XUp(P, a) * X.XUp(Q, b) * v; // ξ^{aA} ξ^{bB} A_{abc}
            }
        }
    for (int a = 0; a < n; ++a) {
      const Eigen::MatrixXcd G = X.gamP[a] * WA; // km × n
      for (int P = 0; P < km; ++P)
        for (int Q = 0; Q < km; ++Q) {
          Complex acc(0, 0);
          for (int d = 0; d < n; ++d) acc += G(P, d) * X.XUp(Q, d);
          out(a, P, Q) += coeff * acc;
        }
    }
    return skew ? out.antisymmetrize({1, 2}) : out.symmetrize({1, 2});
  }
  if (i2 == 1 && j == 0) {
    DenseTensor out({n, kp}, {vrole(), prole()}, A.tol());
    for (int a = 0; a < n; ++a)
      for (int Q = 0; Q < kp; ++Q) out(a, Q) = WAp(Q, a);
    return out;
  }
  if (i2 == 1 && (j == 1 || j == 2)) {
    const bool skew = (j == 1);
    const double coeff = skew ? 1.0 / (dn - 2.0) : 3.0 / (2.0 * (dn + 2.0));
    DenseTensor out({n, n, km}, {vrole(), vrole(), mrole()}, A.tol());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Eigen::VectorXcd corr = X.gamP[a] * WA.col(b); // km
        for (int P = 0; P < km; ++P) {
          Complex main(0, 0);
          for (int c = 0; c < n; ++c) {
            if (skew)
              idx = {c, a, b}; // ξ^{cA} A_{cab}
            else
              idx = {a, b, c}; // A_{(ab)c} ξ^{cA}
            main += X.XUp(P, c) * A.at(idx);
          }
          out(a, b, P) = main - coeff * corr(P);
        }
      }
    return skew ? out.antisymmetrize({0, 1}) : out.symmetrize({0, 1});
  }
  throw UndefinedComponent("pi_A(" + std::to_string(i2) + "," + std::to_string(j) + ")");
}

DenseTensor pi_C_impl(const XiCtx& X, int i2, int j, const DenseTensor& C) {
  const int n = X.n, ds = X.ds, km = X.km, kp = X.kp;
  const double dn = 2.0 * X.m;
  std::vector<int> idx(4);

  if (i2 == -4 && j == 0) {
    std::vector<Complex> U2(static_cast<std::size_t>(km) * km * n * n, Complex(0, 0));
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        Eigen::MatrixXcd Mab(n, n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            idx = {a, b, c, d};
            Mab(a, b) = C.at(idx);
          }
        const Eigen::MatrixXcd R = X.XUp * Mab * X.XUp.transpose(); // km × km
        for (int P = 0; P < km; ++P)
          for (int Q = 0; Q < km; ++Q)
            U2[((static_cast<std::size_t>(P) * km + Q) * n + c) * n + d] = R(P, Q);
      }
    DenseTensor out({km, km, km, km}, std::vector<IndexRole>(4, mrole()), C.tol());
    for (int P = 0; P < km; ++P)
      for (int Q = 0; Q < km; ++Q) {
        Eigen::MatrixXcd Mcd(n, n);
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            Mcd(c, d) = U2[((static_cast<std::size_t>(P) * km + Q) * n + c) * n + d];
        const Eigen::MatrixXcd R = X.XUp * Mcd * X.XUp.transpose();
        for (int Rr = 0; Rr < km; ++Rr)
          for (int S = 0; S < km; ++S) out(P, Q, Rr, S) = R(Rr, S);
      }
    return out;
  }

  if (i2 == -2 && (j == 0 || j == 1)) {
    // T0(P,Q,s) = ξ^{aP} ξ^{bQ} ξ^{cd}(s) C_{abcd}, full plus index s
    std::vector<Complex> T0(static_cast<std::size_t>(km) * km * ds, Complex(0, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(ds);
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            idx = {a, b, c, d};
            const Complex v = C.at(idx);
            if (v != Complex(0, 0)) t += v * X.XU2.col(c * n + d);
          }
        for (int P = 0; P < km; ++P)
          for (int Q = 0; Q < km; ++Q) {
            const Complex w = X.XUp(P, a) * X.XUp(Q, b);
            if (w == Complex(0, 0)) continue;
            for (int s = 0; s < ds; ++s)
              T0[(static_cast<std::size_t>(P) * km + Q) * ds + s] += w * t(s);
          }
      }
    if (j == 0) {
      DenseTensor out({km, km, kp}, {mrole(), mrole(), prole()}, C.tol());
      for (int P = 0; P < km; ++P)
        for (int Q = 0; Q < km; ++Q) {
          Eigen::VectorXcd t(ds);
          for (int s = 0; s < ds; ++s) t(s) = T0[(static_cast<std::size_t>(P) * km + Q) * ds + s];
          const Eigen::VectorXcd tp = X.PP * t;
          for (int R = 0; R < kp; ++R) out(P, Q, R) = tp(R);
        }
      return out;
    }
    DenseTensor out({km, km, km, n}, {mrole(), mrole(), mrole(), vrole()}, C.tol());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int e = 0; e < n; ++e) {
            idx = {a, b, c, e};
            const Complex v = C.at(idx);
            if (v == Complex(0, 0)) continue;
            for (int P = 0; P < km; ++P) {
              const Complex va = X.XUp(P, a) * v;
              if (va == Complex(0, 0)) continue;
              for (int Q = 0; Q < km; ++Q) {
                const Complex vb = X.XUp(Q, b) * va;
                for (int R = 0; R < km; ++R) out(P, Q, R, e) += vb * X.XUp(R, c);
              }
            }
          }
    for (int e = 0; e < n; ++e)
      for (int P = 0; P < km; ++P)
        for (int Q = 0; Q < km; ++Q)
          for (int R = 0; R < km; ++R) {
            Complex s2(0, 0), s3(0, 0);
            for (int s = 0; s < ds; ++s) {
              s2 += T0[(static_cast<std::size_t>(P) * km + Q) * ds + s] * X.gamP[e](R, s);
              const Complex u1 =
                  T0[(static_cast<std::size_t>(R) * km + P) * ds + s] * X.gamP[e](Q, s);
              const Complex u2 =
                  T0[(static_cast<std::size_t>(R) * km + Q) * ds + s] * X.gamP[e](P, s);
              s3 += 0.5 * (u1 - u2);
            }
            out(P, Q, R, e) += (s2 - s3) / (dn + 2.0);
          }
    return out;
  }

  const auto W = left_pair4(X, C); // W(s, x, y) = ξ^{ae}(s) C_{ae x y}
  auto Wv = [&](int s, int x, int y) { return W[(static_cast<std::size_t>(s) * n + x) * n + y]; };

  if (i2 == 0 && j == 0) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(kp, kp);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Eigen::VectorXcd w(ds);
        for (int s = 0; s < ds; ++s) w(s) = Wv(s, x, y);
        acc += (X.PP * w) * X.XU2p.col(x * n + y).transpose();
      }
    DenseTensor out({kp, kp}, {prole(), prole()}, C.tol());
    for (int P = 0; P < kp; ++P)
      for (int Q = 0; Q < kp; ++Q) out(P, Q) = acc(P, Q);
    return out;
  }

  if (i2 == 0 && j == 1) {
    DenseTensor out({kp, km, n}, {prole(), mrole(), vrole()}, C.tol());
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(kp, ds);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Eigen::VectorXcd w(ds);
        for (int s = 0; s < ds; ++s) w(s) = Wv(s, x, y);
        const Eigen::VectorXcd wp = X.PP * w;
        for (int P = 0; P < kp; ++P)
          for (int Q = 0; Q < km; ++Q) out(P, Q, y) += wp(P) * X.XUp(Q, x);
        K += wp * X.XU2.col(x * n + y).transpose();
      }
    for (int d = 0; d < n; ++d) {
      const Eigen::MatrixXcd G = K * X.gamP[d].transpose();
      for (int P = 0; P < kp; ++P)
        for (int Q = 0; Q < km; ++Q) out(P, Q, d) += G(P, Q) / dn;
    }
    return out;
  }

  if (i2 == 0 && (j == 2 || j == 3)) {
    if (j == 2 && X.m == 3) throw UndefinedComponent("C_0^2 does not occur when m = 3");
    const bool skew = (j == 2);
    DenseTensor main({n, n, km, km}, {vrole(), vrole(), mrole(), mrole()}, C.tol());
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d) {
        // accumulate over the outer pair once per (a, d)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            idx = {a, b, c, d};
            const Complex v = C.at(idx);
            if (v == Complex(0, 0)) continue;
            for (int P = 0; P < km; ++P) {
              const Complex va = X.XUp(P, a) * v;
              if (va == Complex(0, 0)) continue;
              for (int Q = 0; Q < km; ++Q) main(b, c, P, Q) += va * X.XUp(Q, d);
            }
          }
      }
    main = skew ? main.antisymmetrize({0, 1}) : main.symmetrize({0, 1});
    // V(s, b, Q) = Σ_d W(s, d, b) ξ^{dQ}
    std::vector<Complex> V(static_cast<std::size_t>(ds) * n * km, Complex(0, 0));
    for (int s = 0; s < ds; ++s)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          const Complex w = Wv(s, d, b);
          if (w == Complex(0, 0)) continue;
          for (int Q = 0; Q < km; ++Q)
            V[(static_cast<std::size_t>(s) * n + b) * km + Q] += w * X.XUp(Q, d);
        }
    DenseTensor t2({n, n, km, km}, main.roles(), C.tol());
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int P = 0; P < km; ++P)
          for (int Q = 0; Q < km; ++Q) {
            Complex acc(0, 0);
            for (int s = 0; s < ds; ++s)
              acc += V[(static_cast<std::size_t>(s) * n + b) * km + Q] * X.gamP[c](P, s);
            t2(b, c, P, Q) = acc;
          }
    t2 = skew ? t2.antisymmetrize({0, 1}).antisymmetrize({2, 3})
              : t2.symmetrize({0, 1}).symmetrize({2, 3});
    Eigen::MatrixXcd Q2 = Eigen::MatrixXcd::Zero(ds, ds);
    for (int s = 0; s < ds; ++s)
      for (int d = 0; d < n; ++d)
        for (int f = 0; f < n; ++f) {
          const Complex w = Wv(s, d, f);
          if (w == Complex(0, 0)) continue;
          Q2.row(s) += w * X.XU2.col(d * n + f).transpose();
        }
    DenseTensor t3({n, n, km, km}, main.roles(), C.tol());
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Eigen::MatrixXcd G = X.gamP[b] * Q2 * X.gamP[c].transpose();
        for (int P = 0; P < km; ++P)
          for (int Q = 0; Q < km; ++Q) t3(b, c, P, Q) = G(P, Q);
      }
    t3 = skew ? t3.antisymmetrize({0, 1}) : t3.symmetrize({0, 1});
    const double c2 = skew ? 1.0 / (dn - 4.0) : -3.0 / (dn + 4.0);
    const double c3 = skew ? -1.0 / (2.0 * (dn - 2.0) * (dn - 4.0))
                           : -3.0 / (2.0 * (dn + 2.0) * (dn + 4.0));
    return main + t2 * c2 + t3 * c3;
  }

  if (i2 == 2 && j == 0) {
    DenseTensor out({kp, n, n}, {prole(), vrole(), vrole()}, C.tol());
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Eigen::VectorXcd w(ds);
        for (int s = 0; s < ds; ++s) w(s) = Wv(s, x, y);
        const Eigen::VectorXcd wp = X.PP * w;
        for (int P = 0; P < kp; ++P) out(P, x, y) = wp(P);
      }
    return out;
  }

  if (i2 == 2 && j == 1) {
    DenseTensor out({km, n, n, n}, {mrole(), vrole(), vrole(), vrole()}, C.tol());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            idx = {a, b, c, d};
            const Complex v = C.at(idx);
            if (v == Complex(0, 0)) continue;
            for (int P = 0; P < km; ++P) out(P, b, c, d) += X.XUp(P, a) * v;
          }
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int P = 0; P < km; ++P) {
            Complex t2(0, 0), t3a(0, 0), t3b(0, 0);
            for (int s = 0; s < ds; ++s) {
              t2 += X.gamP[b](P, s) * Wv(s, c, d);
              t3a += Wv(s, b, c) * X.gamP[d](P, s);
              t3b += Wv(s, b, d) * X.gamP[c](P, s);
            }
            out(P, b, c, d) += (t2 - 0.5 * (t3a - t3b)) / (dn + 2.0);
          }
    return out;
  }

  throw UndefinedComponent("pi_C(" + std::to_string(i2) + "," + std::to_string(j) + ")");
}

void check_classified_input(const CliffordModel& md, CurvKind kind, const DenseTensor& t) {
  const int want_rank = (kind == CurvKind::TracefreeRicci) ? 2 : (kind == CurvKind::Cotton ? 3 : 4);
  if (t.rank() != want_rank) throw ValidationError("tensor rank does not match family");
  for (int k = 0; k < t.rank(); ++k) {
    if (t.shape()[k] != md.n()) throw ExtentMismatch("tensor extent vs model");
    if (t.roles()[k] != IndexRole::VectorDown)
      throw RoleMismatch("curvature tensors carry all-lower vector indices");
  }
  if (t.norm() > 0 && symmetry_residual(kind, t) > 1e-8)
    throw SymmetryViolation("input lacks the family symmetries");
}

} // namespace

DenseTensor pi_F(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& phi) {
  check_classified_input(model, CurvKind::TracefreeRicci, phi);
  XiCtx X(model, xi.components());
  return pi_F_impl(X, i2, j, phi);
}

DenseTensor pi_A(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& A) {
  check_classified_input(model, CurvKind::Cotton, A);
  XiCtx X(model, xi.components());
  return pi_A_impl(X, i2, j, A);
}

DenseTensor pi_C(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& C) {
  check_classified_input(model, CurvKind::Weyl, C);
  XiCtx X(model, xi.components());
  return pi_C_impl(X, i2, j, C);
}

std::vector<PiKey> pi_keys(CurvKind kind, int m) {
  std::vector<PiKey> keys;
  switch (kind) {
    case CurvKind::TracefreeRicci:
      keys = {{kind, -2, 0}, {kind, 0, 0}};
      break;
    case CurvKind::Cotton:
      keys = {{kind, -3, 0}, {kind, -1, 0}, {kind, -1, 1}, {kind, -1, 2},
              {kind, 1, 0},  {kind, 1, 1},  {kind, 1, 2}};
      break;
    case CurvKind::Weyl:
      keys = {{kind, -4, 0}, {kind, -2, 0}, {kind, -2, 1}, {kind, 0, 0}, {kind, 0, 1}};
      if (m > 3) keys.push_back({kind, 0, 2});
      keys.push_back({kind, 0, 3});
      keys.push_back({kind, 2, 0});
      keys.push_back({kind, 2, 1});
      break;
  }
  return keys;
}

namespace {

std::string family_letter(CurvKind kind) {
  switch (kind) {
    case CurvKind::TracefreeRicci: return "F";
    case CurvKind::Cotton: return "A";
    case CurvKind::Weyl: return "C";
  }
  return "?";
}

std::string level_name(CurvKind kind, int i2) {
  const bool half = (kind == CurvKind::Cotton);
  if (half) return std::to_string(i2) + "/2";
  return std::to_string(i2 / 2);
}

// doubled top level of the family (one above the highest map level)
int top_level2(CurvKind kind) {
  switch (kind) {
    case CurvKind::TracefreeRicci: return 2;
    case CurvKind::Cotton: return 3;
    case CurvKind::Weyl: return 4;
  }
  return 0;
}

int bottom_level2(CurvKind kind) { return -top_level2(kind); }

} // namespace

std::string ClassificationReport::level_string() const {
  const bool half = (kind == CurvKind::Cotton);
  if (zero_tensor) return "zero";
  return half ? (std::to_string(level2) + "/2") : std::to_string(level2 / 2);
}

ClassificationReport classify(const CliffordModel& model, const PureSpinor& xi, CurvKind kind,
                              const DenseTensor& tensor) {
  check_classified_input(model, kind, tensor);
  ClassificationReport rep;
  rep.kind = kind;
  const double scale = tensor.norm();
  if (scale == 0.0) {
    rep.zero_tensor = true;
    rep.level2 = top_level2(kind) + 2;
    rep.position = "0";
    return rep;
  }
  const double threshold = tensor.tol().eps_rel;

  XiCtx X(model, xi.components());
  const auto keys = pi_keys(kind, model.m());
  std::map<std::pair<int, int>, bool> vanish;
  for (const auto& k : keys) {
    DenseTensor out;
    switch (kind) {
      case CurvKind::TracefreeRicci: out = pi_F_impl(X, k.i2, k.j, tensor); break;
      case CurvKind::Cotton: out = pi_A_impl(X, k.i2, k.j, tensor); break;
      case CurvKind::Weyl: out = pi_C_impl(X, k.i2, k.j, tensor); break;
    }
    PiResidual r;
    r.i2 = k.i2;
    r.j = k.j;
    r.value = out.norm() / scale;
    r.vanishes = r.value < threshold;
    rep.residuals.push_back(r);
    vanish[{k.i2, k.j}] = r.vanishes;
  }

  // stage(i2) holds iff all Π_{i2−2}^k vanish
  auto stage_holds = [&](int i2) {
    bool all = true;
    bool any = false;
    for (const auto& r : rep.residuals)
      if (r.i2 == i2 - 2) {
        any = true;
        all = all && r.vanishes;
      }
    return any ? all : false;
  };

  const int top2 = top_level2(kind);
  const int bot2 = bottom_level2(kind);
  int level = bot2;
  for (int i2 = bot2 + 2; i2 <= top2; i2 += 2)
    if (stage_holds(i2)) level = i2;

  // kernel-nesting enforcement: stages below the achieved level must hold too
  for (int i2 = bot2 + 2; i2 <= level; i2 += 2)
    if (!stage_holds(i2))
      throw InconsistentVerdict("filtration stage " + level_name(kind, i2) +
                                " fails below achieved level " + level_name(kind, level));

  rep.level2 = level;
  // survivors: nonvanishing maps at the achieved level
  if (level == top2) {
    rep.survivors.push_back(family_letter(kind) + "_" + level_name(kind, top2) + "^0");
  } else {
    for (const auto& r : rep.residuals)
      if (r.i2 == level && !r.vanishes)
        rep.survivors.push_back(family_letter(kind) + "_" + level_name(kind, level) + "^" +
                                std::to_string(r.j));
  }
  if (rep.survivors.size() == 1) {
    rep.position = rep.survivors.front();
  } else {
    rep.position = family_letter(kind) + "^" + level_name(kind, level) + " {";
    for (std::size_t s = 0; s < rep.survivors.size(); ++s)
      rep.position += (s ? "," : "") + rep.survivors[s];
    rep.position += "}";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dimension tables
// ---------------------------------------------------------------------------

ModuleDims module_dims(CurvKind kind, int m) {
  ModuleDims out;
  auto add = [&](int i2, int j, int dim) {
    out.entries.push_back(
        {i2, j, family_letter(kind) + "_" + level_name(kind, i2) + "^" + std::to_string(j), dim});
  };
  switch (kind) {
    case CurvKind::TracefreeRicci:
      add(2, 0, m * (m + 1) / 2);
      add(0, 0, m * m - 1);
      add(-2, 0, m * (m + 1) / 2);
      out.total = (2 * m - 1) * (m + 1);
      break;
    case CurvKind::Cotton:
      add(3, 0, m * (m * m - 1) / 3);
      add(1, 0, m);
      add(1, 1, m * (m - 2) * (m + 1) / 2);
      add(1, 2, m * (m + 2) * (m - 1) / 2);
      add(-1, 0, m);
      add(-1, 1, m * (m - 2) * (m + 1) / 2);
      add(-1, 2, m * (m + 2) * (m - 1) / 2);
      add(-3, 0, m * (m * m - 1) / 3);
      out.total = 8 * m * (m + 1) * (m - 1) / 3;
      break;
    case CurvKind::Weyl:
      add(4, 0, m * m * (m * m - 1) / 12);
      add(2, 0, m * (m - 1) / 2);
      add(2, 1, m * m * (m * m - 4) / 3);
      add(0, 0, 1);
      add(0, 1, m * m - 1);
      if (m > 3) add(0, 2, m * m * (m + 1) * (m - 3) / 4);
      add(0, 3, m * m * (m - 1) * (m + 3) / 4);
      add(-2, 0, m * (m - 1) / 2);
      add(-2, 1, m * m * (m * m - 4) / 3);
      add(-4, 0, m * m * (m * m - 1) / 12);
      out.total = m * (m + 1) * (2 * m + 1) * (2 * m - 3) / 3;
      break;
  }
  return out;
}

ModuleDims module_dims_g(int m) {
  ModuleDims out;
  out.entries.push_back({2, 0, "g_1^0", m * (m - 1) / 2});
  out.entries.push_back({0, 0, "g_0^0", 1});
  out.entries.push_back({0, 1, "g_0^1", m * m - 1});
  out.entries.push_back({-2, 0, "g_-1^0", m * (m - 1) / 2});
  out.total = m * (2 * m - 1);
  return out;
}

ModuleDims module_dims_w(int m) {
  ModuleDims out;
  out.entries.push_back({-1, 0, "W_-1/2^0", m});
  out.entries.push_back({-1, 1, "W_-1/2^1", m * (m + 1) * (m - 2) / 2});
  out.entries.push_back({-3, 0, "W_-3/2^0", m * (m - 1) * (m - 2) / 6});
  out.entries.push_back({-3, 1, "W_-3/2^1", m * (m * m - 1) / 3});
  out.total = m * m * (m - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Component spaces and spinorial representatives
// ---------------------------------------------------------------------------

namespace {

// constrained m-dimensional multi-index spaces, cached per (m, tag)
struct SmallSpace {
  int rank = 0;
  int m = 0;
  Eigen::MatrixXcd basis; // m^rank × dim, orthonormal columns
};

std::size_t powi(int b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// symmetrisation matrix over the given slots of a rank-k m-tensor
Eigen::MatrixXcd sym_matrix(int m, int k, std::vector<int> slots, bool anti) {
  const std::size_t dim = powi(m, k);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<int> perm(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end());
  std::vector<std::pair<std::vector<int>, double>> perms;
  do {
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
      for (std::size_t b = a + 1; b < perm.size(); ++b)
        if (perm[a] > perm[b]) ++inv;
    perms.emplace_back(perm, (!anti || inv % 2 == 0) ? 1.0 : -1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<int> idx(k), src(k);
  for (std::size_t f = 0; f < dim; ++f) {
    std::size_t rem = f;
    for (int s = k - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % m);
      rem /= m;
    }
    for (const auto& [pp, sign] : perms) {
      src = idx;
      for (std::size_t a = 0; a < slots.size(); ++a) src[slots[a]] = idx[slots[pp[a]]];
      std::size_t g = 0;
      for (int s = 0; s < k; ++s) g = g * m + src[s];
      P(f, g) += sign / static_cast<double>(perms.size());
    }
  }
  return P;
}

// trace functional rows: contract slot i (down) against slot j (up) with δ
Eigen::MatrixXcd trace_rows(int m, int k, int i, int j) {
  const std::size_t dim = powi(m, k);
  const std::size_t rdim = powi(m, k - 2);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(rdim, dim);
  std::vector<int> idx(k);
  for (std::size_t f = 0; f < dim; ++f) {
    std::size_t rem = f;
    for (int s = k - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % m);
      rem /= m;
    }
    if (idx[i] != idx[j]) continue;
    std::size_t g = 0;
    for (int s = 0; s < k; ++s)
      if (s != i && s != j) g = g * m + idx[s];
    K(g, f) += 1.0;
  }
  return K;
}

enum class CompTag {
  Sym2,        // Φ_{(AB)}
  Skew2,       // C_{[AB]}
  Tracefree11, // Φ_A^B, traceless
  Hook3,       // A_{A[BC]}, A_{[ABC]} = 0
  Skew3Tf,     // A_{[AB]}^C traceless
  Sym3Tf,      // A_{(AB)}^C traceless
  Riem4,       // C_{[AB][CD]}, C_{[ABC]D} = 0
  Hook4Tf,     // C_{[AB]C}^D, C_{[ABC]}^D = 0, traceless
  SkewPairTf,  // C_{[AC]}^{[DB]} traceless
  SymPairTf,   // C_{(AC)}^{(DB)} traceless
  Vector,      // λ^A
  TotSkew3,    // Γ^{[ABC]}
  Hook3W,      // Γ^{A[BC]} with Γ^{[ABC]} = 0
  Skew2TfW,    // Γ_A^{[BC]} traceless (slot 0 down, 1,2 up)
};

const SmallSpace& small_space(int m, CompTag tag) {
  static std::map<std::pair<int, int>, SmallSpace> cache;
  const auto key = std::make_pair(m, static_cast<int>(tag));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  SmallSpace sp;
  sp.m = m;
  Eigen::MatrixXcd P;
  Eigen::MatrixXcd K; // constraint rows (may be empty)
  switch (tag) {
    case CompTag::Sym2:
      sp.rank = 2;
      P = sym_matrix(m, 2, {0, 1}, false);
      break;
    case CompTag::Skew2:
      sp.rank = 2;
      P = sym_matrix(m, 2, {0, 1}, true);
      break;
    case CompTag::Tracefree11: {
      sp.rank = 2;
      P = Eigen::MatrixXcd::Identity(powi(m, 2), powi(m, 2));
      K = trace_rows(m, 2, 0, 1);
      break;
    }
    case CompTag::Hook3: {
      sp.rank = 3;
      const auto S = sym_matrix(m, 3, {1, 2}, true);
      const auto A3 = sym_matrix(m, 3, {0, 1, 2}, true);
      P = S - A3 * S;
      break;
    }
    case CompTag::Skew3Tf: {
      sp.rank = 3;
      P = sym_matrix(m, 3, {0, 1}, true);
      Eigen::MatrixXcd K1 = trace_rows(m, 3, 0, 2);
      Eigen::MatrixXcd K2 = trace_rows(m, 3, 1, 2);
      K.resize(K1.rows() + K2.rows(), K1.cols());
      K << K1, K2;
      break;
    }
    case CompTag::Sym3Tf: {
      sp.rank = 3;
      P = sym_matrix(m, 3, {0, 1}, false);
      Eigen::MatrixXcd K1 = trace_rows(m, 3, 0, 2);
      Eigen::MatrixXcd K2 = trace_rows(m, 3, 1, 2);
      K.resize(K1.rows() + K2.rows(), K1.cols());
      K << K1, K2;
      break;
    }
    case CompTag::Riem4: {
      sp.rank = 4;
      const auto S = sym_matrix(m, 4, {0, 1}, true) * sym_matrix(m, 4, {2, 3}, true);
      const auto A3 = sym_matrix(m, 4, {0, 1, 2}, true);
      // iterate to the joint fixed point
      Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(powi(m, 4), powi(m, 4));
      for (int itn = 0; itn < 60; ++itn) {
        Eigen::MatrixXcd next = S * Q;
        next = next - A3 * next;
        if ((next - Q).norm() <= 1e-14 * std::max(1.0, Q.norm())) {
          Q = next;
          break;
        }
        Q = next;
      }
      P = Q;
      break;
    }
    case CompTag::Hook4Tf: {
      sp.rank = 4;
      const auto S = sym_matrix(m, 4, {0, 1}, true);
      const auto A3 = sym_matrix(m, 4, {0, 1, 2}, true);
      P = S - A3 * S;
      Eigen::MatrixXcd K1 = trace_rows(m, 4, 0, 3);
      Eigen::MatrixXcd K2 = trace_rows(m, 4, 1, 3);
      Eigen::MatrixXcd K3 = trace_rows(m, 4, 2, 3);
      K.resize(K1.rows() + K2.rows() + K3.rows(), K1.cols());
      K << K1, K2, K3;
      break;
    }
    case CompTag::SkewPairTf:
    case CompTag::SymPairTf: {
      sp.rank = 4;
      const bool anti = (tag == CompTag::SkewPairTf);
      P = sym_matrix(m, 4, {0, 1}, anti) * sym_matrix(m, 4, {2, 3}, anti);
      // slots 0,1 down; 2,3 up: all four cross traces
      Eigen::MatrixXcd K1 = trace_rows(m, 4, 0, 2);
      Eigen::MatrixXcd K2 = trace_rows(m, 4, 0, 3);
      Eigen::MatrixXcd K3 = trace_rows(m, 4, 1, 2);
      Eigen::MatrixXcd K4 = trace_rows(m, 4, 1, 3);
      K.resize(K1.rows() * 4, K1.cols());
      K << K1, K2, K3, K4;
      break;
    }
    case CompTag::Vector:
      sp.rank = 1;
      P = Eigen::MatrixXcd::Identity(m, m);
      break;
    case CompTag::TotSkew3:
      sp.rank = 3;
      P = sym_matrix(m, 3, {0, 1, 2}, true);
      break;
    case CompTag::Hook3W: {
      sp.rank = 3;
      const auto S = sym_matrix(m, 3, {1, 2}, true);
      const auto A3 = sym_matrix(m, 3, {0, 1, 2}, true);
      P = S - A3 * S;
      break;
    }
    case CompTag::Skew2TfW: {
      sp.rank = 3;
      P = sym_matrix(m, 3, {1, 2}, true);
      Eigen::MatrixXcd K1 = trace_rows(m, 3, 0, 1);
      Eigen::MatrixXcd K2 = trace_rows(m, 3, 0, 2);
      K.resize(K1.rows() + K2.rows(), K1.cols());
      K << K1, K2;
      break;
    }
  }

  ToleranceContext tol{};
  Eigen::MatrixXcd sub = span_basis(P, tol);
  if (K.size() > 0 && sub.cols() > 0) {
    const Eigen::MatrixXcd constr = K * sub;
    const Eigen::MatrixXcd null = kernel(constr, tol);
    sub = sub * null;
  }
  sp.basis = sub;
  it = cache.emplace(key, std::move(sp)).first;
  return it->second;
}

struct CompSpec {
  CompTag tag;
  bool mirrored; // negative level: swap ξ ↔ η
};

CompSpec component_spec(CurvKind kind, int m, int i2, int j) {
  switch (kind) {
    case CurvKind::TracefreeRicci:
      if (i2 == 2 && j == 0) return {CompTag::Sym2, false};
      if (i2 == 0 && j == 0) return {CompTag::Tracefree11, false};
      if (i2 == -2 && j == 0) return {CompTag::Sym2, true};
      break;
    case CurvKind::Cotton:
      if (i2 == 3 && j == 0) return {CompTag::Hook3, false};
      if (i2 == 1 && j == 0) return {CompTag::Vector, false};
      if (i2 == 1 && j == 1) return {CompTag::Skew3Tf, false};
      if (i2 == 1 && j == 2) return {CompTag::Sym3Tf, false};
      if (i2 == -1 && j == 0) return {CompTag::Vector, true};
      if (i2 == -1 && j == 1) return {CompTag::Skew3Tf, true};
      if (i2 == -1 && j == 2) return {CompTag::Sym3Tf, true};
      if (i2 == -3 && j == 0) return {CompTag::Hook3, true};
      break;
    case CurvKind::Weyl:
      if (i2 == 4 && j == 0) return {CompTag::Riem4, false};
      if (i2 == 2 && j == 0) return {CompTag::Skew2, false};
      if (i2 == 2 && j == 1) return {CompTag::Hook4Tf, false};
      if (i2 == 0 && j == 0) return {CompTag::Vector, false}; // 1-dim, dummy scalar
      if (i2 == 0 && j == 1) return {CompTag::Tracefree11, false};
      if (i2 == 0 && j == 2) {
        if (m == 3) throw UndefinedComponent("C_0^2 does not occur when m = 3");
        return {CompTag::SkewPairTf, false};
      }
      if (i2 == 0 && j == 3) return {CompTag::SymPairTf, false};
      if (i2 == -2 && j == 0) return {CompTag::Skew2, true};
      if (i2 == -2 && j == 1) return {CompTag::Hook4Tf, true};
      if (i2 == -4 && j == 0) return {CompTag::Riem4, true};
      break;
  }
  throw UndefinedComponent("component (" + std::to_string(i2) + "," + std::to_string(j) + ")");
}

// contraction arrays of the dual pair: P1 = ξ_a in reduced coordinates,
// P2 = η_a evaluated on the reduced basis; mirrored reps swap them and flip ω
struct RepArrays {
  Eigen::MatrixXcd p1, p2; // n × m
  Eigen::MatrixXcd omega;  // n × n
  const CliffordModel* md;
};

RepArrays rep_arrays(const DualPair& dp, bool mirrored) {
  RepArrays ra;
  ra.md = &dp.model();
  if (!mirrored) {
    ra.p1 = dp.xi_low();
    ra.p2 = dp.eta_low();
    ra.omega = dp.omega();
  } else {
    ra.p1 = dp.eta_low();
    ra.p2 = dp.xi_low();
    ra.omega = -dp.omega();
  }
  return ra;
}

DenseTensor assemble_representative(const RepArrays& ra, CurvKind kind, int i2, int j,
                                    const Eigen::VectorXcd& comp, int m) {
  const CliffordModel& md = *ra.md;
  const int n = md.n();
  const auto& g = md.metric();
  const auto& ginv = md.metric_inv();
  const Eigen::MatrixXcd& P1 = ra.p1;
  const Eigen::MatrixXcd& P2 = ra.p2;
  const Eigen::MatrixXcd& om = ra.omega;
  auto cidx2 = [&](int A, int B) { return comp(A * m + B); };
  auto cidx3 = [&](int A, int B, int C) { return comp((A * m + B) * m + C); };
  auto cidx4 = [&](int A, int B, int C, int D) { return comp(((A * m + B) * m + C) * m + D); };

  if (kind == CurvKind::TracefreeRicci) {
    DenseTensor out({n, n}, {vrole(), vrole()});
    Eigen::MatrixXcd M(m, m);
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) M(A, B) = cidx2(A, B);
    Eigen::MatrixXcd R;
    if (i2 == 0) {
      const Eigen::MatrixXcd T = P1 * M * P2.transpose();
      R = T + T.transpose();
    } else {
      R = P1 * M * P1.transpose();
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) = R(a, b);
    return out;
  }

  if (kind == CurvKind::Cotton) {
    DenseTensor out({n, n, n}, {vrole(), vrole(), vrole()});
    if (std::abs(i2) == 3) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            Complex acc(0, 0);
            for (int A = 0; A < m; ++A)
              for (int B = 0; B < m; ++B)
                for (int C = 0; C < m; ++C)
                  acc += P1(a, A) * P1(b, B) * P1(c, C) * cidx3(A, B, C);
            out(a, b, c) = acc;
          }
      return out;
    }
    if (j == 0) {
      // A_{abc} = A_a ω_{bc} − A_{[b} ω_{c]a} + 3/(n−1) g_{a[b} ω_{c]d} A^d
      const Eigen::VectorXcd Av = P1 * comp;
      const Eigen::VectorXcd Aup = ginv * Av;
      const Eigen::VectorXcd omA = om * Aup; // ω_{cd} A^d
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            Complex acc = Av(a) * om(b, c);
            acc -= 0.5 * (Av(b) * om(c, a) - Av(c) * om(b, a));
            acc += (3.0 / (n - 1.0)) * 0.5 * (g(a, b) * omA(c) - g(a, c) * omA(b));
            out(a, b, c) = acc;
          }
      return out;
    }
    // j = 1: A_{abc} = ξ_b^A ξ_c^B η_{aC} T_{AB}^C − ξ_a^A ξ_{[b}^B η_{c]C} T_{AB}^C
    // j = 2: A_{abc} = 2 ξ_a^A ξ_{[b}^B η_{c]C} T_{AB}^C
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          Complex acc(0, 0);
          for (int A = 0; A < m; ++A)
            for (int B = 0; B < m; ++B)
              for (int C = 0; C < m; ++C) {
                const Complex T = cidx3(A, B, C);
                if (T == Complex(0, 0)) continue;
                if (j == 1) {
                  acc += P1(b, A) * P1(c, B) * P2(a, C) * T;
                  acc -= P1(a, A) * 0.5 * (P1(b, B) * P2(c, C) - P1(c, B) * P2(b, C)) * T;
                } else {
                  acc += 2.0 * P1(a, A) * 0.5 * (P1(b, B) * P2(c, C) - P1(c, B) * P2(b, C)) * T;
                }
              }
          out(a, b, c) = acc;
        }
    return out;
  }

  // Weyl
  DenseTensor out({n, n, n, n}, std::vector<IndexRole>(4, vrole()));
  if (std::abs(i2) == 4) {
    // stagewise ξ_a^A ξ_b^B ξ_c^C ξ_d^D C_{ABCD}
    std::vector<Complex> U1(static_cast<std::size_t>(n) * m * m * m, Complex(0, 0));
    for (int a = 0; a < n; ++a)
      for (int B = 0; B < m; ++B)
        for (int C = 0; C < m; ++C)
          for (int D = 0; D < m; ++D) {
            Complex acc(0, 0);
            for (int A = 0; A < m; ++A) acc += P1(a, A) * cidx4(A, B, C, D);
            U1[((static_cast<std::size_t>(a) * m + B) * m + C) * m + D] = acc;
          }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc(0, 0);
            for (int B = 0; B < m; ++B)
              for (int C = 0; C < m; ++C)
                for (int D = 0; D < m; ++D)
                  acc += U1[((static_cast<std::size_t>(a) * m + B) * m + C) * m + D] * P1(b, B) *
                         P1(c, C) * P1(d, D);
            out(a, b, c, d) = acc;
          }
    return out;
  }
  if (std::abs(i2) == 2 && j == 0) {
    Eigen::MatrixXcd M(m, m);
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) M(A, B) = cidx2(A, B);
    const Eigen::MatrixXcd Kk = P1 * M * P1.transpose(); // skew
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc = om(a, b) * Kk(c, d) + Kk(a, b) * om(c, d);
            acc -= 0.5 * (om(a, c) * Kk(d, b) - om(a, d) * Kk(c, b) - om(b, c) * Kk(d, a) +
                          om(b, d) * Kk(c, a));
            out(a, b, c, d) = acc;
          }
    return out;
  }
  if (std::abs(i2) == 2 && j == 1) {
    // 2 ξ_a ξ_b ξ_{[c} η_{d]} T + 2 ξ_c ξ_d ξ_{[a} η_{b]} T
    std::vector<Complex> U(static_cast<std::size_t>(n) * n * m * m, Complex(0, 0));
    // U(a,b,C,D-пара) = ξ_a^A ξ_b^B T_{ABC}^D
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int C = 0; C < m; ++C)
          for (int D = 0; D < m; ++D) {
            Complex acc(0, 0);
            for (int A = 0; A < m; ++A)
              for (int B = 0; B < m; ++B) acc += P1(a, A) * P1(b, B) * cidx4(A, B, C, D);
            U[((static_cast<std::size_t>(a) * n + b) * m + C) * m + D] = acc;
          }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc(0, 0);
            for (int C = 0; C < m; ++C)
              for (int D = 0; D < m; ++D) {
                const Complex u1 = U[((static_cast<std::size_t>(a) * n + b) * m + C) * m + D];
                const Complex u2 = U[((static_cast<std::size_t>(c) * n + d) * m + C) * m + D];
                acc += u1 * (P1(c, C) * P2(d, D) - P1(d, C) * P2(c, D));
                acc += u2 * (P1(a, C) * P2(b, D) - P1(b, C) * P2(a, D));
              }
            out(a, b, c, d) = acc;
          }
    return out;
  }
  if (i2 == 0 && j == 0) {
    const Complex c0 = comp(0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc = 2.0 * om(a, b) * om(c, d);
            acc -= om(a, c) * om(d, b) - om(a, d) * om(c, b);
            acc += (6.0 / (n - 1.0)) * 0.5 * (g(a, c) * g(d, b) - g(a, d) * g(c, b));
            out(a, b, c, d) = c0 * acc;
          }
    return out;
  }
  if (i2 == 0 && j == 1) {
    Eigen::MatrixXcd M(m, m);
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) M(A, B) = cidx2(A, B);
    const Eigen::MatrixXcd T = P1 * M * P2.transpose();
    const Eigen::MatrixXcd Kk = T - T.transpose(); // C_{cd} = 2 ξ_{[c} η_{d]} C
    const Eigen::MatrixXcd omue = om * ginv;       // ω_d{}^e (second index raised)
    const Eigen::MatrixXcd KOm = Kk * omue.transpose();
    // KOm(b, d) = ω_d{}^e K_{be}
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc = om(a, b) * Kk(c, d) + Kk(a, b) * om(c, d);
            acc -= 0.5 * (om(a, c) * Kk(d, b) - om(a, d) * Kk(c, b) - om(b, c) * Kk(d, a) +
                          om(b, d) * Kk(c, a));
            Complex tr1(0, 0), tr2(0, 0);
            // g_{[a|[c} ω_{d]}{}^e C_{|b]e}: skew (a,b) and (c,d)
            tr1 = 0.25 * (g(a, c) * KOm(b, d) - g(a, d) * KOm(b, c) - g(b, c) * KOm(a, d) +
                          g(b, d) * KOm(a, c));
            // g_{[c|[a} ω_{b]}{}^e C_{|d]e}
            tr2 = 0.25 * (g(c, a) * KOm(d, b) - g(c, b) * KOm(d, a) - g(d, a) * KOm(c, b) +
                          g(d, b) * KOm(c, a));
            acc -= (6.0 / (n - 2.0)) * (tr1 + tr2);
            out(a, b, c, d) = acc;
          }
    return out;
  }
  if (i2 == 0 && (j == 2 || j == 3)) {
    // j=2: ξ_aξ_bη_cη_d T + ξ_cξ_dη_aη_b T − 2 ξ_{[a|}ξ_{[c}η_{d]|}η_{b]} T'
    // j=3: 4 ξ_{[a|}ξ_{[c}η_{d]|}η_{b]} T
    auto TT = [&](int A, int C, int D, int B) { return cidx4(A, C, D, B); };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex cross(0, 0);
            for (int A = 0; A < m; ++A)
              for (int C = 0; C < m; ++C)
                for (int D = 0; D < m; ++D)
                  for (int B = 0; B < m; ++B) {
                    const Complex t = TT(A, C, D, B);
                    if (t == Complex(0, 0)) continue;
                    // Skew(a,b) Skew(c,d) of ξ_a^A ξ_c^C η_{dD} η_{bB}
                    const Complex s =
                        0.25 *
                        ((P1(a, A) * P1(c, C) * P2(d, D) * P2(b, B)) -
                         (P1(a, A) * P1(d, C) * P2(c, D) * P2(b, B)) -
                         (P1(b, A) * P1(c, C) * P2(d, D) * P2(a, B)) +
                         (P1(b, A) * P1(d, C) * P2(c, D) * P2(a, B)));
                    cross += s * t;
                  }
            if (j == 3) {
              out(a, b, c, d) = 4.0 * cross;
            } else {
              Complex direct(0, 0);
              for (int A = 0; A < m; ++A)
                for (int B = 0; B < m; ++B)
                  for (int C = 0; C < m; ++C)
                    for (int D = 0; D < m; ++D) {
                      const Complex t = cidx4(A, B, C, D); // T_{AB}^{CD}
                      if (t == Complex(0, 0)) continue;
                      direct += P1(a, A) * P1(b, B) * P2(c, C) * P2(d, D) * t;
                      direct += P1(c, A) * P1(d, B) * P2(a, C) * P2(b, D) * t;
                    }
              // cross uses T_{AC}^{DB}: rewire the component accordingly
              Complex cross2(0, 0);
              for (int A = 0; A < m; ++A)
                for (int C = 0; C < m; ++C)
                  for (int D = 0; D < m; ++D)
                    for (int B = 0; B < m; ++B) {
                      const Complex t = cidx4(A, C, D, B); // T_{AC}^{DB}
                      if (t == Complex(0, 0)) continue;
                      const Complex s =
                          0.25 *
                          ((P1(a, A) * P1(c, C) * P2(d, D) * P2(b, B)) -
                           (P1(a, A) * P1(d, C) * P2(c, D) * P2(b, B)) -
                           (P1(b, A) * P1(c, C) * P2(d, D) * P2(a, B)) +
                           (P1(b, A) * P1(d, C) * P2(c, D) * P2(a, B)));
                      cross2 += s * t;
                    }
              out(a, b, c, d) = direct - 2.0 * cross2;
            }
          }
    return out;
  }
  throw UndefinedComponent("representative (" + std::to_string(i2) + "," + std::to_string(j) +
                           ")");
}

} // namespace

int component_space_dim(CurvKind kind, int m, int i2, int j) {
  const CompSpec spec = component_spec(kind, m, i2, j);
  if (kind == CurvKind::Weyl && i2 == 0 && j == 0) return 1;
  return static_cast<int>(small_space(m, spec.tag).basis.cols());
}

DenseTensor representative(const DualPair& dp, CurvKind kind, int i2, int j, std::uint64_t seed) {
  const int m = dp.model().m();
  const CompSpec spec = component_spec(kind, m, i2, j);
  Rng rng(seed);
  Eigen::VectorXcd comp;
  if (kind == CurvKind::Weyl && i2 == 0 && j == 0) {
    comp = rng.gaussian() * Eigen::VectorXcd::Ones(1); // c-normalisation is 1
  } else {
    const auto& sp = small_space(m, spec.tag);
    comp = sp.basis * rng.vector(static_cast<int>(sp.basis.cols()));
  }
  const RepArrays ra = rep_arrays(dp, spec.mirrored);
  return assemble_representative(ra, kind, i2, j, comp, m);
}

Eigen::MatrixXcd component_tensor_basis(const DualPair& dp, CurvKind kind, int i2, int j) {
  const int m = dp.model().m();
  const CompSpec spec = component_spec(kind, m, i2, j);
  const RepArrays ra = rep_arrays(dp, spec.mirrored);
  Eigen::MatrixXcd cols;
  int d;
  std::size_t tensor_size = 0;
  if (kind == CurvKind::Weyl && i2 == 0 && j == 0) {
    d = 1;
  } else {
    d = static_cast<int>(small_space(m, spec.tag).basis.cols());
  }
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXcd comp;
    if (kind == CurvKind::Weyl && i2 == 0 && j == 0)
      comp = Eigen::VectorXcd::Ones(1);
    else
      comp = small_space(m, spec.tag).basis.col(k);
    DenseTensor t = assemble_representative(ra, kind, i2, j, comp, m);
    if (k == 0) {
      tensor_size = t.size();
      cols.resize(tensor_size, d);
    }
    const double nn = t.norm();
    for (std::size_t f = 0; f < tensor_size; ++f) cols(f, k) = t[f] / (nn > 0 ? nn : 1.0);
  }
  return cols;
}

namespace {

Eigen::MatrixXcd stage_basis(const DualPair& dp, CurvKind kind, int i2_min) {
  const int m = dp.model().m();
  const auto dims = module_dims(kind, m);
  std::vector<Eigen::MatrixXcd> blocks;
  std::size_t rows = 0;
  int total_cols = 0;
  for (const auto& e : dims.entries) {
    if (e.i2 < i2_min) continue;
    blocks.push_back(component_tensor_basis(dp, kind, e.i2, e.j));
    rows = blocks.back().rows();
    total_cols += static_cast<int>(blocks.back().cols());
  }
  Eigen::MatrixXcd out(rows, total_cols);
  int at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += static_cast<int>(b.cols());
  }
  return out;
}

} // namespace

int restricted_pi_rank(const DualPair& dp, CurvKind kind, int i2, int j) {
  const CliffordModel& md = dp.model();
  const int m = md.m();
  const int ds = md.dim_s();
  // probes keep the outputs small at m = 5; identity otherwise
  Eigen::MatrixXcd pm, pp;
  const int kprobe = 10;
  if (ds > 16) {
    Rng rng(0x5eedbeef);
    pm = rng.matrix(kprobe, ds);
    pp = rng.matrix(kprobe, ds);
  } else {
    pm = Eigen::MatrixXcd::Identity(ds, ds);
    pp = Eigen::MatrixXcd::Identity(ds, ds);
  }
  XiCtx X(md, dp.xi().components(), &pm, &pp);
  const Eigen::MatrixXcd dom = stage_basis(dp, kind, i2);
  const int n = md.n();
  const int rank_t = (kind == CurvKind::TracefreeRicci) ? 2 : (kind == CurvKind::Cotton ? 3 : 4);
  std::vector<int> shape(rank_t, n);
  std::vector<IndexRole> roles(rank_t, IndexRole::VectorDown);

  Eigen::MatrixXcd cols;
  for (int k = 0; k < dom.cols(); ++k) {
    DenseTensor t(shape, roles);
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = dom(f, k);
    DenseTensor out;
    switch (kind) {
      case CurvKind::TracefreeRicci: out = pi_F_impl(X, i2, j, t); break;
      case CurvKind::Cotton: out = pi_A_impl(X, i2, j, t); break;
      case CurvKind::Weyl: out = pi_C_impl(X, i2, j, t); break;
    }
    if (k == 0) cols.resize(out.size(), dom.cols());
    for (std::size_t f = 0; f < out.size(); ++f) cols(f, k) = out[f];
  }
  return numerical_rank(cols, ToleranceContext{});
}

// ---------------------------------------------------------------------------
// Integrability residuals
// ---------------------------------------------------------------------------

namespace {

double rel(double v, double scale) { return v / std::max(scale, 1e-300); }

} // namespace

double foliating_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                        const DenseTensor& weyl) {
  XiCtx X(model, xi.components());
  return rel(pi_C_impl(X, -4, 0, weyl).norm(), weyl.norm());
}

double gs_hypothesis_residual(const CliffordModel& model, const PureSpinor& xi,
                              const DenseTensor& weyl) {
  // C_{abcd} ξ^{aA} ξ^{bB} ξ^{cC} = 0
  XiCtx X(model, xi.components());
  const int n = X.n, km = X.km;
  std::vector<int> idx(4);
  DenseTensor out({km, km, km, n}, {mrole(), mrole(), mrole(), vrole()}, weyl.tol());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          idx = {a, b, c, d};
          const Complex v = weyl.at(idx);
          if (v == Complex(0, 0)) continue;
          for (int P = 0; P < km; ++P) {
            const Complex va = X.XUp(P, a) * v;
            if (va == Complex(0, 0)) continue;
            for (int Q = 0; Q < km; ++Q) {
              const Complex vb = X.XUp(Q, b) * va;
              for (int R = 0; R < km; ++R) out(P, Q, R, d) += vb * X.XUp(R, c);
            }
          }
        }
  return rel(out.norm(), weyl.norm());
}

double null_zrm_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                       const DenseTensor& weyl) {
  XiCtx X(model, xi.components());
  return rel(pi_C_impl(X, -2, 0, weyl).norm(), weyl.norm());
}

double twistor_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                      const DenseTensor& weyl) {
  XiCtx X(model, xi.components());
  return rel(pi_C_impl(X, 2, 0, weyl).norm(), weyl.norm());
}

double twistor_pair_curvature_residual(const CliffordModel& model, const PureSpinor& xi,
                                       const Eigen::VectorXcd& zeta, const DenseTensor& weyl,
                                       const DenseTensor& cotton) {
  // C_{abcd} ζ^{cd C} − 2n A_{cab} ξ^{cC} = 0
  const int n = model.n(), ds = model.dim_s();
  Eigen::MatrixXcd ZU2(ds, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::MatrixXcd g2 = Eigen::MatrixXcd::Zero(ds, ds);
      for (int c = 0; c < n; ++c) {
        if (model.metric_inv()(a, c) == 0.0) continue;
        for (int d = 0; d < n; ++d) {
          if (model.metric_inv()(b, d) == 0.0) continue;
          g2 += model.metric_inv()(a, c) * model.metric_inv()(b, d) * model.gamma_multi({c, d});
        }
      }
      ZU2.col(a * n + b) = g2 * zeta;
    }
  Eigen::MatrixXcd XU(ds, n);
  for (int a = 0; a < n; ++a) XU.col(a) = model.gamma_up(a) * xi.components();

  double acc = 0.0;
  std::vector<int> idx(4), idx3(3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXcd t = Eigen::VectorXcd::Zero(ds);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          idx = {a, b, c, d};
          const Complex v = weyl.at(idx);
          if (v != Complex(0, 0)) t += v * ZU2.col(c * n + d);
        }
      for (int c = 0; c < n; ++c) {
        idx3 = {c, a, b};
        const Complex v = cotton.at(idx3);
        if (v != Complex(0, 0)) t -= 2.0 * n * v * XU.col(c);
      }
      acc += t.squaredNorm();
    }
  const double scale = weyl.norm() * zeta.norm() + 2.0 * n * cotton.norm() * xi.components().norm();
  return std::sqrt(acc) / std::max(scale, 1e-300);
}

double recurrent_riemann_residual(const CliffordModel& model, const PureSpinor& xi,
                                  const DenseTensor& riemann) {
  XiCtx X(model, xi.components());
  const int n = X.n, km = X.km;
  std::vector<int> idx(4);
  DenseTensor out({km, km, n, n}, {mrole(), mrole(), vrole(), vrole()}, riemann.tol());
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Eigen::MatrixXcd Mab(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          idx = {a, b, c, d};
          Mab(a, b) = riemann.at(idx);
        }
      const Eigen::MatrixXcd R = X.XUp * Mab * X.XUp.transpose();
      for (int P = 0; P < km; ++P)
        for (int Q = 0; Q < km; ++Q) out(P, Q, c, d) = R(P, Q);
    }
  return rel(out.norm(), riemann.norm());
}

ParallelResiduals parallel_spinor_residuals(const CliffordModel& model, const PureSpinor& xi,
                                            const DenseTensor& riemann, const DenseTensor& phi,
                                            Complex ricci_scalar, const DenseTensor& weyl) {
  XiCtx X(model, xi.components());
  const int n = X.n, ds = X.ds;
  ParallelResiduals out{};
  // R_{abcd} ξ^{cd}
  auto contract_pair = [&](const DenseTensor& T) {
    double acc = 0.0;
    std::vector<int> idx(4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(ds);
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            idx = {a, b, c, d};
            const Complex v = T.at(idx);
            if (v != Complex(0, 0)) t += v * X.XU2.col(c * n + d);
          }
        acc += t.squaredNorm();
      }
    return std::sqrt(acc);
  };
  out.riemann = rel(contract_pair(riemann), riemann.norm());
  out.weyl = weyl.norm() > 0 ? rel(contract_pair(weyl), weyl.norm()) : 0.0;
  const Eigen::MatrixXcd M = X.XU * phi.as_matrix(); // ξ^{aA} Φ_{ab} (full)
  out.ricci = rel(M.norm(), phi.norm());
  out.scalar = std::abs(ricci_scalar);
  return out;
}

} // namespace spinorlab
