#ifndef SPINORLAB_PURE_SPINOR_HPP
#define SPINORLAB_PURE_SPINOR_HPP

#include <optional>

#include "spinorlab/clifford.hpp"
#include "spinorlab/linalg.hpp"
#include "spinorlab/random.hpp"

namespace spinorlab {

/// Outcome of the three purity tests for a chiral spinor: kernel dimension,
/// quadric residual and Cartan p-form residuals.  All residuals are relative
/// to the natural scale of the input.
struct PurityReport {
  int kernel_dim = 0;
  double quadric_residual = 0.0;
  std::vector<int> cartan_degrees;
  std::vector<double> cartan_residuals;
  double top_form_norm = 0.0;
  bool pure = false;
};

/// Runs all three purity tests and cross-checks their verdicts.
/// Throws ZeroSpinor on zero input and InconsistentVerdict if the tests
/// disagree (a convention bug, not a data problem).
PurityReport is_pure(const CliffordModel& model, const Eigen::VectorXcd& chi);

/// A validated pure spinor with its cached annihilator plane.
class PureSpinor {
public:
  /// Validates purity; throws NotPure otherwise.
  static PureSpinor make(const CliffordModel& model, const Eigen::VectorXcd& components);
  static PureSpinor canonical(const CliffordModel& model);
  /// Generic pure spinor from a seeded Spin orbit of the canonical one.
  static PureSpinor random(const CliffordModel& model, Rng& rng, int chirality = +1);
  /// The unique (up to scale) pure spinor annihilating a totally null m-plane.
  static PureSpinor from_null_plane(const CliffordModel& model, const Eigen::MatrixXcd& plane);

  int chirality() const { return chirality_; }
  const Eigen::VectorXcd& components() const { return components_; }
  /// Totally null m-plane ker(a -> γ_a ξ), columns are upper components.
  const Eigen::MatrixXcd& annihilator() const { return annihilator_; }
  const PurityReport& certificate() const { return certificate_; }

private:
  int chirality_ = +1;
  Eigen::VectorXcd components_;
  Eigen::MatrixXcd annihilator_;
  PurityReport certificate_;
};

/// Totally null intersection dimension of the planes of two pure spinors,
/// computed from the γ-bilinear vanishing ladder and cross-checked against
/// direct subspace intersection.
int intersection_dim(const CliffordModel& model, const PureSpinor& a, const PureSpinor& b);

/// A pure spinor together with a normalised dual spinor η (ξ·η = −1/2),
/// the induced splitting V = V_{−1/2} ⊕ V_{+1/2}, the grading element and
/// the reduced m-dimensional index machinery used by representatives.
class DualPair {
public:
  static DualPair make(const CliffordModel& model, const PureSpinor& xi, std::uint64_t seed);

  const CliffordModel& model() const { return *model_; }
  const PureSpinor& xi() const { return xi_; }
  /// Dual spinor as a functional on S: eta(χ) = eta_coef · χ.
  const Eigen::VectorXcd& eta_coef() const { return eta_coef_; }
  Complex eta_apply(const Eigen::VectorXcd& chi) const { return eta_coef_.transpose() * chi; }

  /// Basis u_i of V_{+1/2} = ker ξ_a and w_i of V_{−1/2} = ker η^a,
  /// biorthogonal with g(u_i, w_j) = δ_ij / 2.
  const Eigen::MatrixXcd& v_plus() const { return v_plus_; }
  const Eigen::MatrixXcd& v_minus() const { return v_minus_; }

  const Eigen::MatrixXcd& grading_element() const { return E_; } // E_{ab}
  const Eigen::MatrixXcd& omega() const { return omega_; }       // ω_{ab} = −2 E_{ab}
  const Eigen::MatrixXcd& idempotent() const { return I_; }      // I = ξ^a ⊗ η_a on S

  /// Basis of S_{(m−2)/4} (columns) and its biorthogonal coordinate rows.
  const Eigen::MatrixXcd& b_basis() const { return b_basis_; }
  const Eigen::MatrixXcd& b_coords() const { return b_coords_; }
  Eigen::VectorXcd reduce(const Eigen::VectorXcd& chi) const { return b_coords_ * chi; }

  /// Reduced contraction arrays, all n×m:
  ///   xi_low[a][A]  = ξ_a^A,   xi_up[a][A]  = ξ^{aA}      (coordinates in b)
  ///   eta_low[a][A] = η_{aA},  eta_up[a][A] = η^a_A       (evaluations on b)
  const Eigen::MatrixXcd& xi_low() const { return xi_low_; }
  const Eigen::MatrixXcd& xi_up() const { return xi_up_; }
  const Eigen::MatrixXcd& eta_low() const { return eta_low_; }
  const Eigen::MatrixXcd& eta_up() const { return eta_up_; }

  /// Full-space helper columns γ_a ξ and γ^a ξ (dim_s × n).
  const Eigen::MatrixXcd& xi_low_full() const { return xi_low_full_; }
  const Eigen::MatrixXcd& xi_up_full() const { return xi_up_full_; }
  /// Full-space rows η∘γ_a and η∘γ^a ((n × dim_s)).
  const Eigen::MatrixXcd& eta_low_full() const { return eta_low_full_; }
  const Eigen::MatrixXcd& eta_up_full() const { return eta_up_full_; }

private:
  const CliffordModel* model_ = nullptr;
  PureSpinor xi_;
  Eigen::VectorXcd eta_coef_;
  Eigen::MatrixXcd v_plus_, v_minus_;
  Eigen::MatrixXcd E_, omega_, I_;
  Eigen::MatrixXcd b_basis_, b_coords_;
  Eigen::MatrixXcd xi_low_, xi_up_, eta_low_, eta_up_;
  Eigen::MatrixXcd xi_low_full_, xi_up_full_, eta_low_full_, eta_up_full_;
};

} // namespace spinorlab

#endif
