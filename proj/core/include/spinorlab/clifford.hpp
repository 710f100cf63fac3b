#ifndef SPINORLAB_CLIFFORD_HPP
#define SPINORLAB_CLIFFORD_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinorlab/tensor.hpp"

namespace spinorlab {

/// Clifford module for a 2m-dimensional complex inner product space in a
/// null frame e_1..e_m, f_1..f_m with g(e_i, f_j) = δ_ij / 2.
///
/// The spinor space S = Λ•N is realised on basis monomials e_S indexed by
/// bitmasks S ⊆ {0..m-1}; a basis vector acts by
///   (v, w) · ξ = v ∧ ξ − w ⌟ ξ,   v ∈ N, w ∈ N*,
/// which gives x·x = −g(x,x) with the metric normalisation above.
/// Basis slots 0..m-1 of V are e_i, slots m..2m-1 are f_i.
class CliffordModel {
public:
  /// Builds the model for 2 ≤ m ≤ 6.
  static CliffordModel build(int m);

  int m() const { return m_; }
  int n() const { return n_; }
  int dim_s() const { return dim_s_; }
  int dim_half() const { return dim_s_ / 2; }

  const Eigen::MatrixXcd& metric() const { return g_; }
  const Eigen::MatrixXcd& metric_inv() const { return ginv_; }

  const Eigen::MatrixXcd& gamma(int a) const { return gamma_[a]; }
  const Eigen::MatrixXcd& gamma_up(int a) const { return gamma_up_[a]; }
  /// γ(V) = V^a γ_a for a vector given by upper components.
  Eigen::MatrixXcd gamma_vector(const Eigen::VectorXcd& v_up) const;

  /// Orientation element: squares to the identity, +1 on S+, −1 on S−,
  /// normalised so that e_1∧..∧e_m lies in S+.
  const Eigen::MatrixXcd& orientation() const { return orientation_; }
  const Eigen::MatrixXcd& chirality_projector(int sign) const {
    return sign > 0 ? proj_plus_ : proj_minus_;
  }
  /// +1 or −1 for a chiral spinor, 0 for a mixed one.
  int chirality_of(const Eigen::VectorXcd& s) const;

  /// Weight-one antisymmetrised γ product over an arbitrary index list;
  /// repeated indices give the zero matrix, p = 0 the identity.
  Eigen::MatrixXcd gamma_multi(std::span<const int> indices) const;
  Eigen::MatrixXcd gamma_multi(std::initializer_list<int> indices) const;

  /// Spin-invariant bilinear pairing B(ξ,η): coefficient of the top form
  /// e_1∧..∧e_m in rev(ξ)∧η with rev = (−1)^{k(k−1)/2} on Λ^k.
  const Eigen::MatrixXcd& bilinear_matrix() const { return B_; }
  Complex bilinear(const Eigen::VectorXcd& xi, const Eigen::VectorXcd& eta) const;

  /// Index-lowering pairing ε: B with the S+ rows negated.  This is the
  /// normalisation under which the multi-γ trace identities hold with their
  /// stated constants.
  const Eigen::MatrixXcd& lowering_pairing() const { return eps_; }

  /// The p-form with components γ_{a1..ap}(ξ,η) = (γ_{a1..ap} ξ)ᵀ ε η.
  DenseTensor pform_bilinear(int p, const Eigen::VectorXcd& xi,
                             const Eigen::VectorXcd& eta) const;

  /// Multi-γ with the chain-output spinor index lowered by ε:
  /// (γ_P)_{XY} = Σ_W Γ_P(W,X) ε(W,Y).
  Eigen::MatrixXcd lowered_gamma_multi(std::span<const int> indices) const;

  /// Spin representation ρ(φ) = −¼ φ_{ab} γ^{ab} of a skew 2-tensor.
  Eigen::MatrixXcd spin_action(const Eigen::MatrixXcd& phi_lower) const;
  /// Matching vector representation (φ·V)^b = g^{ba} φ_{ac} V^c.
  Eigen::MatrixXcd vector_action(const Eigen::MatrixXcd& phi_lower) const;
  Eigen::MatrixXcd spin_group(const Eigen::MatrixXcd& phi_lower) const;
  Eigen::MatrixXcd vector_group(const Eigen::MatrixXcd& phi_lower) const;

  /// Lie-algebra action of a skew φ_{ab} on an all-lower-index tensor.
  DenseTensor lie_action_lower(const Eigen::MatrixXcd& phi_lower, const DenseTensor& T) const;

  /// Hodge star on totally skew forms with all-lower (or all-upper) indices.
  /// Orientation is fixed so that γ_m(ξ,ξ) of the canonical pure spinor is
  /// self-dual.
  DenseTensor hodge_star(const DenseTensor& form) const;

  /// ξ = e_1∧..∧e_m, the canonical positive pure spinor.
  Eigen::VectorXcd canonical_pure_spinor() const;
  /// The canonical spinor of the opposite "corner": 1 ∈ Λ^0 N.
  Eigen::VectorXcd canonical_opposite_spinor() const;

  /// Basis mask of spinor slot x in the Λ•N enumeration.
  static int popcount(std::uint32_t v);

private:
  CliffordModel() = default;
  Eigen::MatrixXcd gamma_multi_mask(std::uint32_t mask) const;

  int m_ = 0, n_ = 0, dim_s_ = 0;
  Eigen::MatrixXcd g_, ginv_;
  std::vector<Eigen::MatrixXcd> gamma_, gamma_up_;
  std::vector<Eigen::MatrixXcd> gamma_up_pair_; // γ^{ab}, row-major over (a,b)
  Eigen::MatrixXcd orientation_, proj_plus_, proj_minus_;
  Eigen::MatrixXcd B_, eps_;
  double eps_norm_ = 1.0; // ε_{1..n} for the Hodge star
  mutable std::map<std::uint32_t, Eigen::MatrixXcd> multi_cache_;
};

} // namespace spinorlab

#endif
