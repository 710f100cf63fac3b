#ifndef SPINORLAB_PARABOLIC_HPP
#define SPINORLAB_PARABOLIC_HPP

#include <limits>

#include "spinorlab/pure_spinor.hpp"

namespace spinorlab {

/// Sentinel level of the zero element, which sits in every filtration stage.
inline constexpr int kLevelInfinity = std::numeric_limits<int>::max();

/// Validated skew 2-tensor φ_{ab} ≅ element of so(2m,C), with optional graded
/// parts relative to a dual pair.
class LieElement {
public:
  static LieElement make(const CliffordModel& model, const Eigen::MatrixXcd& phi_lower);
  const Eigen::MatrixXcd& phi() const { return phi_; }

  /// Graded parts (φ^{AB}, φ_A^B, φ_{AB}) in the reduced coordinates of dp;
  /// they recompose to φ within tolerance.
  struct Graded {
    Eigen::MatrixXcd minus; // φ^{AB}, skew, g_{−1} part
    Eigen::MatrixXcd zero;  // φ_A^B, g_0 part
    Eigen::MatrixXcd plus;  // φ_{AB}, skew, g_1 part
  };
  Graded graded(const DualPair& dp) const;

private:
  Eigen::MatrixXcd phi_;
};

/// Largest i with φ ∈ g^i, one of {−1, 0, 1} or kLevelInfinity for 0.
int g_filtration_level(const CliffordModel& model, const PureSpinor& xi,
                       const Eigen::MatrixXcd& phi_lower);

/// The three projection maps whose kernels carve out the p-submodules of g.
struct GProjections {
  Eigen::MatrixXcd pi_m1_0; // ξ^{aA} ξ^{bB} φ_{ab}  (S⊗S matrix)
  Eigen::VectorXcd pi_0_0;  // ξ^{ab} φ_{ab}         (spinor)
  Eigen::MatrixXcd pi_0_1;  // ξ^{cA} φ_{cb} + (1/n) γ_b ξ^{cd} φ_{cd}  (n columns)
};
GProjections g_projections(const CliffordModel& model, const PureSpinor& xi,
                           const Eigen::MatrixXcd& phi_lower);

/// True iff φ stabilises the projective spinor: φ_{ab} γ^{ab} ξ ∝ ξ.
/// Must coincide with g_filtration_level ≥ 0.
bool stabilizer_check(const CliffordModel& model, const PureSpinor& xi,
                      const Eigen::MatrixXcd& phi_lower);

/// Minimal k with χ in the image of the 2k- or (2k+1)-fold multi-γ of ξ.
int spinor_filtration_level(const CliffordModel& model, const PureSpinor& xi,
                            const Eigen::VectorXcd& chi);

struct GComponentDims {
  int g_pm1;  // dim g_{±1} = m(m−1)/2
  int z0;     // dim z_0 = 1
  int sl0;    // dim sl_0 = m²−1
  int total;  // m(2m−1)
};
GComponentDims dim_g_components(int m);

/// Lie bracket of two skew 2-tensors through their vector endomorphisms.
Eigen::MatrixXcd lie_bracket(const CliffordModel& model, const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b);

/// Seeded representatives of the graded pieces, built from the dual pair.
Eigen::MatrixXcd g1_representative(const DualPair& dp, Rng& rng);
Eigen::MatrixXcd gm1_representative(const DualPair& dp, Rng& rng);
Eigen::MatrixXcd sl0_representative(const DualPair& dp, Rng& rng);
Eigen::MatrixXcd z0_representative(const DualPair& dp);

} // namespace spinorlab

#endif
