#ifndef SPINORLAB_CURVATURE_HPP
#define SPINORLAB_CURVATURE_HPP

#include <string>
#include <vector>

#include "spinorlab/pure_spinor.hpp"

namespace spinorlab {

enum class CurvKind { TracefreeRicci, Cotton, Weyl };

/// Idempotent projectors onto the three curvature symmetry types, built by
/// alternating the pair-skew, first-Bianchi and trace-removal projections to
/// a fixed point.
DenseTensor project_to_tracefree_ricci(const DenseTensor& raw);
DenseTensor project_to_cotton(const DenseTensor& raw);
DenseTensor project_to_weyl(const DenseTensor& raw);

/// Relative residual of the defining symmetries of each type.
double symmetry_residual(CurvKind kind, const DenseTensor& t);

/// Validated wrappers; constructors reject symmetry violations.
class TracefreeRicci {
public:
  static TracefreeRicci from(const DenseTensor& t);
  const DenseTensor& tensor() const { return t_; }

private:
  DenseTensor t_;
};

class CottonTensor {
public:
  static CottonTensor from(const DenseTensor& t);
  const DenseTensor& tensor() const { return t_; }

private:
  DenseTensor t_;
};

class WeylTensor {
public:
  static WeylTensor from(const DenseTensor& t);
  const DenseTensor& tensor() const { return t_; }

private:
  DenseTensor t_;
};

/// Component labels use doubled filtration indices so the Cotton-York
/// half-integer levels stay integral: i2 = 2i.
struct PiKey {
  CurvKind kind;
  int i2;
  int j;
};

/// All projection maps of a family evaluated at once.
struct PiResidual {
  int i2 = 0;
  int j = 0;
  double value = 0.0; // relative residual
  bool vanishes = false;
};

/// Evaluation of a single projection map; the result carries full spinor
/// indices (see the role list on the returned tensor).
DenseTensor pi_F(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& phi);
DenseTensor pi_A(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& A);
DenseTensor pi_C(const CliffordModel& model, const PureSpinor& xi, int i2, int j,
                 const DenseTensor& C);

/// The (i2, j) keys defined for a family at this m, in increasing i2.
std::vector<PiKey> pi_keys(CurvKind kind, int m);

struct ClassificationReport {
  CurvKind kind = CurvKind::Weyl;
  std::vector<PiResidual> residuals;
  bool zero_tensor = false;
  int level2 = 0;                  // 2 × filtration level
  std::vector<std::string> survivors;
  std::string position;

  std::string level_string() const;
};

/// Full P-invariant classification of a curvature tensor with respect to ξ.
/// Enforces the kernel-nesting invariant and throws InconsistentVerdict when
/// the residual pattern violates it.
ClassificationReport classify(const CliffordModel& model, const PureSpinor& xi, CurvKind kind,
                              const DenseTensor& tensor);

/// Irreducible component dimension table of a family (Appendix-style totals).
struct ModuleDimEntry {
  int i2;
  int j;
  std::string name;
  int dim;
};
struct ModuleDims {
  std::vector<ModuleDimEntry> entries;
  int total; // dimension of the full space
};
ModuleDims module_dims(CurvKind kind, int m);
/// Same for the Lie algebra g and the intrinsic-torsion module W.
ModuleDims module_dims_g(int m);
ModuleDims module_dims_w(int m);

/// Seeded spinorial representative of the irreducible component (i2, j).
/// Throws UndefinedComponent for C_0^2 at m = 3 and BadComponentSymmetry if a
/// supplied component array violates the required symmetries.
DenseTensor representative(const DualPair& dp, CurvKind kind, int i2, int j, std::uint64_t seed);

/// Dimension of the component space parametrising representative(i2, j).
int component_space_dim(CurvKind kind, int m, int i2, int j);

/// Orthonormal basis of the component (i2,j) realised inside the tensor
/// space: columns are flattened tensors. Used for rank checks and for
/// building filtration-stage bases.
Eigen::MatrixXcd component_tensor_basis(const DualPair& dp, CurvKind kind, int i2, int j);

/// Numerical rank of pi restricted to the filtration stage i2 of its family.
int restricted_pi_rank(const DualPair& dp, CurvKind kind, int i2, int j);

/// Pointwise integrability residuals of the named differential conditions.
double foliating_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                        const DenseTensor& weyl);
double gs_hypothesis_residual(const CliffordModel& model, const PureSpinor& xi,
                              const DenseTensor& weyl);
double null_zrm_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                       const DenseTensor& weyl);
double twistor_integrability_residual(const CliffordModel& model, const PureSpinor& xi,
                                      const DenseTensor& weyl);
double twistor_pair_curvature_residual(const CliffordModel& model, const PureSpinor& xi,
                                       const Eigen::VectorXcd& zeta, const DenseTensor& weyl,
                                       const DenseTensor& cotton);
double recurrent_riemann_residual(const CliffordModel& model, const PureSpinor& xi,
                                  const DenseTensor& riemann);
struct ParallelResiduals {
  double riemann;  // R_{abcd} ξ^{cd}
  double ricci;    // Φ_{ab} ξ^{b}
  double scalar;   // |R|
  double weyl;     // C_{abcd} ξ^{cd}
};
ParallelResiduals parallel_spinor_residuals(const CliffordModel& model, const PureSpinor& xi,
                                            const DenseTensor& riemann, const DenseTensor& phi,
                                            Complex ricci_scalar, const DenseTensor& weyl);

} // namespace spinorlab

#endif
