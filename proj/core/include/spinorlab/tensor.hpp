#ifndef SPINORLAB_TENSOR_HPP
#define SPINORLAB_TENSOR_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinorlab/errors.hpp"
#include "spinorlab/tolerance.hpp"

namespace spinorlab {

using Complex = std::complex<double>;

/// Role tag carried by every tensor index.  Contractions are only defined
/// between an index and its dual role with equal extent.
enum class IndexRole {
  VectorUp,
  VectorDown,
  SpinorPlus,
  SpinorMinus,
  DualSpinorPlus,
  DualSpinorMinus,
  Scalar,
};

IndexRole dual_role(IndexRole r);
bool roles_are_dual(IndexRole a, IndexRole b);
const char* role_name(IndexRole r);

/// Dense row-major complex tensor with per-index role metadata.
/// Values are immutable by convention once constructed: all operations
/// return new tensors.
class DenseTensor {
public:
  DenseTensor() = default;
  DenseTensor(std::vector<int> shape, std::vector<IndexRole> roles,
              ToleranceContext tol = {});

  static DenseTensor scalar(Complex value, ToleranceContext tol = {});

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<IndexRole>& roles() const { return roles_; }
  const ToleranceContext& tol() const { return tol_; }
  void set_tol(const ToleranceContext& t) { tol_ = t; }
  std::size_t size() const { return data_.size(); }

  Complex& at(std::span<const int> idx);
  Complex at(std::span<const int> idx) const;
  Complex& operator[](std::size_t flat) { return data_[flat]; }
  Complex operator[](std::size_t flat) const { return data_[flat]; }

  template <typename... I>
  Complex& operator()(I... idx) {
    const int ii[] = {static_cast<int>(idx)...};
    return at(std::span<const int>(ii, sizeof...(idx)));
  }
  template <typename... I>
  Complex operator()(I... idx) const {
    const int ii[] = {static_cast<int>(idx)...};
    return at(std::span<const int>(ii, sizeof...(idx)));
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// Trace over one up/down (or spinor/dual-spinor) pair of equal extent.
  DenseTensor contract(int i, int j) const;

  /// Weight-one (1/p!) total antisymmetrisation over the named slots.
  DenseTensor antisymmetrize(std::span<const int> indices) const;
  DenseTensor antisymmetrize(std::initializer_list<int> indices) const;

  /// Weight-one (1/p!) total symmetrisation over the named slots.
  DenseTensor symmetrize(std::span<const int> indices) const;
  DenseTensor symmetrize(std::initializer_list<int> indices) const;

  DenseTensor permuted(std::span<const int> perm) const;
  DenseTensor outer(const DenseTensor& other) const;

  DenseTensor operator+(const DenseTensor& other) const;
  DenseTensor operator-(const DenseTensor& other) const;
  DenseTensor operator*(Complex s) const;

  double norm() const;
  double max_abs() const;

  /// Flatten a two-index tensor to an Eigen matrix (first index = rows).
  Eigen::MatrixXcd as_matrix() const;

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;

private:
  void check_compatible(const DenseTensor& other) const;
  DenseTensor symmetrize_impl(std::span<const int> indices, bool anti) const;

  std::vector<int> shape_;
  std::vector<IndexRole> roles_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> data_;
  ToleranceContext tol_;
};

} // namespace spinorlab

#endif
