#include "spinorlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinorlab {

IndexRole dual_role(IndexRole r) {
  switch (r) {
    case IndexRole::VectorUp: return IndexRole::VectorDown;
    case IndexRole::VectorDown: return IndexRole::VectorUp;
    case IndexRole::SpinorPlus: return IndexRole::DualSpinorPlus;
    case IndexRole::SpinorMinus: return IndexRole::DualSpinorMinus;
    case IndexRole::DualSpinorPlus: return IndexRole::SpinorPlus;
    case IndexRole::DualSpinorMinus: return IndexRole::SpinorMinus;
    case IndexRole::Scalar: return IndexRole::Scalar;
  }
  return IndexRole::Scalar;
}

bool roles_are_dual(IndexRole a, IndexRole b) { return dual_role(a) == b; }

const char* role_name(IndexRole r) {
  switch (r) {
    case IndexRole::VectorUp: return "vector-up";
    case IndexRole::VectorDown: return "vector-down";
    case IndexRole::SpinorPlus: return "spinor+";
    case IndexRole::SpinorMinus: return "spinor-";
    case IndexRole::DualSpinorPlus: return "dual-spinor+";
    case IndexRole::DualSpinorMinus: return "dual-spinor-";
    case IndexRole::Scalar: return "scalar";
  }
  return "?";
}

DenseTensor::DenseTensor(std::vector<int> shape, std::vector<IndexRole> roles,
                         ToleranceContext tol)
    : shape_(std::move(shape)), roles_(std::move(roles)), tol_(tol) {
  if (shape_.size() != roles_.size())
    throw ValidationError("role list length must equal shape length");
  tol_.validate();
  std::size_t total = 1;
  for (int e : shape_) {
    if (e <= 0) throw ValidationError("tensor extents must be positive");
    total *= static_cast<std::size_t>(e);
  }
  strides_.resize(shape_.size());
  std::size_t s = 1;
  for (int k = static_cast<int>(shape_.size()) - 1; k >= 0; --k) {
    strides_[k] = s;
    s *= static_cast<std::size_t>(shape_[k]);
  }
  data_.assign(total, Complex(0.0, 0.0));
}

DenseTensor DenseTensor::scalar(Complex value, ToleranceContext tol) {
  DenseTensor t({}, {}, tol);
  t.data_.assign(1, value);
  return t;
}

std::size_t DenseTensor::flat_index(std::span<const int> idx) const {
  if (idx.size() != shape_.size()) throw ValidationError("index rank mismatch");
  std::size_t f = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape_[k]) throw ValidationError("index out of range");
    f += strides_[k] * static_cast<std::size_t>(idx[k]);
  }
  return f;
}

void DenseTensor::unflatten(std::size_t flat, std::span<int> idx) const {
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

Complex& DenseTensor::at(std::span<const int> idx) { return data_[flat_index(idx)]; }
Complex DenseTensor::at(std::span<const int> idx) const { return data_[flat_index(idx)]; }

DenseTensor DenseTensor::contract(int i, int j) const {
  const int r = rank();
  if (i < 0 || j < 0 || i >= r || j >= r || i == j)
    throw ValidationError("contract: bad slot pair");
  if (!roles_are_dual(roles_[i], roles_[j]))
    throw RoleMismatch(std::string(role_name(roles_[i])) + " vs " + role_name(roles_[j]));
  if (shape_[i] != shape_[j])
    throw ExtentMismatch(std::to_string(shape_[i]) + " vs " + std::to_string(shape_[j]));
  if (i > j) std::swap(i, j);

  std::vector<int> out_shape;
  std::vector<IndexRole> out_roles;
  for (int k = 0; k < r; ++k) {
    if (k == i || k == j) continue;
    out_shape.push_back(shape_[k]);
    out_roles.push_back(roles_[k]);
  }
  DenseTensor out(out_shape, out_roles, tol_);

  std::vector<int> oidx(out_shape.size());
  std::vector<int> iidx(shape_.size());
  const int extent = shape_[i];
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, oidx);
    int p = 0;
    for (int k = 0; k < r; ++k) {
      if (k == i || k == j) continue;
      iidx[k] = oidx[p++];
    }
    Complex acc(0.0, 0.0);
    for (int c = 0; c < extent; ++c) {
      iidx[i] = c;
      iidx[j] = c;
      acc += data_[flat_index(iidx)];
    }
    out.data_[f] = acc;
  }
  return out;
}

namespace {

void permutations_with_sign(int k, std::vector<std::pair<std::vector<int>, int>>& out) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  // generate all permutations with parity tracked by inversion count
  do {
    int inversions = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (perm[a] > perm[b]) ++inversions;
    out.emplace_back(perm, (inversions % 2 == 0) ? 1 : -1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace

DenseTensor DenseTensor::symmetrize_impl(std::span<const int> indices, bool anti) const {
  if (indices.empty()) return *this;
  const int k = static_cast<int>(indices.size());
  for (int s : indices)
    if (s < 0 || s >= rank()) throw ValidationError("symmetrize: slot out of range");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (indices[a] == indices[b]) throw ValidationError("symmetrize: repeated slot");
  const IndexRole role0 = roles_[indices[0]];
  const int ext0 = shape_[indices[0]];
  for (int s : indices) {
    if (roles_[s] != role0)
      throw RoleMismatch("symmetrized slots must share a role");
    if (shape_[s] != ext0)
      throw ExtentMismatch("symmetrized slots must share an extent");
  }

  std::vector<std::pair<std::vector<int>, int>> perms;
  permutations_with_sign(k, perms);

  DenseTensor out(shape_, roles_, tol_);
  std::vector<int> idx(shape_.size());
  std::vector<int> src(shape_.size());
  const double weight = 1.0 / static_cast<double>(perms.size());
  for (std::size_t f = 0; f < size(); ++f) {
    unflatten(f, idx);
    Complex acc(0.0, 0.0);
    for (const auto& [perm, sign] : perms) {
      src = idx;
      for (int a = 0; a < k; ++a) src[indices[a]] = idx[indices[perm[a]]];
      const double c = anti ? static_cast<double>(sign) : 1.0;
      acc += c * data_[flat_index(src)];
    }
    out.data_[f] = acc * weight;
  }
  return out;
}

DenseTensor DenseTensor::antisymmetrize(std::span<const int> indices) const {
  return symmetrize_impl(indices, true);
}
DenseTensor DenseTensor::antisymmetrize(std::initializer_list<int> indices) const {
  std::vector<int> v(indices);
  return symmetrize_impl(v, true);
}
DenseTensor DenseTensor::symmetrize(std::span<const int> indices) const {
  return symmetrize_impl(indices, false);
}
DenseTensor DenseTensor::symmetrize(std::initializer_list<int> indices) const {
  std::vector<int> v(indices);
  return symmetrize_impl(v, false);
}

DenseTensor DenseTensor::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != rank()) throw ValidationError("permuted: bad permutation");
  std::vector<int> seen(rank(), 0);
  for (int p : perm) {
    if (p < 0 || p >= rank() || seen[p]) throw ValidationError("permuted: not a permutation");
    seen[p] = 1;
  }
  std::vector<int> out_shape(rank()), src(rank()), idx(rank());
  std::vector<IndexRole> out_roles(rank());
  for (int k = 0; k < rank(); ++k) {
    out_shape[k] = shape_[perm[k]];
    out_roles[k] = roles_[perm[k]];
  }
  DenseTensor out(out_shape, out_roles, tol_);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    for (int k = 0; k < rank(); ++k) src[perm[k]] = idx[k];
    out.data_[f] = data_[flat_index(src)];
  }
  return out;
}

DenseTensor DenseTensor::outer(const DenseTensor& other) const {
  std::vector<int> out_shape = shape_;
  out_shape.insert(out_shape.end(), other.shape_.begin(), other.shape_.end());
  std::vector<IndexRole> out_roles = roles_;
  out_roles.insert(out_roles.end(), other.roles_.begin(), other.roles_.end());
  DenseTensor out(out_shape, out_roles, tol_);
  const std::size_t nb = other.size();
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < nb; ++b)
      out.data_[a * nb + b] = data_[a] * other.data_[b];
  return out;
}

void DenseTensor::check_compatible(const DenseTensor& other) const {
  if (shape_ != other.shape_) throw ExtentMismatch("tensor shapes differ");
  if (roles_ != other.roles_) throw RoleMismatch("tensor roles differ");
}

DenseTensor DenseTensor::operator+(const DenseTensor& other) const {
  check_compatible(other);
  DenseTensor out = *this;
  for (std::size_t f = 0; f < size(); ++f) out.data_[f] += other.data_[f];
  return out;
}

DenseTensor DenseTensor::operator-(const DenseTensor& other) const {
  check_compatible(other);
  DenseTensor out = *this;
  for (std::size_t f = 0; f < size(); ++f) out.data_[f] -= other.data_[f];
  return out;
}

DenseTensor DenseTensor::operator*(Complex s) const {
  DenseTensor out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

double DenseTensor::norm() const {
  double acc = 0.0;
  for (const auto& v : data_) acc += std::norm(v);
  return std::sqrt(acc);
}

double DenseTensor::max_abs() const {
  double acc = 0.0;
  for (const auto& v : data_) acc = std::max(acc, std::abs(v));
  return acc;
}

Eigen::MatrixXcd DenseTensor::as_matrix() const {
  if (rank() != 2) throw ValidationError("as_matrix requires a two-index tensor");
  Eigen::MatrixXcd M(shape_[0], shape_[1]);
  for (int i = 0; i < shape_[0]; ++i)
    for (int j = 0; j < shape_[1]; ++j)
      M(i, j) = data_[static_cast<std::size_t>(i) * shape_[1] + j];
  return M;
}

} // namespace spinorlab
