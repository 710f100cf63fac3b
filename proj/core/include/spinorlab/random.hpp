#ifndef SPINORLAB_RANDOM_HPP
#define SPINORLAB_RANDOM_HPP

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace spinorlab {

/// Seeded complex-Gaussian source; every randomized routine in the library
/// takes one of these (or a seed) so results are reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double real_gaussian() { return dist_(gen_); }
  std::complex<double> gaussian() { return {dist_(gen_), dist_(gen_)}; }

  Eigen::VectorXcd vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::MatrixXcd matrix(int rows, int cols) {
    Eigen::MatrixXcd M(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) M(i, j) = gaussian();
    return M;
  }

  /// Random skew complex matrix (a Lie algebra element in the 2-form picture).
  Eigen::MatrixXcd skew_matrix(int n) {
    Eigen::MatrixXcd M = matrix(n, n);
    return 0.5 * (M - M.transpose()).eval();
  }

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

} // namespace spinorlab

#endif
