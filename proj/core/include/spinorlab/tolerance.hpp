#ifndef SPINORLAB_TOLERANCE_HPP
#define SPINORLAB_TOLERANCE_HPP

#include "spinorlab/errors.hpp"

namespace spinorlab {

/// Tolerances threaded through every numerical decision in the library.
/// svd_rank_cutoff is relative to the largest singular value of the matrix
/// whose rank is being decided.
struct ToleranceContext {
  double eps_abs = 1e-10;
  double eps_rel = 1e-9;
  double svd_rank_cutoff = 1e-8;

  void validate() const {
    if (!(eps_abs > 0.0) || !(eps_rel > 0.0) || !(svd_rank_cutoff > 0.0))
      throw ValidationError("tolerances must be strictly positive");
  }
};

} // namespace spinorlab

#endif
