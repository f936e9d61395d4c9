#pragma once

#include "qflow/common.hpp"

#include <functional>

namespace qflow {

struct ExtremeEigenvalues {
  double min = 0.0;
  double max = 0.0;
};

/// Largest eigenvalue of a symmetric operator given as a matvec, by Lanczos
/// with full reorthogonalization. Stops once the Ritz residual drops below
/// `rel_tol` times the Ritz value.
double lanczos_largest(const std::function<RVector(const RVector&)>& matvec, Eigen::Index dim,
                       double rel_tol = 1e-14, int max_steps = 600);

/// Extreme eigenvalues of a sparse SPD matrix. Dense eigensolver up to
/// `dense_limit` rows; above that, Lanczos on A for the top and on A^-1
/// (through a sparse LDL^T factor) for the bottom.
ExtremeEigenvalues extreme_eigenvalues(const SparseMatrix& a, Eigen::Index dense_limit = 512);

}  // namespace qflow
