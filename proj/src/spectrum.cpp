#include "qflow/spectrum.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <vector>

namespace qflow {

double lanczos_largest(const std::function<RVector(const RVector&)>& matvec, Eigen::Index dim,
                       double rel_tol, int max_steps) {
  const Eigen::Index steps = std::min<Eigen::Index>(dim, max_steps);
  RMatrix basis(dim, steps + 1);
  std::vector<double> alpha;
  std::vector<double> beta;

  // Fixed, non-symmetric start vector so results do not depend on any RNG.
  RVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = 1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i) + 0.7);
  basis.col(0) = v.normalized();

  double ritz = 0.0;
  for (Eigen::Index j = 0; j < steps; ++j) {
    RVector w = matvec(basis.col(j));
    const double a = basis.col(j).dot(w);
    alpha.push_back(a);
    // Full reorthogonalization, applied twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    }
    const double b = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    const bool last = b == 0.0 || j + 1 == steps;
    if (m % 10 == 0 || last) {
      RVector diag = Eigen::Map<const RVector>(alpha.data(), m);
      RVector sub = m > 1 ? RVector(Eigen::Map<const RVector>(beta.data(), m - 1)) : RVector(0);
      Eigen::SelfAdjointEigenSolver<RMatrix> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      ritz = es.eigenvalues()(m - 1);
      const double residual = std::abs(b * es.eigenvectors()(m - 1, m - 1));
      if (residual <= rel_tol * std::abs(ritz) || last) break;
    }

    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }
  return ritz;
}

ExtremeEigenvalues extreme_eigenvalues(const SparseMatrix& a, Eigen::Index dense_limit) {
  const Eigen::Index n = a.rows();
  if (n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw InternalError("dense eigensolver failed");
    return {es.eigenvalues()(0), es.eigenvalues()(n - 1)};
  }

  const Eigen::SparseMatrix<double> col_major = a;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(col_major);
  if (ldlt.info() != Eigen::Success) throw InternalError("sparse factorization failed");

  const double top = lanczos_largest([&](const RVector& x) -> RVector { return col_major * x; }, n);
  const double inv_top = lanczos_largest([&](const RVector& x) -> RVector { return ldlt.solve(x); }, n);
  return {1.0 / inv_top, top};
}

}  // namespace qflow
