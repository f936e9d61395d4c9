#include "qflow/mesh.hpp"

#include "qflow/spectrum.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>

namespace qflow {

std::string to_string(BoundaryAxis axis) {
  return axis == BoundaryAxis::LeftRight ? "flow-left-right" : "flow-top-bottom";
}

BoundaryAxis boundary_axis_from_string(const std::string& name) {
  if (name == "flow-left-right") return BoundaryAxis::LeftRight;
  if (name == "flow-top-bottom") return BoundaryAxis::TopBottom;
  throw ValidationError("unknown boundary axis '" + name + "'");
}

std::size_t FractureProblem::fracture_count() const {
  std::size_t n = 0;
  for (auto m : fracture_mask) n += m;
  return n;
}

FractureProblem make_problem(int rows, int cols, std::vector<double> permeability, double k_background,
                             BoundaryAxis axis) {
  if (rows <= 0 || cols <= 0) throw SizeError("grid dimensions must be positive");
  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (!is_power_of_two(n)) {
    throw SizeError("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " has a node count that is not a power of two");
  }
  if (permeability.size() != n) throw DimensionError("permeability field does not match the grid");
  if (!(k_background > 0.0)) throw ValidationError("background permeability must be positive");
  for (double k : permeability) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("permeability values must be positive");
  }

  FractureProblem p;
  p.rows = rows;
  p.cols = cols;
  p.permeability = std::move(permeability);
  p.k_background = k_background;
  p.boundary_axis = axis;
  p.source.assign(n, 0.0);
  p.fracture_mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.fracture_mask[i] = p.permeability[i] != k_background ? 1 : 0;
  return p;
}

FractureProblem build_1d_problem(int n_nodes, double k_uniform) {
  if (n_nodes <= 0 || !is_power_of_two(static_cast<std::size_t>(n_nodes))) {
    throw SizeError("1D problem needs a power-of-two node count, got " + std::to_string(n_nodes));
  }
  return make_problem(1, n_nodes, std::vector<double>(static_cast<std::size_t>(n_nodes), k_uniform), k_uniform);
}

FractureProblem build_pitchfork_problem(int rows, int cols, double k_background, double k_fracture,
                                        double k_right_branch) {
  if (rows <= 0 || cols <= 0 ||
      !is_power_of_two(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))) {
    throw SizeError("pitchfork grid node count must be a power of two");
  }
  std::vector<double> k(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), k_background);
  const bool has_fracture = k_fracture != k_background || k_right_branch != k_background;
  if (has_fracture) {
    const int r1 = rows / 4;
    const int r2 = rows / 2;
    const int r3 = (3 * rows) / 4;
    if (rows < 4 || cols < 4 || r1 == r2 || r2 == r3) {
      throw GeometryError("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " is too small for three distinct pitchfork branches");
    }
    const int mid = cols / 2;
    auto at = [&](int r, int c) -> double& {
      return k[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)];
    };
    for (int c = 0; c <= mid; ++c) at(r2, c) = k_fracture;
    for (int r = r1; r <= r3; ++r) at(r, mid) = k_fracture;
    for (int r : {r1, r2, r3}) {
      for (int c = mid; c < cols; ++c) at(r, c) = k_fracture;
    }
    for (int c = mid + 1; c < cols; ++c) at(r1, c) = k_right_branch;
  }
  return make_problem(rows, cols, std::move(k), k_background);
}

std::pair<int, int> pitchfork_shape(int n_qubits) {
  if (n_qubits < 2 || n_qubits > 30) throw SizeError("unsupported qubit count for a pitchfork grid");
  const int rows = 1 << (n_qubits / 2);
  if (n_qubits % 2 == 0) return {rows, rows};
  // odd: twice as wide as tall, e.g. 5 -> 4x8, 13 -> 64x128
  const int r = 1 << ((n_qubits - 1) / 2);
  return {r, 2 * r};
}

RawSystem assemble_unscaled(const FractureProblem& p) {
  const std::size_t n = p.size();
  if (p.permeability.size() != n || p.source.size() != n) throw DimensionError("problem fields do not match the grid");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(5 * n);
  RVector diag = RVector::Zero(static_cast<Eigen::Index>(n));
  RVector b = RVector::Zero(static_cast<Eigen::Index>(n));

  auto harmonic = [](double a, double c) { return 2.0 * a * c / (a + c); };
  auto link = [&](std::size_t i, std::size_t j) {
    const double t = harmonic(p.permeability[i], p.permeability[j]);
    diag(static_cast<Eigen::Index>(i)) += t;
    diag(static_cast<Eigen::Index>(j)) += t;
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), -t);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), -t);
  };
  // The boundary layer takes the permeability of the node it touches.
  auto boundary = [&](std::size_t i, double pressure) {
    const double t = p.permeability[i];
    diag(static_cast<Eigen::Index>(i)) += t;
    b(static_cast<Eigen::Index>(i)) += t * pressure;
  };

  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      const std::size_t i = p.index(r, c);
      if (c + 1 < p.cols) link(i, p.index(r, c + 1));
      if (r + 1 < p.rows) link(i, p.index(r + 1, c));
      if (p.boundary_axis == BoundaryAxis::LeftRight) {
        if (c == 0) boundary(i, p.boundary_high);
        if (c == p.cols - 1) boundary(i, p.boundary_low);
      } else {
        if (r == 0) boundary(i, p.boundary_high);
        if (r == p.rows - 1) boundary(i, p.boundary_low);
      }
      b(static_cast<Eigen::Index>(i)) -= p.source[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diag(static_cast<Eigen::Index>(i)));
  }

  RawSystem raw;
  raw.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  raw.matrix.setFromTriplets(triplets.begin(), triplets.end());
  raw.matrix.makeCompressed();
  raw.rhs = std::move(b);
  return raw;
}

LinearSystem make_system(const SparseMatrix& a, const RVector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw DimensionError("matrix and right-hand side disagree");
  exact_log2(static_cast<std::size_t>(b.size()));
  const double b_norm = b.norm();
  if (!(b_norm > 0.0)) throw ValidationError("right-hand side is zero; no flow is driven");

  const ExtremeEigenvalues raw = extreme_eigenvalues(a);
  if (!(raw.min > 0.0)) throw InternalError("assembled matrix is not positive definite");

  LinearSystem s;
  s.n_vars = static_cast<std::size_t>(b.size());
  s.matrix_scale = raw.max;
  s.matrix = a / raw.max;
  s.matrix.makeCompressed();
  s.rhs_scale = b_norm;
  s.rhs = b / b_norm;
  s.lambda_min = raw.min / raw.max;
  s.kappa = raw.max / raw.min;
  return s;
}

LinearSystem assemble_system(const FractureProblem& problem) {
  const RawSystem raw = assemble_unscaled(problem);
  return make_system(raw.matrix, raw.rhs);
}

SolutionVector solve_reference(const LinearSystem& system) {
  const Eigen::SparseMatrix<double> a = system.matrix;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw InternalError("reference factorization failed");
  RVector x = ldlt.solve(system.rhs);
  // One step of iterative refinement keeps the residual at round-off for large kappa.
  x += ldlt.solve(system.rhs - a * x);

  SolutionVector s;
  s.system_norm = x.norm();
  s.values = x / s.system_norm;
  s.raw_scale = s.system_norm * system.rhs_scale / system.matrix_scale;
  return s;
}

RVector physical_pressures(const SolutionVector& solution) { return solution.values * solution.raw_scale; }

double normalized_residual(const LinearSystem& system, const RVector& x_hat) {
  if (x_hat.size() != system.rhs.size()) throw DimensionError("solution length does not match the system");
  const RVector ax = system.matrix * x_hat;
  return (ax / ax.norm() - system.rhs).norm();
}

double scaled_residual(const LinearSystem& system, const RVector& x_hat, double scale) {
  if (x_hat.size() != system.rhs.size()) throw DimensionError("solution length does not match the system");
  return (system.matrix * (scale * x_hat) - system.rhs).norm();
}

BaselineMetrics mixed_state_baseline(const LinearSystem& system, const SolutionVector& x_true) {
  const auto n = static_cast<Eigen::Index>(system.n_vars);
  const RVector u = RVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  BaselineMetrics m;
  m.error = normalized_residual(system, u);
  m.error_true_scale = scaled_residual(system, u, x_true.system_norm);
  const double overlap = x_true.values.dot(u);
  m.fidelity = overlap * overlap;
  return m;
}

void write_system_csv(std::ostream& out, const LinearSystem& system) {
  const RMatrix a = system.dense();
  out.precision(17);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out << a(r, c) << ',';
    out << system.rhs(r) << '\n';
  }
}

}  // namespace qflow
