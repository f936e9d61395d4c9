#pragma once

// Fracture-flow problems on structured grids and the linear systems they
// discretize to.
//
// Nodes are interior grid points indexed row-major: node (r, c) has index
// r * cols + c. Dirichlet boundary layers sit outside the interior grid on the
// two sides selected by `BoundaryAxis` and are eliminated into the right-hand
// side; the other two sides are no-flow.

#include "qflow/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qflow {

enum class BoundaryAxis {
  LeftRight,  ///< high pressure left of column 0, low pressure right of the last column
  TopBottom,  ///< high pressure above row 0, low pressure below the last row
};

std::string to_string(BoundaryAxis axis);
BoundaryAxis boundary_axis_from_string(const std::string& name);

struct FractureProblem {
  int rows = 0;
  int cols = 0;
  std::vector<double> permeability;  ///< per node, relative to the background
  double k_background = 1.0;
  BoundaryAxis boundary_axis = BoundaryAxis::LeftRight;
  double boundary_high = 1.0;
  double boundary_low = 0.0;
  std::vector<double> source;  ///< per node; zero in every shipped experiment
  std::vector<std::uint8_t> fracture_mask;

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
  }
  std::size_t fracture_count() const;
};

/// Validates sizes and permeabilities and derives the fracture mask
/// (true wherever the permeability differs from `k_background`).
FractureProblem make_problem(int rows, int cols, std::vector<double> permeability, double k_background,
                             BoundaryAxis axis = BoundaryAxis::LeftRight);

FractureProblem build_1d_problem(int n_nodes, double k_uniform);

/// Stem along the middle row from the high-pressure side to the middle column,
/// a connector down that column, and three branches on rows rows/4, rows/2 and
/// 3*rows/4 running to the last column. The branch on rows/4, beyond the middle
/// column, gets `k_right_branch`.
FractureProblem build_pitchfork_problem(int rows, int cols, double k_background, double k_fracture,
                                        double k_right_branch);

/// Interior shape used for an n-qubit pitchfork (4x8, 8x16, 16x32, ...).
std::pair<int, int> pitchfork_shape(int n_qubits);

/// Scaled system: A divided by its largest eigenvalue, b normalized to unit length.
struct LinearSystem {
  std::size_t n_vars = 0;
  SparseMatrix matrix;
  RVector rhs;
  double rhs_scale = 1.0;     ///< ||b|| before normalization
  double matrix_scale = 1.0;  ///< largest eigenvalue of the unscaled A
  double lambda_min = 0.0;    ///< smallest eigenvalue of the scaled A
  double kappa = 1.0;

  int n_qubits() const { return exact_log2(n_vars); }
  RMatrix dense() const { return RMatrix(matrix); }
};

/// Unscaled finite-volume assembly.
struct RawSystem {
  SparseMatrix matrix;
  RVector rhs;
};

RawSystem assemble_unscaled(const FractureProblem& problem);
LinearSystem assemble_system(const FractureProblem& problem);

/// Builds a LinearSystem from an explicit SPD matrix and right-hand side,
/// applying the same scaling as `assemble_system`.
LinearSystem make_system(const SparseMatrix& a, const RVector& b);

struct SolutionVector {
  RVector values;         ///< unit-norm solution of the scaled system
  double raw_scale = 1;   ///< physical pressures = values * raw_scale
  double system_norm = 1; ///< ||A^-1 b|| for the scaled system
};

SolutionVector solve_reference(const LinearSystem& system);
RVector physical_pressures(const SolutionVector& solution);

/// ||(A x) / ||A x|| - b||, zero exactly when x is proportional to the solution.
double normalized_residual(const LinearSystem& system, const RVector& x_hat);
/// ||A (scale * x) - b|| for a unit vector x and the true solution norm `scale`.
double scaled_residual(const LinearSystem& system, const RVector& x_hat, double scale);

struct BaselineMetrics {
  double error = 0.0;             ///< normalized residual of the uniform vector
  double error_true_scale = 0.0;  ///< residual after rescaling by ||x_true||
  double fidelity = 0.0;          ///< |<x_true, u>|^2
};

BaselineMetrics mixed_state_baseline(const LinearSystem& system, const SolutionVector& x_true);

/// Dense matrix as CSV with the right-hand side as the last column.
void write_system_csv(std::ostream& out, const LinearSystem& system);

}  // namespace qflow
