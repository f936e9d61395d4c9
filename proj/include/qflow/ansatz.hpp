#pragma once

// Layered hardware-efficient ansatz: an initial Ry column, then per layer
// [CZ on (0,1),(2,3),... ; Ry column] followed by [CZ on (1,2),(3,4),... ; Ry column].
// Every gate is real, so circuits are evaluated on real amplitude vectors.

#include "qflow/common.hpp"
#include "qflow/qsim.hpp"

#include <functional>
#include <vector>

namespace qflow {

struct AnsatzGate {
  enum class Kind { Ry, CZ };
  Kind kind = Kind::Ry;
  int qubit = 0;
  int partner = -1;  ///< second qubit of a CZ
  int param = -1;    ///< parameter index of an Ry
};

struct CircuitTemplate {
  int n_qubits = 0;
  int n_layers = 0;
  std::vector<AnsatzGate> gates;
  int cz_columns = 0;

  std::size_t parameter_count() const { return static_cast<std::size_t>(n_qubits * (1 + 2 * n_layers)); }
  std::size_t dim() const { return std::size_t{1} << n_qubits; }
};

/// Trainable angles, one per Ry slot.
using Params = RVector;

CircuitTemplate build_template(int n_qubits, int n_layers);

/// Real amplitudes of U(theta)|0...0>.
RVector evaluate_real(const CircuitTemplate& circuit, const Params& params);
StateVector evaluate(const CircuitTemplate& circuit, const Params& params);

/// Maps angles into [0, 2pi).
Params wrap_angles(const Params& params);

/// Real symmetric observable M, given by its action psi -> M psi.
using Observable = std::function<RVector(const RVector&)>;

double expectation_cost(const Observable& m, const CircuitTemplate& circuit, const Params& params);

/// Parameter-shift gradient of <x(theta)|M|x(theta)>:
/// dC/dtheta_j = [C(theta + pi/2 e_j) - C(theta - pi/2 e_j)] / 2.
RVector gradient(const Observable& m, const CircuitTemplate& circuit, const Params& params);

/// Same gradient by a single reverse sweep through the circuit. Returns the cost.
double adjoint_gradient(const Observable& m, const CircuitTemplate& circuit, const Params& params, RVector& grad);

}  // namespace qflow
