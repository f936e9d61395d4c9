#pragma once

// Dense statevector / density-operator simulation, shot sampling and the two
// noise channels used in the resilience checks.

#include "qflow/common.hpp"
#include "qflow/mesh.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qflow {

struct Gate;
struct NoiseChannel;

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);

  /// Validates the length (power of two) and the norm (to 1e-10), then
  /// renormalizes to remove the residue.
  static StateVector from_amplitudes(CVector amplitudes);
  static StateVector from_real(const RVector& amplitudes);
  static StateVector basis(int n_qubits, std::size_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  RVector probabilities() const { return amps_.cwiseAbs2(); }

 private:
  StateVector(CVector amps, int n) : amps_(std::move(amps)), n_qubits_(n) {}
  friend StateVector apply_gate(StateVector, const Gate&, std::span<const int>);

  CVector amps_;
  int n_qubits_;
};

struct Gate {
  enum class Kind { Ry, Rz, X, Z, CZ, CNOT, Unitary };
  Kind kind = Kind::Ry;
  double angle = 0.0;
  CMatrix matrix;  ///< only for Kind::Unitary

  static Gate ry(double angle) { return {Kind::Ry, angle, {}}; }
  static Gate rz(double angle) { return {Kind::Rz, angle, {}}; }
  static Gate x() { return {Kind::X, 0.0, {}}; }
  static Gate z() { return {Kind::Z, 0.0, {}}; }
  static Gate cz() { return {Kind::CZ, 0.0, {}}; }
  static Gate cnot() { return {Kind::CNOT, 0.0, {}}; }
  static Gate unitary(CMatrix u) { return {Kind::Unitary, 0.0, std::move(u)}; }

  int arity() const;
};

/// For CNOT, targets = {control, target}. For Unitary, targets[0] is the least
/// significant bit of the matrix index.
StateVector apply_gate(StateVector state, const Gate& gate, std::span<const int> targets);
inline StateVector apply_gate(StateVector state, const Gate& gate, std::initializer_list<int> targets) {
  return apply_gate(std::move(state), gate, std::span<const int>(targets.begin(), targets.size()));
}

bool is_unitary(const CMatrix& u, double tol = 1e-10);

/// <x|H|x> for Hermitian H.
double expectation(const StateVector& state, const CMatrix& h);

struct ShotCounts {
  std::vector<std::uint64_t> counts;  ///< indexed by basis state
  std::uint64_t total = 0;
};

/// Multinomial draw over |c_i|^2, as a chain of conditional binomials.
ShotCounts sample_shots(const RVector& probabilities, std::uint64_t n_shots, std::uint64_t seed);
ShotCounts sample_shots(const StateVector& state, std::uint64_t n_shots, std::uint64_t seed);

/// x_i = sqrt(counts_i / total). Signs are not recoverable from counts; every
/// target solution here is elementwise nonnegative.
SolutionVector infer_solution(const ShotCounts& counts);
/// Same readout from exact probabilities.
SolutionVector infer_solution(const RVector& probabilities);

class DensityOperator {
 public:
  /// Validates trace, Hermiticity and positivity.
  static DensityOperator from_matrix(CMatrix rho);
  static DensityOperator maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return rho_; }
  RVector diagonal() const { return rho_.diagonal().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  DensityOperator(CMatrix rho, int n) : rho_(std::move(rho)), n_qubits_(n) {}
  friend DensityOperator apply_channel(const DensityOperator&, const NoiseChannel&, int);
  friend DensityOperator apply_dephasing(const DensityOperator&, std::span<const double>);
  friend DensityOperator evolve(const DensityOperator&, const CMatrix&);
  friend DensityOperator state_to_density(const StateVector&);

  CMatrix rho_;
  int n_qubits_;
};

struct NoiseChannel {
  enum class Kind {
    TerminalDephasing,       ///< Z-dephasing on every qubit after the circuit
    LayerDepolarizing,       ///< global depolarizing after every ansatz layer
  };
  Kind kind = Kind::TerminalDephasing;
  double p = 1.0;  ///< probability that the noise does not act

  NoiseChannel(Kind k, double p_keep);
};

/// Terminal dephasing applies p rho + (1-p) Z_q rho Z_q on each qubit in turn.
/// Layer depolarizing uses the closed form p^L rho + (1 - p^L) I / 2^n.
DensityOperator apply_channel(const DensityOperator& rho, const NoiseChannel& channel, int layer_count);
/// Terminal dephasing with a separate p for each qubit.
DensityOperator apply_dephasing(const DensityOperator& rho, std::span<const double> p_per_qubit);
/// U rho U^dagger
DensityOperator evolve(const DensityOperator& rho, const CMatrix& u);
DensityOperator state_to_density(const StateVector& state);

}  // namespace qflow
