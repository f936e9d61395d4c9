#pragma once

// Variational linear solver: costs, fidelity, the multi-restart training loop
// and noisy readout of trained circuits.

#include "qflow/ansatz.hpp"
#include "qflow/mesh.hpp"
#include "qflow/optimize.hpp"
#include "qflow/qsim.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qflow {

enum class CostMode {
  Hamiltonian,  ///< <x|A (I - |b><b|) A|x>
  Overlap,      ///< 1 - |<x_true|x>|^2
};

std::string to_string(CostMode mode);
CostMode cost_mode_from_string(const std::string& name);

enum class GradientMethod { Adjoint, ParameterShift };

/// Hamiltonian cost up to 5 qubits, overlap cost beyond.
CostMode default_cost_mode(int n_qubits);
/// 5 layers for 5 qubits, otherwise as many layers as qubits.
int default_layer_count(int n_qubits);

struct VlsConfig {
  int restarts = 40;
  int max_iterations = 150;
  OptimizerKind optimizer = OptimizerKind::ConjugateGradient;
  CostMode cost_mode = CostMode::Hamiltonian;
  std::optional<std::uint64_t> shots_for_cost;
  std::uint64_t seed = 0;
  GradientMethod gradient = GradientMethod::Adjoint;

  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double cost = 0.0;
  double fidelity = 0.0;
};

struct RestartTrace {
  int restart = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> points;
  bool diverged = false;
  Params final_params;
  double final_cost = 0.0;
  double final_fidelity = 0.0;
};

struct TrainResult {
  std::vector<RestartTrace> traces;
  Params best_params;
  int best_restart = -1;
  double best_fidelity = 0.0;
  double best_cost = 0.0;
};

double hamiltonian_cost(const LinearSystem& system, const StateVector& state);
/// Dense A (I - |b><b|) A; only for small systems.
RMatrix vls_hamiltonian(const LinearSystem& system);
Observable hamiltonian_observable(const LinearSystem& system);

double overlap_cost(const SolutionVector& x_true, const StateVector& state);
Observable overlap_observable(const SolutionVector& x_true);

/// |<a|b>|^2
double fidelity(const CVector& a, const CVector& b);
double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const SolutionVector& b);
double fidelity(const SolutionVector& a, const SolutionVector& b);

/// |sum_i sqrt(p_i) x_i|^2: fidelity of the state a computational-basis
/// readout infers from probabilities p.
double measured_fidelity(const RVector& probabilities, const SolutionVector& x_true);

TrainResult train(const LinearSystem& system, const SolutionVector& x_true, const CircuitTemplate& circuit,
                  const VlsConfig& config);

/// Fidelity read out from the diagonal of the noisy density operator. Layer
/// depolarizing uses the template's layer count.
double noisy_fidelity(const CircuitTemplate& circuit, const Params& params, const SolutionVector& x_true,
                      const NoiseChannel& channel);

}  // namespace qflow
