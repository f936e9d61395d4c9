#pragma once

// Variational synthesis of small unitaries: fit the angles of a fixed gate
// skeleton (CNOT entanglers plus Rz.Ry.Rz rotation slots) to a target.

#include "qflow/common.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qflow {

struct CompileSlot {
  enum class Kind { CNOT, Rotation };
  Kind kind = Kind::Rotation;
  int qubit = 0;   ///< rotation qubit, or CNOT control
  int target = -1; ///< CNOT target
  int param = -1;  ///< first of three angles for a rotation slot
};

struct CompileTemplate {
  int n_qubits = 0;
  std::vector<CompileSlot> slots;
  int parameter_count = 0;
  std::string description;

  int cnot_count() const;
  int rotation_count() const;
};

/// (U x U) CNOT(1->0) (U x U) CNOT(0->1) (I x U) CNOT(1->0) (U x U):
/// three CNOTs and seven rotation slots, enough for any two-qubit unitary.
CompileTemplate two_qubit_template();

/// Rotation column, then `n_cnots` CNOTs cycling over neighbouring pairs, each
/// followed by a rotation slot on its target.
CompileTemplate brickwork_template(int n_qubits, int n_cnots);

CMatrix circuit_unitary(const CompileTemplate& circuit, const RVector& params);

/// |Tr(U^dagger V)|^2 / d^2
double unitary_fidelity(const CMatrix& u, const CMatrix& v);

struct CompilationTask {
  CMatrix target;
  CompileTemplate circuit;
  double tolerance = 0.999;  ///< required fidelity
  int max_iterations = 2000;
  int restarts = 20;
};

struct CompileResult {
  RVector params;
  double achieved_fidelity = 0.0;
  bool success = false;
  int restarts_used = 0;
};

CompileResult compile_unitary(const CompilationTask& task, std::uint64_t seed);

struct CompiledGate {
  std::string name;  ///< "cx", "rz" or "ry"
  std::vector<int> targets;
  double angle = 0.0;
};

/// Gate list in application order.
std::vector<CompiledGate> gate_list(const CompileTemplate& circuit, const RVector& params);

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal folded back into Q.
CMatrix haar_unitary(int dim, std::mt19937_64& rng);

}  // namespace qflow
