#pragma once

// Smart encoding: relabel nodes so that one readout qubit separates the
// fracture from the surrounding matrix. Measuring that qubit alone then gives
// the total fracture probability mass.

#include "qflow/mesh.hpp"
#include "qflow/qsim.hpp"

#include <vector>

namespace qflow {

struct SmartPermutation {
  std::vector<std::size_t> mapping;  ///< node index -> basis index
  int n_qubits = 0;
  int readout_qubit = 0;             ///< most significant bit
  std::size_t fracture_count = 0;
  /// Matrix nodes placed on readout-bit-1 indices because the fracture set
  /// is smaller than half the grid.
  std::size_t padded = 0;

  bool exact_split() const { return padded == 0; }
};

/// Fracture nodes, in row-major order, take the readout-bit-1 indices from
/// N/2 upward; matrix nodes fill the bit-0 indices and then any bit-1 slots
/// left over (padding).
SmartPermutation build_smart_permutation(const FractureProblem& problem);

/// (P v)[mapping[i]] = v[i]
RVector permute(const RVector& v, const SmartPermutation& perm);

/// A' = P A P^T, b' = P b
LinearSystem apply_permutation(const LinearSystem& system, const SmartPermutation& perm);

struct FractureMarginal {
  double p_fracture = 0.0;  ///< probability that the readout qubit is 1
  double p_matrix = 0.0;
};

/// Readout-qubit marginal from exact basis probabilities (already permuted).
FractureMarginal fracture_marginal(const RVector& probabilities, const SmartPermutation& perm);
FractureMarginal fracture_marginal(const ShotCounts& counts, const SmartPermutation& perm);

/// Sum of the probabilities of the masked nodes, looked up through the
/// permutation. Equals the readout marginal exactly when the split is exact;
/// it is the fallback readout when the encoding had to pad.
double mask_probability(const RVector& probabilities, const SmartPermutation& perm,
                        const std::vector<std::uint8_t>& mask);

}  // namespace qflow
