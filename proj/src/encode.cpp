#include "qflow/encode.hpp"

namespace qflow {

SmartPermutation build_smart_permutation(const FractureProblem& problem) {
  const std::size_t n = problem.size();
  SmartPermutation perm;
  perm.n_qubits = exact_log2(n);
  perm.readout_qubit = perm.n_qubits - 1;
  perm.fracture_count = problem.fracture_count();
  const std::size_t half = n / 2;
  if (perm.fracture_count > half) {
    throw EncodingError("fracture covers " + std::to_string(perm.fracture_count) + " of " + std::to_string(n) +
                        " nodes; a single readout bit can hold at most half");
  }

  perm.mapping.assign(n, 0);
  std::size_t next_high = half;
  std::size_t next_low = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (problem.fracture_mask[i]) perm.mapping[i] = next_high++;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (problem.fracture_mask[i]) continue;
    if (next_low < half) {
      perm.mapping[i] = next_low++;
    } else {
      perm.mapping[i] = next_high++;
      ++perm.padded;
    }
  }
  return perm;
}

RVector permute(const RVector& v, const SmartPermutation& perm) {
  if (static_cast<std::size_t>(v.size()) != perm.mapping.size()) throw DimensionError("vector does not match the permutation");
  RVector out(v.size());
  for (std::size_t i = 0; i < perm.mapping.size(); ++i) {
    out(static_cast<Eigen::Index>(perm.mapping[i])) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

LinearSystem apply_permutation(const LinearSystem& system, const SmartPermutation& perm) {
  if (system.n_vars != perm.mapping.size()) throw DimensionError("system does not match the permutation");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (Eigen::Index r = 0; r < system.matrix.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(system.matrix, r); it; ++it) {
      triplets.emplace_back(static_cast<int>(perm.mapping[static_cast<std::size_t>(it.row())]),
                            static_cast<int>(perm.mapping[static_cast<std::size_t>(it.col())]), it.value());
    }
  }
  LinearSystem out = system;
  out.matrix.setZero();
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.rhs = permute(system.rhs, perm);
  return out;
}

FractureMarginal fracture_marginal(const RVector& probabilities, const SmartPermutation& perm) {
  if (static_cast<std::size_t>(probabilities.size()) != perm.mapping.size()) {
    throw DimensionError("probabilities do not match the permutation");
  }
  const std::size_t bit = std::size_t{1} << perm.readout_qubit;
  double p = 0.0;
  for (std::size_t i = 0; i < perm.mapping.size(); ++i) {
    if (i & bit) p += probabilities(static_cast<Eigen::Index>(i));
  }
  return {p, 1.0 - p};
}

FractureMarginal fracture_marginal(const ShotCounts& counts, const SmartPermutation& perm) {
  if (counts.counts.size() != perm.mapping.size()) throw DimensionError("counts do not match the permutation");
  if (counts.total == 0) throw ValidationError("no shots recorded");
  const std::size_t bit = std::size_t{1} << perm.readout_qubit;
  std::uint64_t ones = 0;
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    if (i & bit) ones += counts.counts[i];
  }
  const double p = static_cast<double>(ones) / static_cast<double>(counts.total);
  return {p, 1.0 - p};
}

double mask_probability(const RVector& probabilities, const SmartPermutation& perm,
                        const std::vector<std::uint8_t>& mask) {
  if (mask.size() != perm.mapping.size()) throw DimensionError("mask does not match the permutation");
  double p = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) p += probabilities(static_cast<Eigen::Index>(perm.mapping[i]));
  }
  return p;
}

}  // namespace qflow
