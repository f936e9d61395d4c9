#pragma once

// Randomized adiabatic solver. The path A(s) = (1-s) I + s A carries the
// trivially solved system (solution |b>) to the target; H(s) = A(s) P A(s)
// with P = I - |b><b| has A(s)^-1 |b> as its null vector. Evolving for random
// times under H(s_j) along the schedule s_j = j/q keeps the state near that
// null vector.

#include "qflow/mesh.hpp"
#include "qflow/qsim.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qflow {

struct SsoConfig {
  int q = 100;
  int trials = 75;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
  /// Score the exact final state instead of a shot-sampled readout.
  bool exact_state = false;

  void validate() const;
};

struct SsoRun {
  CMatrix net_unitary;
  StateVector final_state{1};
  RVector step_times;
  double error = 0.0;        ///< residual of the readout selected by the config
  double exact_error = 0.0;  ///< residual of the exact-probability readout
};

RMatrix interpolated_hamiltonian(const LinearSystem& system, double s);

/// Spectral-gap scale used to bound the random step times.
double gap_bound(double s, double kappa);

/// One randomized evolution; `config.seed` seeds the step times and the shots.
SsoRun run_evolution(const LinearSystem& system, const SsoConfig& config);

struct SsoStats {
  int q = 0;
  double min_error = 0.0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double baseline_error = 0.0;
  std::vector<double> errors;  ///< one per trial, in trial order
  std::vector<double> exact_errors;
};

/// Independent trials for each q; trial t of q uses seed stream ("sso", q, t).
std::vector<SsoStats> run_trials(const LinearSystem& system, const SsoConfig& config, std::span<const int> q_grid);

/// Seed used for trial `trial` at step count `q`.
std::uint64_t sso_trial_seed(std::uint64_t root, int q, int trial);

}  // namespace qflow
