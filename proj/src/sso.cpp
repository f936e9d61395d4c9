#include "qflow/sso.hpp"

#include "qflow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace qflow {

void SsoConfig::validate() const {
  if (q < 1) throw ValidationError("q must be at least 1");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (!exact_state && shots == 0) throw ValidationError("shots must be positive");
}

namespace {

RMatrix path_hamiltonian(const RMatrix& a, const RMatrix& projector, double s) {
  const auto n = a.rows();
  const RMatrix as = (1.0 - s) * RMatrix::Identity(n, n) + s * a;
  return as * projector * as;
}

RMatrix rhs_projector(const LinearSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.n_vars);
  return RMatrix::Identity(n, n) - system.rhs * system.rhs.transpose();
}

}  // namespace

RMatrix interpolated_hamiltonian(const LinearSystem& system, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("interpolation parameter must lie in [0, 1]");
  return path_hamiltonian(system.dense(), rhs_projector(system), s);
}

double gap_bound(double s, double kappa) {
  const double lo = (1.0 - s) + s / kappa;
  return lo * lo;
}

SsoRun run_evolution(const LinearSystem& system, const SsoConfig& config) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(system.n_vars);
  const RMatrix a = system.dense();
  const RMatrix projector = rhs_projector(system);
  std::mt19937_64 rng = SeedStream(config.seed).child("times").engine();

  SsoRun run;
  run.step_times.resize(config.q);
  run.net_unitary = CMatrix::Identity(n, n);
  for (int j = 1; j <= config.q; ++j) {
    const double s = static_cast<double>(j) / config.q;
    std::uniform_real_distribution<double> draw(0.0, 2.0 * std::numbers::pi / gap_bound(s, system.kappa));
    const double t = draw(rng);
    run.step_times(j - 1) = t;

    Eigen::SelfAdjointEigenSolver<RMatrix> es(path_hamiltonian(a, projector, s));
    const CVector phases = (es.eigenvalues() * (-t)).unaryExpr([](double phase) { return std::polar(1.0, phase); });
    const CMatrix v = es.eigenvectors().cast<cplx>();
    run.net_unitary = (v * phases.asDiagonal() * v.adjoint()) * run.net_unitary;
  }

  CVector psi = run.net_unitary * system.rhs.cast<cplx>();
  psi /= psi.norm();
  run.final_state = StateVector::from_amplitudes(psi);

  const RVector probabilities = run.final_state.probabilities();
  run.exact_error = normalized_residual(system, infer_solution(probabilities).values);
  if (config.exact_state) {
    run.error = run.exact_error;
  } else {
    const std::uint64_t shot_seed = SeedStream(config.seed).child("shots").value();
    const ShotCounts counts = sample_shots(probabilities, config.shots, shot_seed);
    run.error = normalized_residual(system, infer_solution(counts).values);
  }
  return run;
}

std::uint64_t sso_trial_seed(std::uint64_t root, int q, int trial) {
  return SeedStream(root).child("sso", static_cast<std::uint64_t>(q)).child("trial", static_cast<std::uint64_t>(trial)).value();
}

std::vector<SsoStats> run_trials(const LinearSystem& system, const SsoConfig& config, std::span<const int> q_grid) {
  config.validate();
  const SolutionVector x_true = solve_reference(system);
  const double baseline = mixed_state_baseline(system, x_true).error;

  std::vector<SsoStats> table;
  for (int q : q_grid) {
    if (q < 1) throw ValidationError("q values must be positive");
    SsoStats row;
    row.q = q;
    row.baseline_error = baseline;
    row.errors.assign(static_cast<std::size_t>(config.trials), 0.0);
    row.exact_errors.assign(static_cast<std::size_t>(config.trials), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < config.trials; ++t) {
      SsoConfig trial = config;
      trial.q = q;
      trial.seed = sso_trial_seed(config.seed, q, t);
      const SsoRun run = run_evolution(system, trial);
      row.errors[static_cast<std::size_t>(t)] = run.error;
      row.exact_errors[static_cast<std::size_t>(t)] = run.exact_error;
    }
    row.min_error = *std::min_element(row.errors.begin(), row.errors.end());
    row.max_error = *std::max_element(row.errors.begin(), row.errors.end());
    row.mean_error = std::accumulate(row.errors.begin(), row.errors.end(), 0.0) / static_cast<double>(row.errors.size());
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace qflow
