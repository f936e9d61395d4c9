#include "qflow/vls.hpp"

#include "qflow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qflow {

std::string to_string(CostMode mode) { return mode == CostMode::Hamiltonian ? "hamiltonian" : "overlap"; }

CostMode cost_mode_from_string(const std::string& name) {
  if (name == "hamiltonian") return CostMode::Hamiltonian;
  if (name == "overlap") return CostMode::Overlap;
  throw ValidationError("unknown cost mode '" + name + "'");
}

CostMode default_cost_mode(int n_qubits) { return n_qubits >= 7 ? CostMode::Overlap : CostMode::Hamiltonian; }

int default_layer_count(int n_qubits) { return n_qubits <= 5 ? 5 : n_qubits; }

void VlsConfig::validate() const {
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (shots_for_cost && *shots_for_cost == 0) throw ValidationError("shots_for_cost must be positive");
}

double hamiltonian_cost(const LinearSystem& system, const StateVector& state) {
  if (state.dim() != system.n_vars) throw DimensionError("state does not match the system size");
  const CVector ax = system.matrix.cast<cplx>() * state.amplitudes();
  const cplx overlap = system.rhs.cast<cplx>().dot(ax);
  return std::max(0.0, ax.squaredNorm() - std::norm(overlap));
}

RMatrix vls_hamiltonian(const LinearSystem& system) {
  const RMatrix a = system.dense();
  const auto n = a.rows();
  const RMatrix projector = RMatrix::Identity(n, n) - system.rhs * system.rhs.transpose();
  return a.transpose() * projector * a;
}

Observable hamiltonian_observable(const LinearSystem& system) {
  // Captured by value so the observable may outlive its arguments.
  return [a = system.matrix, b = system.rhs](const RVector& psi) -> RVector {
    RVector y = a * psi;
    y -= b * b.dot(y);
    return a * y;
  };
}

double overlap_cost(const SolutionVector& x_true, const StateVector& state) {
  return 1.0 - fidelity(state, x_true);
}

Observable overlap_observable(const SolutionVector& x_true) {
  return [x = x_true.values](const RVector& psi) -> RVector { return psi - x * x.dot(psi); };
}

double fidelity(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DimensionError("fidelity of vectors with different lengths");
  return std::norm(a.dot(b));
}

double fidelity(const StateVector& a, const StateVector& b) { return fidelity(a.amplitudes(), b.amplitudes()); }

double fidelity(const StateVector& a, const SolutionVector& b) {
  return fidelity(a.amplitudes(), CVector(b.values.cast<cplx>()));
}

double fidelity(const SolutionVector& a, const SolutionVector& b) {
  if (a.values.size() != b.values.size()) throw DimensionError("fidelity of vectors with different lengths");
  const double o = a.values.dot(b.values);
  return o * o;
}

double measured_fidelity(const RVector& probabilities, const SolutionVector& x_true) {
  if (probabilities.size() != x_true.values.size()) throw DimensionError("readout does not match the solution size");
  const double o = probabilities.cwiseMax(0.0).cwiseSqrt().dot(x_true.values);
  return o * o;
}

namespace {

double shot_cost(const LinearSystem& system, const SolutionVector& x_true, CostMode mode, const RVector& psi,
                 std::uint64_t shots, std::uint64_t seed) {
  const SolutionVector inferred = infer_solution(sample_shots(RVector(psi.cwiseAbs2()), shots, seed));
  const StateVector s = StateVector::from_real(inferred.values);
  return mode == CostMode::Hamiltonian ? hamiltonian_cost(system, s) : overlap_cost(x_true, s);
}

RestartTrace run_restart(const LinearSystem& system, const SolutionVector& x_true, const CircuitTemplate& circuit,
                         const VlsConfig& config, const Observable& observable, int restart) {
  const SeedStream stream = SeedStream(config.seed).child("restart", static_cast<std::uint64_t>(restart));
  std::mt19937_64 rng = stream.engine();
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Params theta(static_cast<Eigen::Index>(circuit.parameter_count()));
  for (auto& t : theta) t = angle(rng);

  RestartTrace trace;
  trace.restart = restart;
  trace.seed = stream.value();

  const Objective objective = [&](const RVector& x, RVector& grad) {
    if (config.gradient == GradientMethod::Adjoint) return adjoint_gradient(observable, circuit, x, grad);
    grad = gradient(observable, circuit, x);
    return expectation_cost(observable, circuit, x);
  };

  int rising = 0;
  auto record = [&](int iteration, const RVector& x, double exact_cost) {
    const RVector psi = evaluate_real(circuit, x);
    double cost = exact_cost;
    if (config.shots_for_cost) {
      const std::uint64_t seed = stream.child("shots", static_cast<std::uint64_t>(iteration)).value();
      cost = shot_cost(system, x_true, config.cost_mode, psi, *config.shots_for_cost, seed);
    }
    const double o = psi.dot(x_true.values);
    if (!trace.points.empty() && cost > trace.points.back().cost) {
      if (++rising >= 20) trace.diverged = true;
    } else {
      rising = 0;
    }
    trace.points.push_back({iteration, cost, o * o});
  };

  RVector g0;
  record(0, theta, objective(theta, g0));

  MinimizeOptions options;
  options.method = config.optimizer;
  options.max_iterations = config.max_iterations;
  const MinimizeResult res = minimize(objective, theta, options, [&](int it, const RVector& x, double value) {
    record(it, x, value);
    return !trace.diverged;
  });

  trace.final_params = wrap_angles(res.x);
  trace.final_cost = trace.points.back().cost;
  trace.final_fidelity = trace.points.back().fidelity;
  return trace;
}

}  // namespace

TrainResult train(const LinearSystem& system, const SolutionVector& x_true, const CircuitTemplate& circuit,
                  const VlsConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(circuit.n_qubits) != static_cast<std::size_t>(system.n_qubits())) {
    throw DimensionError("ansatz qubit count does not match the system size");
  }
  if (static_cast<std::size_t>(x_true.values.size()) != system.n_vars) {
    throw DimensionError("reference solution does not match the system size");
  }

  const Observable observable =
      config.cost_mode == CostMode::Hamiltonian ? hamiltonian_observable(system) : overlap_observable(x_true);

  TrainResult result;
  result.traces.resize(static_cast<std::size_t>(config.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < config.restarts; ++r) {
    result.traces[static_cast<std::size_t>(r)] = run_restart(system, x_true, circuit, config, observable, r);
  }

  // Order-independent pick: highest fidelity, then lowest cost, then lowest index.
  for (const auto& t : result.traces) {
    const bool better = result.best_restart < 0 || t.final_fidelity > result.best_fidelity ||
                        (t.final_fidelity == result.best_fidelity && t.final_cost < result.best_cost);
    if (better) {
      result.best_restart = t.restart;
      result.best_fidelity = t.final_fidelity;
      result.best_cost = t.final_cost;
      result.best_params = t.final_params;
    }
  }
  return result;
}

double noisy_fidelity(const CircuitTemplate& circuit, const Params& params, const SolutionVector& x_true,
                      const NoiseChannel& channel) {
  const DensityOperator rho = state_to_density(evaluate(circuit, params));
  const DensityOperator noisy = apply_channel(rho, channel, circuit.n_layers);
  return measured_fidelity(noisy.diagonal(), x_true);
}

}  // namespace qflow
