#include "qflow/vls.hpp"

#include <doctest.h>

#include <random>

using namespace qflow;

namespace {

struct Fixture {
  LinearSystem system = assemble_system(build_pitchfork_problem(4, 8, 1.0, 10.0, 10.0));
  SolutionVector x_true = solve_reference(system);
};

StateVector random_real_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RVector v(Eigen::Index{1} << n);
  for (auto& a : v) a = g(rng);
  return StateVector::from_real(v.normalized());
}

}  // namespace

TEST_CASE("Hamiltonian cost vanishes exactly on the solution") {
  Fixture f;
  std::mt19937_64 rng(31);
  const RMatrix h = vls_hamiltonian(f.system);
  CHECK(hamiltonian_cost(f.system, StateVector::from_real(f.x_true.values)) < 1e-14);
  CHECK((h * f.x_true.values).norm() < 1e-12);
  for (int i = 0; i < 10; ++i) {
    const StateVector s = random_real_state(5, rng);
    const RVector v = s.amplitudes().real();
    CHECK(hamiltonian_cost(f.system, s) == doctest::Approx(v.dot(h * v)).epsilon(1e-12));
    CHECK(hamiltonian_cost(f.system, s) >= 0.0);
    CHECK((hamiltonian_observable(f.system)(v) - h * v).norm() < 1e-13);
  }
}

TEST_CASE("overlap cost, fidelity and measured fidelity") {
  Fixture f;
  std::mt19937_64 rng(32);
  const StateVector exact = StateVector::from_real(f.x_true.values);
  CHECK(overlap_cost(f.x_true, exact) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fidelity(exact, f.x_true) == doctest::Approx(1.0));
  const StateVector flipped = StateVector::from_real(-f.x_true.values);
  CHECK(fidelity(flipped, f.x_true) == doctest::Approx(1.0));

  for (int i = 0; i < 10; ++i) {
    const StateVector s = random_real_state(5, rng);
    const double fid = fidelity(s, f.x_true);
    CHECK(fid >= 0.0);
    CHECK(fid <= 1.0);
    const RVector v = s.amplitudes().real();
    CHECK(overlap_observable(f.x_true)(v).dot(v) == doctest::Approx(1.0 - fid).epsilon(1e-12));
  }
  // readout of the exact probabilities recovers a nonnegative solution fully
  CHECK(measured_fidelity(f.x_true.values.cwiseAbs2(), f.x_true) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("training reaches the solution on a small problem and is reproducible") {
  const LinearSystem system = assemble_system(build_1d_problem(4, 1.0));
  const SolutionVector x_true = solve_reference(system);
  const CircuitTemplate circuit = build_template(2, 2);
  VlsConfig cfg;
  cfg.restarts = 4;
  cfg.max_iterations = 60;
  cfg.seed = 99;
  const TrainResult a = train(system, x_true, circuit, cfg);
  const TrainResult b = train(system, x_true, circuit, cfg);
  CHECK(a.best_fidelity > 0.999);
  CHECK(a.best_restart == b.best_restart);
  CHECK((a.best_params - b.best_params).norm() == 0.0);
  REQUIRE(a.traces.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(a.traces[r].restart == static_cast<int>(r));
    CHECK(a.traces[r].points.front().iteration == 0);
    CHECK(a.traces[r].points.size() == b.traces[r].points.size());
    CHECK(a.traces[r].final_fidelity <= a.best_fidelity);
  }
  CHECK(fidelity(evaluate(circuit, a.best_params), x_true) == doctest::Approx(a.best_fidelity).epsilon(1e-12));

  // a restart's trace does not depend on how many restarts ran alongside it
  VlsConfig one = cfg;
  one.restarts = 2;
  const TrainResult c = train(system, x_true, circuit, one);
  CHECK(c.traces[1].final_cost == a.traces[1].final_cost);

  // parameter-shift gradients drive the same optimizer
  VlsConfig shift = cfg;
  shift.gradient = GradientMethod::ParameterShift;
  shift.restarts = 1;
  const TrainResult d = train(system, x_true, circuit, shift);
  CHECK(d.traces[0].final_fidelity == doctest::Approx(a.traces[0].final_fidelity).epsilon(1e-6));
}

TEST_CASE("overlap cost and shot-sampled costs") {
  const LinearSystem system = assemble_system(build_1d_problem(8, 1.0));
  const SolutionVector x_true = solve_reference(system);
  const CircuitTemplate circuit = build_template(3, 3);
  VlsConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 80;
  cfg.cost_mode = CostMode::Overlap;
  const TrainResult r = train(system, x_true, circuit, cfg);
  CHECK(r.best_fidelity > 0.99);
  CHECK(r.best_cost == doctest::Approx(1.0 - r.best_fidelity).epsilon(1e-12));

  cfg.shots_for_cost = 1000;
  cfg.restarts = 1;
  const TrainResult s = train(system, x_true, circuit, cfg);
  for (const auto& p : s.traces[0].points) {
    CHECK(p.cost >= 0.0);
    CHECK(p.cost <= 1.0);
  }
}

TEST_CASE("config validation and defaults") {
  VlsConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.restarts = 1;
  cfg.shots_for_cost = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);

  CHECK(default_cost_mode(5) == CostMode::Hamiltonian);
  CHECK(default_cost_mode(7) == CostMode::Overlap);
  CHECK(default_layer_count(5) == 5);
  CHECK(default_layer_count(9) == 9);
  CHECK(cost_mode_from_string(to_string(CostMode::Overlap)) == CostMode::Overlap);

  Fixture f;
  VlsConfig ok;
  CHECK_THROWS_AS(train(f.system, f.x_true, build_template(4, 1), ok), DimensionError);
}

TEST_CASE("noisy readout: dephasing is harmless, full depolarizing gives the mixed-state baseline") {
  Fixture f;
  std::mt19937_64 rng(33);
  const CircuitTemplate circuit = build_template(5, 2);
  Params p(static_cast<Eigen::Index>(circuit.parameter_count()));
  std::uniform_real_distribution<double> a(0, 6.28);
  for (auto& x : p) x = a(rng);

  const RVector clean_probs = evaluate(circuit, p).probabilities();
  const double clean = measured_fidelity(clean_probs, f.x_true);
  for (double keep : {0.0, 0.4, 1.0}) {
    const double dephased = noisy_fidelity(circuit, p, f.x_true, NoiseChannel(NoiseChannel::Kind::TerminalDephasing, keep));
    CHECK(dephased == doctest::Approx(clean).epsilon(1e-12));
  }
  const double mixed = noisy_fidelity(circuit, p, f.x_true, NoiseChannel(NoiseChannel::Kind::LayerDepolarizing, 0.0));
  CHECK(mixed == doctest::Approx(mixed_state_baseline(f.system, f.x_true).fidelity).epsilon(1e-12));
}

TEST_CASE("observables do not depend on the lifetime of their arguments") {
  Observable h, o;
  RVector expect_h, expect_o;
  const RVector psi = RVector::Constant(8, 1.0 / std::sqrt(8.0));
  {
    const LinearSystem s = assemble_system(build_1d_problem(8, 1.0));
    const SolutionVector x = solve_reference(s);
    h = hamiltonian_observable(s);
    o = overlap_observable(x);
    expect_h = vls_hamiltonian(s) * psi;
    expect_o = psi - x.values * x.values.dot(psi);
  }
  CHECK((h(psi) - expect_h).norm() < 1e-13);
  CHECK((o(psi) - expect_o).norm() < 1e-15);
}
