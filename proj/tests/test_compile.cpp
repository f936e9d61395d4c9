#include "qflow/compile.hpp"
#include "qflow/qsim.hpp"
#include "qflow/sso.hpp"

#include <doctest.h>

#include <numbers>

using namespace qflow;

TEST_CASE("unitary fidelity") {
  const CMatrix id = CMatrix::Identity(4, 4);
  CHECK(unitary_fidelity(id, id) == doctest::Approx(1.0));
  CHECK(unitary_fidelity(id, std::polar(1.0, 0.7) * id) == doctest::Approx(1.0));
  CMatrix cz = id;
  cz(3, 3) = -1.0;
  CHECK(unitary_fidelity(id, cz) == doctest::Approx(0.25));
  CHECK_THROWS_AS(unitary_fidelity(id, CMatrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("template shapes") {
  const CompileTemplate two = two_qubit_template();
  CHECK(two.cnot_count() == 3);
  CHECK(two.rotation_count() == 7);
  CHECK(two.parameter_count == 21);

  const CompileTemplate brick = brickwork_template(3, 20);
  CHECK(brick.cnot_count() == 20);
  CHECK(brick.rotation_count() == 23);
  for (const auto& s : brick.slots) {
    if (s.kind == CompileSlot::Kind::CNOT) CHECK(std::abs(s.qubit - s.target) == 1);
  }
  CHECK_THROWS_AS(brickwork_template(1, 3), ValidationError);
}

TEST_CASE("circuit unitary agrees with gate-by-gate simulation of the gate list") {
  std::mt19937_64 rng(41);
  const CompileTemplate t = brickwork_template(3, 5);
  RVector p(t.parameter_count);
  std::uniform_real_distribution<double> a(0, 6.28);
  for (auto& x : p) x = a(rng);
  const CMatrix u = circuit_unitary(t, p);
  CHECK(is_unitary(u, 1e-12));
  const auto gates = gate_list(t, p);
  for (std::size_t c = 0; c < 8; ++c) {
    StateVector s = StateVector::basis(3, c);
    for (const auto& g : gates) {
      if (g.name == "cx") s = apply_gate(std::move(s), Gate::cnot(), {g.targets[0], g.targets[1]});
      else if (g.name == "rz") s = apply_gate(std::move(s), Gate::rz(g.angle), {g.targets[0]});
      else s = apply_gate(std::move(s), Gate::ry(g.angle), {g.targets[0]});
    }
    CHECK((s.amplitudes() - u.col(static_cast<Eigen::Index>(c))).norm() < 1e-12);
  }
}

TEST_CASE("Haar unitaries are unitary and seed-determined") {
  std::mt19937_64 a(7), b(7);
  const CMatrix u = haar_unitary(4, a);
  CHECK(is_unitary(u, 1e-12));
  CHECK((u - haar_unitary(4, b)).norm() == 0.0);
}

TEST_CASE("compiling CNOT and a Haar target with the 3-CNOT skeleton") {
  CMatrix cnot = CMatrix::Zero(4, 4);
  // control qubit 0, target qubit 1
  cnot(0, 0) = cnot(2, 2) = 1.0;
  cnot(3, 1) = cnot(1, 3) = 1.0;
  CompilationTask task;
  task.target = cnot;
  task.circuit = two_qubit_template();
  task.tolerance = 1 - 1e-8;
  const CompileResult r = compile_unitary(task, 1);
  CHECK(r.success);
  CHECK(r.achieved_fidelity >= 1 - 1e-8);
  CHECK(unitary_fidelity(cnot, circuit_unitary(task.circuit, r.params)) == doctest::Approx(r.achieved_fidelity));

  std::mt19937_64 rng(8);
  task.target = haar_unitary(4, rng);
  task.tolerance = 0.999;
  const CompileResult h = compile_unitary(task, 2);
  CHECK(h.success);
  // invariant under a global phase of the target
  task.target *= std::polar(1.0, 1.1);
  const CompileResult g = compile_unitary(task, 2);
  CHECK(g.achieved_fidelity == doctest::Approx(h.achieved_fidelity).epsilon(1e-9));

  CompilationTask bad;
  bad.target = 2.0 * CMatrix::Identity(4, 4);
  bad.circuit = two_qubit_template();
  CHECK_THROWS_AS(compile_unitary(bad, 0), ValidationError);
}

TEST_CASE("a compiled SSO unitary reproduces the SSO final state") {
  const LinearSystem s = assemble_system(build_1d_problem(8, 1.0));
  SsoConfig cfg;
  cfg.q = 100;
  cfg.exact_state = true;
  cfg.seed = 4;
  const SsoRun run = run_evolution(s, cfg);
  CompilationTask task;
  task.target = run.net_unitary;
  task.circuit = brickwork_template(3, 20);
  task.tolerance = 0.9967;
  const CompileResult r = compile_unitary(task, 9);
  REQUIRE(r.success);
  const CVector out = circuit_unitary(task.circuit, r.params) * s.rhs.cast<cplx>();
  CHECK(std::norm(out.dot(run.final_state.amplitudes())) >= 0.99);
}
