#include "qflow/ansatz.hpp"

#include "qflow/kernels.hpp"

#include <cmath>
#include <numbers>
#include <span>

namespace qflow {

namespace {

void append_ry_column(CircuitTemplate& c, int& next_param) {
  for (int q = 0; q < c.n_qubits; ++q) {
    c.gates.push_back({AnsatzGate::Kind::Ry, q, -1, next_param++});
  }
}

void append_cz_column(CircuitTemplate& c, int first) {
  for (int q = first; q + 1 < c.n_qubits; q += 2) {
    c.gates.push_back({AnsatzGate::Kind::CZ, q, q + 1, -1});
  }
  ++c.cz_columns;
}

void check_params(const CircuitTemplate& c, const Params& params) {
  if (static_cast<std::size_t>(params.size()) != c.parameter_count()) {
    throw DimensionError("expected " + std::to_string(c.parameter_count()) + " parameters, got " +
                         std::to_string(params.size()));
  }
}

void apply(const AnsatzGate& g, std::span<double> amps, const Params& params) {
  if (g.kind == AnsatzGate::Kind::Ry) {
    kernels::apply_ry(amps, g.qubit, params(g.param));
  } else {
    kernels::apply_cz(amps, g.qubit, g.partner);
  }
}

}  // namespace

CircuitTemplate build_template(int n_qubits, int n_layers) {
  if (n_qubits < 2) throw ValidationError("ansatz needs at least two qubits");
  if (n_layers < 1) throw ValidationError("ansatz needs at least one layer");
  CircuitTemplate c;
  c.n_qubits = n_qubits;
  c.n_layers = n_layers;
  int next = 0;
  append_ry_column(c, next);
  for (int l = 0; l < n_layers; ++l) {
    append_cz_column(c, 0);
    append_ry_column(c, next);
    append_cz_column(c, 1);
    append_ry_column(c, next);
  }
  return c;
}

RVector evaluate_real(const CircuitTemplate& circuit, const Params& params) {
  check_params(circuit, params);
  RVector psi = RVector::Zero(static_cast<Eigen::Index>(circuit.dim()));
  psi(0) = 1.0;
  std::span<double> amps(psi.data(), circuit.dim());
  for (const auto& g : circuit.gates) apply(g, amps, params);
  return psi;
}

StateVector evaluate(const CircuitTemplate& circuit, const Params& params) {
  return StateVector::from_real(evaluate_real(circuit, params));
}

Params wrap_angles(const Params& params) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Params out = params;
  for (auto& a : out) {
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
  }
  return out;
}

double expectation_cost(const Observable& m, const CircuitTemplate& circuit, const Params& params) {
  const RVector psi = evaluate_real(circuit, params);
  return psi.dot(m(psi));
}

RVector gradient(const Observable& m, const CircuitTemplate& circuit, const Params& params) {
  check_params(circuit, params);
  const auto d = static_cast<Eigen::Index>(circuit.parameter_count());
  RVector grad(d);
  constexpr double shift = std::numbers::pi / 2;
#pragma omp parallel for
  for (Eigen::Index j = 0; j < d; ++j) {
    Params plus = params;
    Params minus = params;
    plus(j) += shift;
    minus(j) -= shift;
    grad(j) = 0.5 * (expectation_cost(m, circuit, plus) - expectation_cost(m, circuit, minus));
  }
  return grad;
}

double adjoint_gradient(const Observable& m, const CircuitTemplate& circuit, const Params& params, RVector& grad) {
  RVector psi = evaluate_real(circuit, params);
  RVector lambda = m(psi);
  const double cost = psi.dot(lambda);

  grad = RVector::Zero(static_cast<Eigen::Index>(circuit.parameter_count()));
  std::span<double> ket(psi.data(), circuit.dim());
  std::span<double> bra(lambda.data(), circuit.dim());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    const AnsatzGate& g = *it;
    if (g.kind == AnsatzGate::Kind::Ry) {
      const double theta = params(g.param);
      kernels::apply_ry(ket, g.qubit, -theta);  // state before this gate
      grad(g.param) = 2.0 * kernels::ry_derivative_overlap(bra, ket, g.qubit, theta);
      kernels::apply_ry(bra, g.qubit, -theta);
    } else {
      kernels::apply_cz(ket, g.qubit, g.partner);
      kernels::apply_cz(bra, g.qubit, g.partner);
    }
  }
  return cost;
}

}  // namespace qflow
