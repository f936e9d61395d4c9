#include "qflow/compile.hpp"

#include "qflow/kernels.hpp"
#include "qflow/optimize.hpp"
#include "qflow/rng.hpp"

#include <cmath>
#include <numbers>
#include <span>

namespace qflow {

int CompileTemplate::cnot_count() const {
  int n = 0;
  for (const auto& s : slots) n += s.kind == CompileSlot::Kind::CNOT;
  return n;
}

int CompileTemplate::rotation_count() const { return static_cast<int>(slots.size()) - cnot_count(); }

namespace {

void add_rotation(CompileTemplate& t, int q) {
  t.slots.push_back({CompileSlot::Kind::Rotation, q, -1, t.parameter_count});
  t.parameter_count += 3;
}

void add_cnot(CompileTemplate& t, int control, int target) {
  t.slots.push_back({CompileSlot::Kind::CNOT, control, target, -1});
}

kernels::Mat2 rz(double a) {
  const cplx e = std::polar(1.0, a / 2);
  return {std::conj(e), cplx{0}, cplx{0}, e};
}

kernels::Mat2 ry(double a) {
  const double c = std::cos(a / 2);
  const double s = std::sin(a / 2);
  return {cplx{c}, cplx{-s}, cplx{s}, cplx{c}};
}

// Rz(a0) Ry(a1) Rz(a2) as one 2x2 matrix (Rz(a2) acts first).
Eigen::Matrix2cd rotation(const double* a) {
  const auto to_eigen = [](const kernels::Mat2& m) {
    Eigen::Matrix2cd out;
    out << m[0], m[1], m[2], m[3];
    return out;
  };
  return to_eigen(rz(a[0])) * to_eigen(ry(a[1])) * to_eigen(rz(a[2]));
}

// Full-space matrix of slot k.
CMatrix slot_matrix(const CompileTemplate& circuit, std::size_t k, const RVector& params) {
  const Eigen::Index d = Eigen::Index{1} << circuit.n_qubits;
  const CompileSlot& s = circuit.slots[k];
  CMatrix g = CMatrix::Zero(d, d);
  if (s.kind == CompileSlot::Kind::CNOT) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::Index j = (i >> s.qubit) & 1 ? i ^ (Eigen::Index{1} << s.target) : i;
      g(j, i) = 1.0;
    }
    return g;
  }
  const double a[3] = {params(s.param), params(s.param + 1), params(s.param + 2)};
  const Eigen::Matrix2cd r = rotation(a);
  const Eigen::Index bit = Eigen::Index{1} << s.qubit;
  for (Eigen::Index i = 0; i < d; ++i) {
    const int bi = (i & bit) ? 1 : 0;
    g(i, i) = r(bi, bi);
    g(i ^ bit, i) = r(1 - bi, bi);
  }
  return g;
}

// R(a, b) = sum over the other qubits of M(rest|a, rest|b), so that
// Tr(M (I x g x I)) = Tr(R g).
Eigen::Matrix2cd reduce_to_qubit(const CMatrix& m, int q) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i & bit) continue;
    r(0, 0) += m(i, i);
    r(0, 1) += m(i, i | bit);
    r(1, 0) += m(i | bit, i);
    r(1, 1) += m(i | bit, i | bit);
  }
  return r;
}

}  // namespace

CompileTemplate two_qubit_template() {
  CompileTemplate t;
  t.n_qubits = 2;
  t.description = "3-cnot universal skeleton: U0 U1 cx(1,0) U0 U1 cx(0,1) U1 cx(1,0) U0 U1";
  add_rotation(t, 0);
  add_rotation(t, 1);
  add_cnot(t, 1, 0);
  add_rotation(t, 0);
  add_rotation(t, 1);
  add_cnot(t, 0, 1);
  add_rotation(t, 1);
  add_cnot(t, 1, 0);
  add_rotation(t, 0);
  add_rotation(t, 1);
  return t;
}

CompileTemplate brickwork_template(int n_qubits, int n_cnots) {
  if (n_qubits < 2) throw ValidationError("brickwork needs at least two qubits");
  CompileTemplate t;
  t.n_qubits = n_qubits;
  t.description = "brickwork: rotation column, then " + std::to_string(n_cnots) +
                  " cnots over pairs (0,1),(1,2),... alternating direction, rotation on each target";
  for (int q = 0; q < n_qubits; ++q) add_rotation(t, q);
  const int pairs = n_qubits - 1;
  for (int k = 0; k < n_cnots; ++k) {
    const int lo = k % pairs;
    const bool flip = (k / pairs) % 2 == 1;
    const int control = flip ? lo + 1 : lo;
    const int target = flip ? lo : lo + 1;
    add_cnot(t, control, target);
    add_rotation(t, target);
  }
  return t;
}

CMatrix circuit_unitary(const CompileTemplate& circuit, const RVector& params) {
  if (params.size() != circuit.parameter_count) throw DimensionError("wrong number of compile parameters");
  const Eigen::Index d = Eigen::Index{1} << circuit.n_qubits;
  CMatrix u = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    std::span<cplx> col(u.col(c).data(), static_cast<std::size_t>(d));
    for (const auto& s : circuit.slots) {
      if (s.kind == CompileSlot::Kind::CNOT) {
        kernels::apply_cnot(col, s.qubit, s.target);
      } else {
        kernels::apply_1q(col, s.qubit, rz(params(s.param + 2)));
        kernels::apply_1q(col, s.qubit, ry(params(s.param + 1)));
        kernels::apply_1q(col, s.qubit, rz(params(s.param)));
      }
    }
  }
  return u;
}

double unitary_fidelity(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("unitaries have different dimensions");
  const double d = static_cast<double>(u.rows());
  return std::min(1.0, std::norm((u.adjoint() * v).trace()) / (d * d));
}

CompileResult compile_unitary(const CompilationTask& task, std::uint64_t seed) {
  const Eigen::Index d = Eigen::Index{1} << task.circuit.n_qubits;
  if (task.target.rows() != d || task.target.cols() != d) throw DimensionError("target does not match the template");
  if ((task.target.adjoint() * task.target - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("compile target is not unitary");
  }

  constexpr double h = 1e-6;
  const double d2 = static_cast<double>(d) * static_cast<double>(d);
  const CMatrix target_adj = task.target.adjoint();
  const Objective infidelity = [&](const RVector& x, RVector& grad) {
    grad.resize(x.size());
    // V = S_{k+1} G_k P_k for every slot k. Shifting one angle of slot k only
    // changes G_k, so each shifted trace is Tr(M_k G_k') with
    // M_k = P_k U^dagger S_{k+1}, reduced to the slot's qubit.
    const std::size_t k_total = task.circuit.slots.size();
    std::vector<CMatrix> prefix(k_total + 1);
    prefix[0] = CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < k_total; ++k) prefix[k + 1] = slot_matrix(task.circuit, k, x) * prefix[k];
    CMatrix suffix = CMatrix::Identity(d, d);
    for (std::size_t k = k_total; k-- > 0;) {
      const CompileSlot& s = task.circuit.slots[k];
      if (s.kind == CompileSlot::Kind::Rotation) {
        const CMatrix m = prefix[k] * target_adj * suffix;
        const Eigen::Matrix2cd reduced = reduce_to_qubit(m, s.qubit);
        for (int a = 0; a < 3; ++a) {
          double angles[3] = {x(s.param), x(s.param + 1), x(s.param + 2)};
          const double centre = angles[a];
          angles[a] = centre + h;
          const double up = std::norm((reduced * rotation(angles)).trace()) / d2;
          angles[a] = centre - h;
          const double down = std::norm((reduced * rotation(angles)).trace()) / d2;
          grad(s.param + a) = -(up - down) / (2.0 * h);
        }
      }
      suffix = suffix * slot_matrix(task.circuit, k, x);
    }
    return 1.0 - std::min(1.0, std::norm((target_adj * prefix[k_total]).trace()) / d2);
  };

  MinimizeOptions options;
  options.max_iterations = task.max_iterations;
  options.target_value = 1.0 - task.tolerance;

  CompileResult best;
  best.achieved_fidelity = -1.0;
  const SeedStream root(seed);
  for (int r = 0; r < task.restarts; ++r) {
    std::mt19937_64 rng = root.child("compile-restart", static_cast<std::uint64_t>(r)).engine();
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    RVector x0(task.circuit.parameter_count);
    for (auto& a : x0) a = angle(rng);

    const MinimizeResult res = minimize(infidelity, x0, options);
    const double f = unitary_fidelity(task.target, circuit_unitary(task.circuit, res.x));
    if (f > best.achieved_fidelity) {
      best.achieved_fidelity = f;
      best.params = res.x;
    }
    best.restarts_used = r + 1;
    if (best.achieved_fidelity >= task.tolerance) break;
  }
  best.success = best.achieved_fidelity >= task.tolerance;
  return best;
}

std::vector<CompiledGate> gate_list(const CompileTemplate& circuit, const RVector& params) {
  std::vector<CompiledGate> out;
  for (const auto& s : circuit.slots) {
    if (s.kind == CompileSlot::Kind::CNOT) {
      out.push_back({"cx", {s.qubit, s.target}, 0.0});
    } else {
      out.push_back({"rz", {s.qubit}, params(s.param + 2)});
      out.push_back({"ry", {s.qubit}, params(s.param + 1)});
      out.push_back({"rz", {s.qubit}, params(s.param)});
    }
  }
  return out;
}

CMatrix haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) z(r, c) = cplx{gauss(rng), gauss(rng)} / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  const CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  CMatrix out = q;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const cplx diag = r(i, i);
    out.col(i) *= diag / std::abs(diag);
  }
  return out;
}

}  // namespace qflow
