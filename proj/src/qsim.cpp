#include "qflow/qsim.hpp"

#include "qflow/kernels.hpp"

#include <cmath>
#include <random>
#include <set>

namespace qflow {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) throw SizeError("qubit count out of range");
  amps_ = CVector::Zero(Eigen::Index{1} << n_qubits);
  amps_(0) = 1.0;
}

StateVector StateVector::from_amplitudes(CVector amplitudes) {
  const int n = exact_log2(static_cast<std::size_t>(amplitudes.size()));
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw ValidationError("state is not normalized (|c|^2 sums to " + std::to_string(norm2) + ")");
  }
  amplitudes /= std::sqrt(norm2);
  return StateVector(std::move(amplitudes), n);
}

StateVector StateVector::from_real(const RVector& amplitudes) {
  return from_amplitudes(amplitudes.cast<cplx>());
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw DimensionError("basis index out of range");
  s.amps_(0) = 0.0;
  s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

int Gate::arity() const {
  switch (kind) {
    case Kind::CZ:
    case Kind::CNOT:
      return 2;
    case Kind::Unitary:
      return exact_log2(static_cast<std::size_t>(matrix.rows()));
    default:
      return 1;
  }
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

StateVector apply_gate(StateVector state, const Gate& gate, std::span<const int> targets) {
  if (gate.kind == Gate::Kind::Unitary) {
    if (gate.matrix.rows() != gate.matrix.cols() || !is_power_of_two(static_cast<std::size_t>(gate.matrix.rows()))) {
      throw ValidationError("custom gate matrix must be square with power-of-two size");
    }
    if (!is_unitary(gate.matrix)) throw ValidationError("custom gate matrix is not unitary");
  }
  if (static_cast<int>(targets.size()) != gate.arity()) throw ValidationError("wrong number of target qubits");
  std::set<int> seen;
  for (int t : targets) {
    if (t < 0 || t >= state.n_qubits()) throw ValidationError("target qubit out of range");
    if (!seen.insert(t).second) throw ValidationError("target qubits must be distinct");
  }

  std::span<cplx> amps(state.amps_.data(), state.dim());
  const int q = targets[0];
  switch (gate.kind) {
    case Gate::Kind::Ry: {
      const double c = std::cos(gate.angle / 2);
      const double s = std::sin(gate.angle / 2);
      kernels::apply_1q(amps, q, {cplx{c}, cplx{-s}, cplx{s}, cplx{c}});
      break;
    }
    case Gate::Kind::Rz: {
      const cplx e = std::polar(1.0, gate.angle / 2);
      kernels::apply_1q(amps, q, {std::conj(e), cplx{0}, cplx{0}, e});
      break;
    }
    case Gate::Kind::X:
      kernels::apply_1q(amps, q, {cplx{0}, cplx{1}, cplx{1}, cplx{0}});
      break;
    case Gate::Kind::Z:
      kernels::apply_1q(amps, q, {cplx{1}, cplx{0}, cplx{0}, cplx{-1}});
      break;
    case Gate::Kind::CZ:
      kernels::apply_cz(amps, targets[0], targets[1]);
      break;
    case Gate::Kind::CNOT:
      kernels::apply_cnot(amps, targets[0], targets[1]);
      break;
    case Gate::Kind::Unitary:
      kernels::apply_matrix(amps, targets, gate.matrix);
      break;
  }
  return state;
}

double expectation(const StateVector& state, const CMatrix& h) {
  if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != state.dim()) {
    throw DimensionError("observable dimension does not match the state");
  }
  const cplx value = state.amplitudes().dot(h * state.amplitudes());
  if (std::abs(value.imag()) > 1e-10) throw ValidationError("observable is not Hermitian");
  return value.real();
}

ShotCounts sample_shots(const RVector& probabilities, std::uint64_t n_shots, std::uint64_t seed) {
  if (n_shots == 0) throw ValidationError("n_shots must be positive");
  std::mt19937_64 rng(seed);
  ShotCounts out;
  out.counts.assign(static_cast<std::size_t>(probabilities.size()), 0);
  out.total = n_shots;

  // The last outcome with positive probability takes whatever is left, so
  // round-off in the running mass never lands shots on impossible outcomes.
  Eigen::Index last = probabilities.size() - 1;
  while (last > 0 && !(probabilities(last) > 0.0)) --last;

  std::uint64_t remaining = n_shots;
  double mass = probabilities.cwiseMax(0.0).sum();
  for (Eigen::Index i = 0; i <= last && remaining > 0; ++i) {
    const double p = std::max(0.0, probabilities(i));
    std::uint64_t k = remaining;
    if (i < last && mass > 0.0) {
      const double cond = std::clamp(p / mass, 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> draw(remaining, cond);
      k = draw(rng);
    }
    out.counts[static_cast<std::size_t>(i)] = k;
    remaining -= k;
    mass -= p;
  }
  return out;
}

ShotCounts sample_shots(const StateVector& state, std::uint64_t n_shots, std::uint64_t seed) {
  return sample_shots(state.probabilities(), n_shots, seed);
}

SolutionVector infer_solution(const ShotCounts& counts) {
  if (counts.total == 0) throw ValidationError("no shots recorded");
  RVector x(static_cast<Eigen::Index>(counts.counts.size()));
  const double total = static_cast<double>(counts.total);
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = std::sqrt(static_cast<double>(counts.counts[i]) / total);
  }
  return SolutionVector{x, 1.0, 1.0};
}

SolutionVector infer_solution(const RVector& probabilities) {
  RVector x = probabilities.cwiseMax(0.0).cwiseSqrt();
  x /= x.norm();
  return SolutionVector{x, 1.0, 1.0};
}

DensityOperator DensityOperator::from_matrix(CMatrix rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  const int n = exact_log2(static_cast<std::size_t>(rho.rows()));
  if (std::abs(rho.trace() - cplx{1.0}) > 1e-12) throw ValidationError("density matrix trace is not 1");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10) throw ValidationError("density matrix is not positive semidefinite");
  return DensityOperator(std::move(rho), n);
}

DensityOperator DensityOperator::maximally_mixed(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return DensityOperator(CMatrix::Identity(d, d) / static_cast<double>(d), n_qubits);
}

NoiseChannel::NoiseChannel(Kind k, double p_keep) : kind(k), p(p_keep) {
  if (!(p_keep >= 0.0 && p_keep <= 1.0)) throw ValidationError("noise probability must lie in [0, 1]");
}

DensityOperator apply_channel(const DensityOperator& rho, const NoiseChannel& channel, int layer_count) {
  if (channel.kind == NoiseChannel::Kind::TerminalDephasing) {
    std::vector<double> p(static_cast<std::size_t>(rho.n_qubits()), channel.p);
    return apply_dephasing(rho, p);
  }
  if (layer_count < 0) throw ValidationError("layer count must be nonnegative");
  CMatrix out = rho.rho_;
  kernels::depolarize(out, std::pow(channel.p, layer_count));
  return DensityOperator(std::move(out), rho.n_qubits_);
}

DensityOperator apply_dephasing(const DensityOperator& rho, std::span<const double> p_per_qubit) {
  if (static_cast<int>(p_per_qubit.size()) != rho.n_qubits()) throw DimensionError("need one p per qubit");
  CMatrix out = rho.rho_;
  for (int q = 0; q < rho.n_qubits(); ++q) {
    const double p = p_per_qubit[static_cast<std::size_t>(q)];
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("noise probability must lie in [0, 1]");
    kernels::dephase(out, q, p);
  }
  return DensityOperator(std::move(out), rho.n_qubits_);
}

DensityOperator evolve(const DensityOperator& rho, const CMatrix& u) {
  if (u.rows() != rho.rho_.rows()) throw DimensionError("unitary does not match the density operator");
  return DensityOperator(u * rho.rho_ * u.adjoint(), rho.n_qubits_);
}

DensityOperator state_to_density(const StateVector& state) {
  const CVector& a = state.amplitudes();
  return DensityOperator(a * a.adjoint(), state.n_qubits());
}

}  // namespace qflow
