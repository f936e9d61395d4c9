#include "qflow/kernels.hpp"

#include <cmath>
#include <vector>

namespace qflow::kernels::reference {

namespace {

bool bit(std::size_t i, int q) { return ((i >> q) & 1U) != 0; }

}  // namespace

void apply_1q(std::span<cplx> amps, int q, const Mat2& u) {
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (bit(i, q)) continue;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | mask];
    amps[i] = u[0] * a0 + u[1] * a1;
    amps[i | mask] = u[2] * a0 + u[3] * a1;
  }
}

void apply_ry(std::span<double> amps, int q, double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (bit(i, q)) continue;
    const double a0 = amps[i];
    const double a1 = amps[i | mask];
    amps[i] = c * a0 - s * a1;
    amps[i | mask] = s * a0 + c * a1;
  }
}

void apply_cz(std::span<double> amps, int a, int b) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (bit(i, a) && bit(i, b)) amps[i] = -amps[i];
  }
}

void apply_cz(std::span<cplx> amps, int a, int b) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (bit(i, a) && bit(i, b)) amps[i] = -amps[i];
  }
}

void apply_cnot(std::span<cplx> amps, int control, int target) {
  const std::size_t mask = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (bit(i, control) && !bit(i, target)) std::swap(amps[i], amps[i | mask]);
  }
}

void apply_matrix(std::span<cplx> amps, std::span<const int> targets, const CMatrix& u) {
  // Full-index formulation: out[i] = sum_j u(sub(i), sub(j)) in[j] over j that
  // agree with i outside the target bits.
  const std::size_t k = targets.size();
  std::size_t target_mask = 0;
  for (int t : targets) target_mask |= std::size_t{1} << t;
  auto sub = [&](std::size_t i) {
    std::size_t s = 0;
    for (std::size_t m = 0; m < k; ++m) s |= (bit(i, targets[m]) ? std::size_t{1} : 0) << m;
    return s;
  };
  std::vector<cplx> out(amps.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < amps.size(); ++i) {
    for (std::size_t j = 0; j < amps.size(); ++j) {
      if ((i & ~target_mask) != (j & ~target_mask)) continue;
      out[i] += u(static_cast<Eigen::Index>(sub(i)), static_cast<Eigen::Index>(sub(j))) * amps[j];
    }
  }
  std::copy(out.begin(), out.end(), amps.begin());
}

double ry_derivative_overlap(std::span<const double> bra, std::span<const double> ket, int q, double theta) {
  // dRy/dtheta = Ry(theta + pi) / 2
  std::vector<double> moved(ket.begin(), ket.end());
  apply_ry(moved, q, theta + M_PI);
  double acc = 0.0;
  for (std::size_t i = 0; i < moved.size(); ++i) acc += bra[i] * moved[i];
  return 0.5 * acc;
}

void dephase(CMatrix& rho, int q, double p) {
  // Explicit Kraus sum with {sqrt(p) I, sqrt(1-p) Z}.
  const auto d = rho.rows();
  CMatrix z = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) z(i, i) = bit(static_cast<std::size_t>(i), q) ? -1.0 : 1.0;
  rho = p * rho + (1.0 - p) * (z * rho * z);
}

void depolarize(CMatrix& rho, double p) {
  const auto d = rho.rows();
  rho = p * rho + (1.0 - p) / static_cast<double>(d) * CMatrix::Identity(d, d);
}

}  // namespace qflow::kernels::reference
