#include "qflow/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace qflow::kernels {

namespace {

// Below this many amplitudes the fork/join overhead dominates.
constexpr std::int64_t kParallelThreshold = 1 << 12;

/// Spread k so that a zero appears at bit position q.
inline std::size_t insert_zero(std::size_t k, int q) {
  const std::size_t low = k & ((std::size_t{1} << q) - 1);
  return ((k >> q) << (q + 1)) | low;
}

}  // namespace

void apply_1q(std::span<cplx> amps, int q, const Mat2& u) {
  const std::size_t mask = std::size_t{1} << q;
  const auto half = static_cast<std::int64_t>(amps.size() / 2);
  cplx* a = amps.data();
#pragma omp parallel for if (half > kParallelThreshold)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::size_t i = insert_zero(static_cast<std::size_t>(k), q);
    const cplx a0 = a[i];
    const cplx a1 = a[i | mask];
    a[i] = u[0] * a0 + u[1] * a1;
    a[i | mask] = u[2] * a0 + u[3] * a1;
  }
}

void apply_ry(std::span<double> amps, int q, double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const std::size_t mask = std::size_t{1} << q;
  const auto half = static_cast<std::int64_t>(amps.size() / 2);
  double* a = amps.data();
#pragma omp parallel for if (half > kParallelThreshold)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::size_t i = insert_zero(static_cast<std::size_t>(k), q);
    const double a0 = a[i];
    const double a1 = a[i | mask];
    a[i] = c * a0 - s * a1;
    a[i | mask] = s * a0 + c * a1;
  }
}

namespace {

template <typename T>
void cz_impl(std::span<T> amps, int a, int b) {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  const std::size_t both = (std::size_t{1} << a) | (std::size_t{1} << b);
  const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
  T* v = amps.data();
#pragma omp parallel for if (quarter > kParallelThreshold)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_zero(insert_zero(static_cast<std::size_t>(k), lo), hi) | both;
    v[i] = -v[i];
  }
}

}  // namespace

void apply_cz(std::span<double> amps, int a, int b) { cz_impl(amps, a, b); }
void apply_cz(std::span<cplx> amps, int a, int b) { cz_impl(amps, a, b); }

void apply_cnot(std::span<cplx> amps, int control, int target) {
  const int lo = std::min(control, target);
  const int hi = std::max(control, target);
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
  cplx* v = amps.data();
#pragma omp parallel for if (quarter > kParallelThreshold)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_zero(insert_zero(static_cast<std::size_t>(k), lo), hi) | cmask;
    std::swap(v[i], v[i | tmask]);
  }
}

void apply_matrix(std::span<cplx> amps, std::span<const int> targets, const CMatrix& u) {
  const std::size_t k = targets.size();
  const std::size_t sub_dim = std::size_t{1} << k;
  std::vector<int> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());

  // offsets[s] = basis offset of sub-index s (bit m of s -> qubit targets[m])
  std::vector<std::size_t> offsets(sub_dim, 0);
  for (std::size_t s = 0; s < sub_dim; ++s) {
    for (std::size_t m = 0; m < k; ++m) {
      if ((s >> m) & 1U) offsets[s] |= std::size_t{1} << targets[m];
    }
  }

  const auto blocks = static_cast<std::int64_t>(amps.size() >> k);
  cplx* v = amps.data();
#pragma omp parallel if (blocks > kParallelThreshold / 4)
  {
    std::vector<cplx> in(sub_dim);
#pragma omp for
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
      std::size_t base = static_cast<std::size_t>(blk);
      for (int q : sorted) base = insert_zero(base, q);
      for (std::size_t s = 0; s < sub_dim; ++s) in[s] = v[base | offsets[s]];
      for (std::size_t r = 0; r < sub_dim; ++r) {
        cplx acc{0.0, 0.0};
        for (std::size_t c = 0; c < sub_dim; ++c) {
          acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
        }
        v[base | offsets[r]] = acc;
      }
    }
  }
}

double ry_derivative_overlap(std::span<const double> bra, std::span<const double> ket, int q, double theta) {
  // dRy/dtheta = 1/2 [[-s, -c], [c, -s]] with c, s at theta/2
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const std::size_t mask = std::size_t{1} << q;
  const auto half = static_cast<std::int64_t>(ket.size() / 2);
  const double* l = bra.data();
  const double* k = ket.data();
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) if (half > kParallelThreshold)
  for (std::int64_t t = 0; t < half; ++t) {
    const std::size_t i = insert_zero(static_cast<std::size_t>(t), q);
    const std::size_t j = i | mask;
    acc += l[i] * (-s * k[i] - c * k[j]) + l[j] * (c * k[i] - s * k[j]);
  }
  return 0.5 * acc;
}

void dephase(CMatrix& rho, int q, double p) {
  // Entries whose row and column differ in bit q pick up (2p - 1); the rest are fixed.
  const double damp = 2.0 * p - 1.0;
  const auto d = static_cast<std::int64_t>(rho.rows());
#pragma omp parallel for if (d * d > kParallelThreshold)
  for (std::int64_t c = 0; c < d; ++c) {
    const std::size_t bc = (static_cast<std::size_t>(c) >> q) & 1U;
    for (std::int64_t r = 0; r < d; ++r) {
      if (((static_cast<std::size_t>(r) >> q) & 1U) != bc) rho(r, c) *= damp;
    }
  }
}

void depolarize(CMatrix& rho, double p) {
  const auto d = static_cast<std::int64_t>(rho.rows());
  const double shift = (1.0 - p) / static_cast<double>(d);
#pragma omp parallel for if (d * d > kParallelThreshold)
  for (std::int64_t c = 0; c < d; ++c) {
    for (std::int64_t r = 0; r < d; ++r) rho(r, c) *= p;
    rho(c, c) += shift;
  }
}

}  // namespace qflow::kernels
