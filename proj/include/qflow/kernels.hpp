#pragma once

// Statevector and density-matrix kernels.
//
// Qubit q addresses bit q of the basis index (little-endian). The functions in
// `qflow::kernels` are the OpenMP versions the library calls; the ones in
// `qflow::kernels::reference` are plain serial loops with the same contracts,
// kept as the test oracle and the benchmark baseline.

#include "qflow/common.hpp"

#include <array>
#include <span>

namespace qflow::kernels {

/// Row-major 2x2 matrix {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

void apply_1q(std::span<cplx> amps, int q, const Mat2& u);
void apply_ry(std::span<double> amps, int q, double theta);
void apply_cz(std::span<double> amps, int a, int b);
void apply_cz(std::span<cplx> amps, int a, int b);
void apply_cnot(std::span<cplx> amps, int control, int target);
/// Dense k-qubit gate; targets[0] is the least significant bit of u's index.
void apply_matrix(std::span<cplx> amps, std::span<const int> targets, const CMatrix& u);

/// <bra| dRy(theta)/dtheta on qubit q |ket>
double ry_derivative_overlap(std::span<const double> bra, std::span<const double> ket, int q, double theta);

/// rho <- p rho + (1-p) Z_q rho Z_q
void dephase(CMatrix& rho, int q, double p);
/// rho <- p rho + (1-p) I / d
void depolarize(CMatrix& rho, double p);

namespace reference {

void apply_1q(std::span<cplx> amps, int q, const Mat2& u);
void apply_ry(std::span<double> amps, int q, double theta);
void apply_cz(std::span<double> amps, int a, int b);
void apply_cz(std::span<cplx> amps, int a, int b);
void apply_cnot(std::span<cplx> amps, int control, int target);
void apply_matrix(std::span<cplx> amps, std::span<const int> targets, const CMatrix& u);
double ry_derivative_overlap(std::span<const double> bra, std::span<const double> ket, int q, double theta);
void dephase(CMatrix& rho, int q, double p);
void depolarize(CMatrix& rho, double p);

}  // namespace reference

}  // namespace qflow::kernels
