#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qflow {

using cplx = std::complex<double>;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid or vector size is not representable on a whole number of qubits.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Requested fracture shape does not fit the grid.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented invariant (non-unitary gate, bad probability, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The fracture set cannot be separated by a single readout bit.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Numerical routine failed where the inputs guarantee it should not.
class InternalError : public Error {
 public:
  using Error::Error;
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// log2 of an exact power of two; throws SizeError otherwise.
inline int exact_log2(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw SizeError("size " + std::to_string(n) + " is not a power of two");
  }
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace qflow
