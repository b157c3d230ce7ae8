// Basic scalar, vector and configuration types shared by every module.

#ifndef WKA_TYPES_HPP_
#define WKA_TYPES_HPP_

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wka {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Element = Eigen::VectorXcd;      // coordinates of an algebra element
using Functional = Eigen::RowVectorXcd; // coordinates of a linear functional
using RealMat = Eigen::MatrixXd;
using IntMat = Eigen::MatrixXi;

/// Numerical tolerances and the seed for randomized routines.  Every
/// approximate comparison in the library goes through one of these.
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::uint64_t seed = 0x5eed'2001;

  /// Largest residual accepted for a quantity of magnitude `scale`.
  double bound(double scale = 1.0) const { return abs_tol + rel_tol * scale; }
  bool small(double residual, double scale = 1.0) const {
    return residual <= bound(scale);
  }
  /// Singular values below this are treated as zero.
  double rank_threshold(double largest_singular_value) const {
    return abs_tol + rel_tol * largest_singular_value;
  }
  /// Eigenvalues closer than this are considered equal.
  double cluster_gap() const { return 10.0 * abs_tol; }
};

/// Reads WKA_TOL from the environment if set; otherwise returns defaults.
Tolerance tolerance_from_env();

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent dimensions or malformed tensors.
class StructureError : public Error {
public:
  using Error::Error;
};

/// A randomized decomposition did not produce a clean split.
class DecompositionError : public Error {
public:
  using Error::Error;
};

/// A mathematical property that must hold failed numerically.
class VerificationError : public Error {
public:
  using Error::Error;
};

/// Deterministic generator.  Doubles are built from raw 64-bit draws so the
/// stream is identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  cplx complex() { return {symmetric(), symmetric()}; }
  std::size_t index(std::size_t n) { return std::size_t(engine_() % n); }

private:
  std::mt19937_64 engine_;
};

} // namespace wka

#endif // WKA_TYPES_HPP_
