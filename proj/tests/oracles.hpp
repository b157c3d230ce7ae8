// Independent reference computations used by the tests.  Nothing here calls
// into the library's decomposition or solver code; algebras are modelled as
// explicit matrices and expected values come from closed forms.

#ifndef WKA_TESTS_ORACLES_HPP_
#define WKA_TESTS_ORACLES_HPP_

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Z_n: basis g^0..g^{n-1}
inline int cyclic_mult(int n, int a, int b) { return (a + b) % n; }

// Haar projection of C Z_n: (1/n) sum_g g
inline Vec cyclic_haar(int n) { return Vec::Constant(n, cplx(1.0 / n)); }

// Haar projection of the pair groupoid on n points: (1/n) sum_ij g_ij
inline Vec pair_groupoid_haar(int n) { return Vec::Constant(n * n, cplx(1.0 / n)); }

// Haar trace of the pair groupoid: tau(g_ii) = 1, tau(g_ij) = 0 otherwise
inline Eigen::RowVectorXcd pair_groupoid_trace(int n) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(n * n);
  for (int i = 0; i < n; ++i)
    t(i * n + i) = 1.0;
  return t;
}

// E_ij in M_n
inline Mat unit_matrix(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// M_n-element from coordinates in the E_ij basis (index i*n + j)
inline Mat as_matrix(const Vec& v, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = v(i * n + j);
  return m;
}

inline Vec as_coords(const Mat& m) {
  const int n = int(m.rows());
  Vec v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v(i * n + j) = m(i, j);
  return v;
}

// Weyl clock and shift matrices; {clock^a shift^b} is an orthonormal basis of
// M_n for the normalized trace
inline Mat clock(int n) {
  Mat c = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    c(k, k) = std::polar(1.0, 2.0 * M_PI * k / n);
  return c;
}

inline Mat shift(int n) {
  Mat s = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    s((k + 1) % n, k) = 1.0;
  return s;
}

// Spectral radius by a dense eigensolver
inline double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Characters of Z_n: chi_k(g^a) = exp(2 pi i k a / n)
inline cplx character(int n, int k, int a) { return std::polar(1.0, 2.0 * M_PI * k * a / n); }

} // namespace oracle

#endif // WKA_TESTS_ORACLES_HPP_
