#include "wka/linalg.hpp"

#include <cmath>
#include <cstdlib>

namespace wka {

Tolerance tolerance_from_env() {
  Tolerance tol;
  if (const char* env = std::getenv("WKA_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0 && std::isfinite(v)) {
      tol.abs_tol = v;
      tol.rel_tol = v;
    }
  }
  return tol;
}

double max_abs(const Mat& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

namespace {

Eigen::BDCSVD<Mat> full_svd(const Mat& m) {
  return Eigen::BDCSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from_singular_values(const Eigen::VectorXd& s, const Tolerance& tol) {
  if (s.size() == 0)
    return 0;
  double cut = tol.rank_threshold(s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut)
      ++r;
  return r;
}

} // namespace

int numerical_rank(const Mat& m, const Tolerance& tol) {
  if (m.size() == 0)
    return 0;
  Eigen::BDCSVD<Mat> svd(m);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Mat null_space(const Mat& m, const Tolerance& tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0)
    return Mat::Identity(n, n);
  auto svd = full_svd(m);
  int r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - r);
}

Mat range_basis(const Mat& m, const Tolerance& tol) {
  if (m.cols() == 0)
    return Mat(m.rows(), 0);
  auto svd = full_svd(m);
  int r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

std::vector<int> independent_columns(const Mat& m, const Mat& fixed, const Tolerance& tol) {
  std::vector<int> chosen;
  const double scale = std::max(1.0, max_abs(m));
  Mat q(m.rows(), fixed.cols() + m.cols());
  Eigen::Index k = fixed.cols();
  q.leftCols(k) = fixed;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Element v = m.col(j);
    // two passes of classical Gram-Schmidt keep the projection accurate
    for (int pass = 0; pass < 2; ++pass)
      if (k > 0)
        v -= q.leftCols(k) * (q.leftCols(k).adjoint() * v);
    double nv = v.norm();
    if (nv > 1e3 * tol.rank_threshold(scale)) {
      q.col(k++) = v / nv;
      chosen.push_back(int(j));
    }
  }
  return chosen;
}

std::vector<int> independent_columns(const Mat& m, const Tolerance& tol) {
  return independent_columns(m, Mat(m.rows(), 0), tol);
}

Mat intersect(const Mat& u, const Mat& v, const Tolerance& tol) {
  if (u.cols() == 0 || v.cols() == 0)
    return Mat(u.rows(), 0);
  Mat qu = range_basis(u, tol);
  Mat qv = range_basis(v, tol);
  Mat stacked(qu.rows(), qu.cols() + qv.cols());
  stacked << qu, -qv;
  Mat ns = null_space(stacked, tol);
  if (ns.cols() == 0)
    return Mat(u.rows(), 0);
  return range_basis(qu * ns.topRows(qu.cols()), tol);
}

double distance_from_span(const Mat& orthonormal_u, const Mat& v) {
  Mat r = v - orthonormal_u * (orthonormal_u.adjoint() * v);
  return max_abs(r);
}

Element solve_least_squares(const Mat& a, const Element& b, double* residual) {
  Element x = a.completeOrthogonalDecomposition().solve(b);
  if (residual)
    *residual = max_abs(Element(a * x - b));
  return x;
}

Mat solve_least_squares(const Mat& a, const Mat& b, double* residual) {
  Mat x = a.completeOrthogonalDecomposition().solve(b);
  if (residual)
    *residual = max_abs(Mat(a * x - b));
  return x;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Element kron(const Element& a, const Element& b) {
  Element out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Mat unflatten(const Element& v, int rows, int cols) {
  if (v.size() != Eigen::Index(rows) * cols)
    throw StructureError("unflatten: size mismatch");
  Mat t(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      t(i, j) = v(Eigen::Index(i) * cols + j);
  return t;
}

Element flatten(const Mat& t) {
  Element v(t.size());
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      v(i * t.cols() + j) = t(i, j);
  return v;
}

bool is_integral(double value, const Tolerance& tol) {
  return std::abs(value - std::round(value)) < tol.bound(std::abs(value));
}

long long checked_round(double value, const Tolerance& tol, const std::string& what) {
  if (!std::isfinite(value) || !is_integral(value, tol))
    throw VerificationError(what + ": value " + std::to_string(value) + " is not integral");
  return std::llround(value);
}

double min_hermitian_eigenvalue(const Mat& m) {
  if (m.size() == 0)
    return 0.0;
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace wka
