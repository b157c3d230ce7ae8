#include "wka/tensor.hpp"

namespace wka {

Mat tensor_multiply(const StarAlgebra& a, const StarAlgebra& b, const Mat& t, const Mat& u) {
  const int na = a.dim(), nb = b.dim();
  if (t.rows() != na || t.cols() != nb || u.rows() != na || u.cols() != nb)
    throw StructureError("tensor_multiply: coefficient matrix has wrong shape");
  // (sum t_jk x_j (x) y_k)(sum u_pq x_p (x) y_q) = sum_{j,p} x_j x_p (x) (row_j t)(row_p u)
  Mat out = Mat::Zero(na, nb);
  Mat ut = u.transpose();
  for (int j = 0; j < na; ++j) {
    Element tj = t.row(j).transpose();
    if (tj.isZero(0.0))
      continue;
    Mat y = b.left_matrix(tj) * ut;  // column p: (row_j t)(row_p u)
    out.noalias() += a.left_basis(j) * y.transpose();
  }
  return out;
}

} // namespace wka
