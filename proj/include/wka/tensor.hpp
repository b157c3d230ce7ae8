// Elements of A (x) B stored as dim(A) x dim(B) coefficient matrices:
// T(j,k) is the coefficient of x_j (x) y_k.

#ifndef WKA_TENSOR_HPP_
#define WKA_TENSOR_HPP_

#include "wka/star_algebra.hpp"

namespace wka {

/// Product in the algebra A (x) B.
Mat tensor_multiply(const StarAlgebra& a, const StarAlgebra& b, const Mat& t, const Mat& u);

/// Involution of A (x) B.
inline Mat tensor_star(const StarAlgebra& a, const StarAlgebra& b, const Mat& t) {
  return a.involution() * t.conjugate() * b.involution().transpose();
}

/// Multiplication map A (x) A -> A.
inline Element tensor_contract(const StarAlgebra& a, const Mat& t) {
  Element out = Element::Zero(a.dim());
  for (int j = 0; j < a.dim(); ++j)
    for (int k = 0; k < a.dim(); ++k)
      if (t(j, k) != cplx(0))
        out += t(j, k) * a.left_basis(j).col(k);
  return out;
}

/// x (x) y as a coefficient matrix.
inline Mat outer(const Element& x, const Element& y) { return x * y.transpose(); }

} // namespace wka

#endif // WKA_TENSOR_HPP_
