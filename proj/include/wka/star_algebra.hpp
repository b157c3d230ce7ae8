// Finite-dimensional *-algebras over C given by structure constants.

#ifndef WKA_STAR_ALGEBRA_HPP_
#define WKA_STAR_ALGEBRA_HPP_

#include <memory>
#include <optional>

#include "wka/report.hpp"
#include "wka/types.hpp"

namespace wka {

/// Associative *-algebra with basis x_0..x_{n-1}.
///
/// The multiplication is stored as an n x n^2 matrix whose column i*n+j holds
/// the coordinates of x_i x_j, so m[i][j][k] = structure()(k, i*n+j).  The
/// involution is antilinear: (sum c_i x_i)* = sum conj(c_i) x_i*, where the
/// coordinates of x_i* form column i of involution().
class StarAlgebra {
public:
  StarAlgebra(Mat structure, Element unit, Mat involution);

  int dim() const { return dim_; }
  const Mat& structure() const { return structure_; }
  const Element& unit() const { return unit_; }
  const Mat& involution() const { return involution_; }

  cplx constant(int i, int j, int k) const { return structure_(k, Eigen::Index(i) * dim_ + j); }

  /// Left multiplication by x_i as an n x n matrix.
  auto left_basis(int i) const { return structure_.middleCols(Eigen::Index(i) * dim_, dim_); }

  Element basis(int i) const { return Element::Unit(dim_, i); }
  Element zero() const { return Element::Zero(dim_); }

  Element multiply(const Element& x, const Element& y) const;
  Element star(const Element& x) const { return involution_ * x.conjugate(); }
  /// Matrix of y -> x y.
  Mat left_matrix(const Element& x) const;
  /// Matrix of x -> x y.
  Mat right_matrix(const Element& y) const;
  /// Matrix of x -> [s, x] = s x - x s.
  Mat commutator_matrix(const Element& s) const { return left_matrix(s) - right_matrix(s); }

  /// Matrix Q with Q(i,j) = f(x_i x_j).
  Mat bilinear_form(const Functional& f) const;

  bool same_structure(const StarAlgebra& other, double bound) const;

private:
  int dim_;
  Mat structure_;
  Element unit_;
  Mat involution_;
};

using AlgebraPtr = std::shared_ptr<const StarAlgebra>;

inline AlgebraPtr share(StarAlgebra a) { return std::make_shared<const StarAlgebra>(std::move(a)); }

/// Associativity, unit, involution laws and the positivity of the trace form
/// <x,y> = Tr(L_{x* y}).  A non-positive trace form is recorded as a soft
/// failure ("c_star"): the object remains a usable *-algebra.
Report verify_star_algebra(const StarAlgebra& a, const Tolerance& tol);

/// Trace of the left regular representation, Tr(x) = trace(L_x).
Functional regular_trace(const StarAlgebra& a);

/// Orthonormal basis (columns) of {x in A : x s = s x for every column s}.
Mat commutant(const StarAlgebra& a, const Mat& elements, const Tolerance& tol);
Mat center(const StarAlgebra& a, const Tolerance& tol);

bool is_commutative(const StarAlgebra& a, const Tolerance& tol);

StarAlgebra tensor_product(const StarAlgebra& a, const StarAlgebra& b);
/// M_k(C) with basis E_ij at index i*k + j.
StarAlgebra matrix_algebra(int k);
StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b);

/// A unital *-subalgebra given by an injective map of coordinates.
struct SubalgebraEmbedding {
  AlgebraPtr sub;
  AlgebraPtr amb;
  Mat emb;     // dim(amb) x dim(sub)
  Mat coords;  // left inverse of emb, dim(sub) x dim(amb)

  Element embed(const Element& a) const { return emb * a; }
  Element restrict(const Element& x) const { return coords * x; }
  /// max distance of the columns of xs from the image of emb
  double distance(const Mat& xs) const;
};

/// Builds the subalgebra spanned by the columns of `spanning`.  The basis is
/// the greedy independent subset of the columns, so coordinates are
/// reproducible.  `unit` defaults to the unit of `amb`; passing a different
/// projection yields a corner algebra qAq.  Throws VerificationError when the
/// span is not closed under multiplication or *.
SubalgebraEmbedding make_subalgebra(AlgebraPtr amb, const Mat& spanning, const Tolerance& tol,
                                    std::optional<Element> unit = std::nullopt);

/// Embedding given explicitly (e.g. a constructed *-homomorphism).
SubalgebraEmbedding make_embedding(AlgebraPtr sub, AlgebraPtr amb, Mat emb);

/// Injectivity, unitality, multiplicativity and *-compatibility of emb.
Report verify_embedding(const SubalgebraEmbedding& e, const Tolerance& tol);

/// Residuals of h(xy) = h(x)h(y) and h(x*) = h(x)* over all basis pairs of a.
double homomorphism_residual(const StarAlgebra& a, const StarAlgebra& b, const Mat& h);
double star_residual(const StarAlgebra& a, const StarAlgebra& b, const Mat& h);

} // namespace wka

#endif // WKA_STAR_ALGEBRA_HPP_
