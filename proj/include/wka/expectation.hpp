// Conditional expectations onto subalgebras, (quasi-)bases and the basic
// construction <B, e_A> realized as matrices over A.

#ifndef WKA_EXPECTATION_HPP_
#define WKA_EXPECTATION_HPP_

#include <optional>

#include "wka/star_algebra.hpp"

namespace wka {

/// E : B -> A where A = e.sub sits in B = e.amb.  `map` returns coordinates
/// in A, so e.emb * map is an idempotent on B.
struct ConditionalExpectation {
  SubalgebraEmbedding e;
  Mat map;  // dim(A) x dim(B)

  Element apply(const Element& x) const { return map * x; }
  /// E(x) as an element of B.
  Element apply_in_amb(const Element& x) const { return e.emb * (map * x); }
};

/// Orthogonal projection onto A with respect to <x, y> = tr(x* y).  Throws
/// VerificationError if tr is degenerate on A.
ConditionalExpectation trace_conditional_expectation(const SubalgebraEmbedding& e, const Functional& tr,
                                                     const Tolerance& tol);

/// Identity on A, bimodule property, *-preservation and, when tr is given,
/// tr o E = tr together with faithfulness of tr o E.
Report verify_conditional_expectation(const ConditionalExpectation& ce, const Tolerance& tol,
                                      const std::optional<Functional>& tr = std::nullopt);

struct QuasiBasisResult {
  Report report;
  Element index;       // sum u_i u_i^* in B
  bool central = false;
  bool is_basis = false;
  std::optional<double> scalar_index;  // set when the index is a multiple of 1
};

/// Checks b = sum_i u_i E(u_i^* b) on every basis vector of B, computes
/// Index E and decides whether the family is a basis (unique coefficients).
QuasiBasisResult verify_quasi_basis(const ConditionalExpectation& ce, const Mat& u, const Tolerance& tol);

/// <B, e_A> as k x k matrices over A, k = number of basis vectors u_i.  B
/// acts by b -> (E(u_i^* b u_j))_{ij} and e_A is the matrix (E(u_i)^* E(u_j)).
struct BasicConstruction {
  AlgebraPtr algebra;      // M_k(A), entry (i,j) with coordinate c at (i*k + j)*dim(A) + c
  SubalgebraEmbedding of_b;
  Element jones;
  int size = 0;
};

/// Requires {u_i} to be a basis for E (not merely a quasi-basis).
BasicConstruction basic_construction(const ConditionalExpectation& ce, const Mat& u, const Tolerance& tol);

/// e b e = E(b) e on the basis of B, injectivity of a -> a e, e = e* = e^2
/// and the spanning property span{x e y : x, y in B} = <B, e_A>.
Report verify_basic_construction(const BasicConstruction& bc, const ConditionalExpectation& ce,
                                 const Tolerance& tol);

} // namespace wka

#endif // WKA_EXPECTATION_HPP_
