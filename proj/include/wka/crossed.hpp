// Actions of weak Kac algebras on finite-dimensional *-algebras, crossed
// products A >< K realized as quotients of A (x) K, the conditional
// expectation E_A, the duality (A >< K) >< K* = A (x) M_n and the two-sided
// crossed product A >< H >< A.

#ifndef WKA_CROSSED_HPP_
#define WKA_CROSSED_HPP_

#include <memory>

#include "wka/markov.hpp"

namespace wka {

enum class Side { left, right };

const char* side_name(Side s);

/// act has shape dim(A) x (dim(K) * dim(A)); column h*dim(A) + a holds
/// x_h |> a_a (left) or a_a <| x_h (right).
struct ActionSpec {
  std::shared_ptr<const WeakKacAlgebra> k;
  std::shared_ptr<const WkaData> data;  // analyze(*k)
  AlgebraPtr a;
  Side side = Side::left;
  Mat act;

  int dim_k() const { return k->dim(); }
  int dim_a() const { return a->dim(); }
  /// The operator a -> h |> a (or a <| h) as a dim(A) x dim(A) matrix.
  Mat op(const Element& h) const;
  Mat op(int h) const { return act.middleCols(Eigen::Index(h) * dim_a(), dim_a()); }
  Element apply(const Element& h, const Element& x) const { return op(h) * x; }
};

/// Wraps explicit data, computing analyze(k).
ActionSpec make_action(WeakKacAlgebra k, AlgebraPtr a, Side side, Mat act, const Tolerance& tol);

/// Module law, multiplicativity, *-compatibility, the unit condition and
/// injectivity of z -> z |> 1 on K_t (1 <| z on K_s for right actions).
Report validate_action(const ActionSpec& spec, const Tolerance& tol);

/// h |> a = eps_t(h a) on K_t, or a <| h = eps_s(a h) on K_s.
ActionSpec trivial_action(const WeakKacAlgebra& k, Side side, const Tolerance& tol);
/// phi |> h = h_(1) <phi, h_(2)>, or h <| phi = <phi, h_(1)> h_(2); K* acts on K.
ActionSpec dual_action(const WeakKacAlgebra& k, Side side, const Tolerance& tol);

/// The quotient A (x)_{K_t} K (left) or K (x)_{K_s} A (right).  Tensor
/// coordinates: a*dim(K) + h for a (x) h, h*dim(A) + a for h (x) a.
struct CrossedProduct {
  ActionSpec spec;
  AlgebraPtr algebra;
  Mat relations;   // orthonormal basis of the subspace W that is divided out
  Mat section;     // columns: representatives of the carrier basis
  Mat projection;  // quotient map, projection * section = I
  SubalgebraEmbedding i_a, i_k;

  int dim() const { return algebra->dim(); }
  int tensor_dim() const { return spec.dim_a() * spec.dim_k(); }
  int tensor_index(int a, int h) const {
    return spec.side == Side::left ? a * spec.dim_k() + h : h * spec.dim_a() + a;
  }
  /// Class of a (x) h (left) or h (x) a (right).
  Element cls(const Element& a, const Element& h) const;
  /// Product of two tensors of A (x) K before passing to the quotient.
  Element tensor_multiply(const Element& u, const Element& v) const;
  Element tensor_star(const Element& u) const;
};

/// Throws VerificationError when the multiplication does not pass to the
/// quotient.
CrossedProduct crossed_product(const ActionSpec& spec, const Tolerance& tol);

/// Carrier axioms, well-definedness on random representatives, i_A and i_K
/// injective *-homomorphisms generating the carrier.
Report verify_crossed_product(const CrossedProduct& cp, const Tolerance& tol, int samples = 100);

/// Dual action of K* on A >< K: phi |> [a (x) h] = [a (x) (phi |> h)] (right:
/// [h (x) a] <| phi = [(h <| phi) (x) a]).
ActionSpec dual_action_on_crossed(const CrossedProduct& cp, const Tolerance& tol);

/// K_t >< K = K via [a (x) h] -> a h, and K >< K_s = K via [h (x) a] -> h a.
Report trivial_crossed_isomorphism(const WeakKacAlgebra& k, Side side, const Tolerance& tol);

/// E_A([a (x) h]) = a (E_t(h) |> 1), right: E_A([h (x) a]) = (1 <| E_s(h)) a.
ConditionalExpectation crossed_expectation(const CrossedProduct& cp, const Tolerance& tol);

struct CrossedBasis {
  Mat u;  // [1 (x) y_nu] in carrier coordinates
  QuasiBasisResult result;
};

/// The basis [1 (x) y_nu] built from an E_t-basis of K (left products only).
CrossedBasis crossed_basis(const CrossedProduct& cp, const ConditionalExpectation& ea, const Tolerance& tol);

struct Duality {
  CrossedProduct cp;   // A >< K
  CrossedProduct cp2;  // (A >< K) >< K*
  Element jones;       // e_A = i_{K*}(tau) in cp2
  Mat rho;             // cp2 -> M_n(A), entry (i,j) coordinate c at (i*n + j)*dim(A) + c
  AlgebraPtr matrices;  // M_n(A)
  int n = 0;
  Report report;
};

/// Builds both crossed products, checks e x e = E_A(x) e, injectivity of
/// a -> a e, E(e_A) = lambda, the spanning property, and the representation
/// rho(x)_ij = E_A(u_i^* (x . u_j)).  Check names carry the lemma they test.
Duality duality_isomorphism(const ActionSpec& spec, const Tolerance& tol);

/// Nill's construction.  p is an element of A (x) A (dim A x dim A matrix).
struct TwoSidedInput {
  std::shared_ptr<const WeakKacAlgebra> h;
  AlgebraPtr a;
  ActionSpec left, right;
  Mat s_a;  // linear *-anti-automorphism of A
  Mat p;
};

Report verify_two_sided_input(const TwoSidedInput& in, const Tolerance& tol);

struct TwoSided {
  std::shared_ptr<const WeakKacAlgebra> k;  // coordinates (b*dim H + h)*dim A + a
  Report report;
  int fixed_left = 0;   // dim A^H
  int fixed_right = 0;  // dim ^H A
};

/// Throws VerificationError naming the violated precondition or the worst axiom.
TwoSided two_sided_crossed_product(const TwoSidedInput& in, const Tolerance& tol);

/// sum_{alpha,r,s} (1/m_alpha) f_rs (x) S_A(f_sr) for a system of matrix units of A.
Mat separability_projection(const StarAlgebra& a, const Mat& s_a, const Tolerance& tol);

/// A Kac subalgebra of H* (columns of `basis` in the dual basis of H*) with the
/// induced actions and P = Delta(p_A).
TwoSidedInput kac_subalgebra_example(const WeakKacAlgebra& h, const Mat& basis, const Tolerance& tol);

/// H trivial (C) acting on A with P built from matrix units.
TwoSidedInput trivial_two_sided_input(AlgebraPtr a, const Mat& s_a, const Tolerance& tol);

/// For a right crossed product: i_K(K_t) commutes with i_A(A), and the
/// dimension of A' cap K >< A against dim K_t.
Report centralizer_check(const CrossedProduct& cp, const Tolerance& tol);

/// Transpose on M_k in the E_ij basis.
Mat transpose_map(int k);

} // namespace wka

#endif // WKA_CROSSED_HPP_
