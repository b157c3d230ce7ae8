// Weak Kac algebras: axioms, counital maps, Cartan subalgebras, Haar
// projection and trace, counital expectations, duality, decomposability and
// connectedness, plus the standard examples.

#ifndef WKA_WEAK_KAC_HPP_
#define WKA_WEAK_KAC_HPP_

#include <vector>

#include "wka/expectation.hpp"
#include "wka/star_algebra.hpp"
#include "wka/wedderburn.hpp"

namespace wka {

/// Comultiplication column i holds Delta(x_i) flattened row-major, i.e. the
/// coefficient of x_j (x) x_k sits in row j*n + k.  The antipode column i
/// holds S(x_i).
class WeakKacAlgebra {
public:
  WeakKacAlgebra(AlgebraPtr alg, Mat comult, Functional counit, Mat antipode);

  int dim() const { return alg_->dim(); }
  const StarAlgebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }
  const Mat& comult() const { return comult_; }
  const Functional& counit() const { return counit_; }
  const Mat& antipode() const { return antipode_; }

  /// Delta(x) as an n x n coefficient matrix.
  Mat delta(const Element& x) const;
  Element antipode(const Element& x) const { return antipode_ * x; }
  cplx counit(const Element& x) const { return (counit_ * x)(0); }

private:
  AlgebraPtr alg_;
  Mat comult_;
  Functional counit_;
  Mat antipode_;
};

/// Residual of every axiom.  Check names: coassociativity, counit_left,
/// counit_right, axiom_2, axiom_3, axiom_4, axiom_2p, axiom_3p, axiom_4p,
/// comult_multiplicative, comult_star, antipode_involutive,
/// antipode_antimultiplicative, antipode_anticomultiplicative,
/// antipode_star, counit_hermitian, counit_positive.
Report verify_wka(const WeakKacAlgebra& k, const Tolerance& tol);

struct CounitalData {
  Mat eps_s;  // column i = eps_s(x_i)
  Mat eps_t;
};

CounitalData counital_maps(const WeakKacAlgebra& k);
Report verify_counital_maps(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol);

struct CartanPair {
  SubalgebraEmbedding ks, kt;
  BlockDecomposition dec_s, dec_t;
  MatrixUnitSystem units_s, units_t;

  const std::vector<int>& m() const { return dec_s.block_dims; }
};

CartanPair cartan_subalgebras(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol);
Report verify_cartan(const WeakKacAlgebra& k, const CartanPair& cp, const Tolerance& tol);

/// Unique solution of p x = p eps_s(x), x p = eps_t(x) p, eps_s(p) = 1.
/// Throws VerificationError if the system has no solution or several.
Element haar_projection(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol);
Report verify_haar_projection(const WeakKacAlgebra& k, const CounitalData& c, const Element& p,
                              const Tolerance& tol);

/// Unique solution of (tau (x) id)Delta = (tau (x) eps_s)Delta,
/// (id (x) tau)Delta = (eps_t (x) tau)Delta and tau o eps_s = tau o eps_t = eps.
Functional haar_trace(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol);
Report verify_haar_trace(const WeakKacAlgebra& k, const Functional& tau, const Tolerance& tol);

struct CounitalExpectations {
  ConditionalExpectation es, et;  // onto K_s and K_t
  Mat es_full, et_full;           // the same maps as n x n matrices on K
};

/// E_s(x) = (tau (x) id)Delta(x) and E_t(x) = (id (x) tau)Delta(x).
CounitalExpectations counital_expectations(const WeakKacAlgebra& k, const CartanPair& cp,
                                           const Functional& tau);
Report verify_counital_expectations(const WeakKacAlgebra& k, const CartanPair& cp, const Functional& tau,
                                    const CounitalExpectations& ce, const Tolerance& tol);

/// Everything above, computed once.
struct WkaData {
  CounitalData counital;
  CartanPair cartan;
  Element haar;
  Functional tau;
  CounitalExpectations expectations;
};

WkaData analyze(const WeakKacAlgebra& k, const Tolerance& tol);

/// K* in the dual basis.
WeakKacAlgebra dual(const WeakKacAlgebra& k);
/// Structure tensors of dual(dual(k)) against k.
double double_dual_residual(const WeakKacAlgebra& k);

/// Delta(1) is a projection in K_s (x) K_t with mu(id (x) S)Delta(1) = 1 =
/// mu(S (x) id)Delta(1), plus the matrix-unit expressions of Delta(1) and
/// Delta(p_eps) (reported as soft checks).
Report verify_delta_unit(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

/// Orthonormal basis of K_s cap K_t cap Z(K).
Mat hypercenter(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);
bool is_decomposable(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);
/// Splits K along the minimal projections of the hypercenter.  Each summand
/// is re-verified.
std::vector<WeakKacAlgebra> decompose(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

struct Connectivity {
  bool connected = false;
  bool center_criterion = false;    // K_s cap Z(K) = C
  bool dual_criterion = false;      // K_s* cap K_t* = C
  bool minimality_criterion = false;  // p_eps K p_eps = C p_eps
  Report report;
};

/// Evaluates the three equivalent criteria and throws VerificationError if
/// they disagree.
Connectivity connectivity(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

struct Biconnectivity {
  Connectivity primal, dual;
  bool biconnected() const { return primal.connected && dual.connected; }
};

Biconnectivity biconnectivity(const WeakKacAlgebra& k, const Tolerance& tol);

/// True when Delta(1) = 1 (x) 1, i.e. K is an ordinary Kac algebra.
bool is_kac_algebra(const WeakKacAlgebra& k, const Tolerance& tol);

/// Multiplication table of a finite group: table(g, h) = index of gh.
IntMat cyclic_group_table(int order);
IntMat symmetric_group_table(int degree);
/// Throws StructureError unless the table is a group with identity at index 0.
void validate_group_table(const IntMat& table);

WeakKacAlgebra from_group(const IntMat& table);
WeakKacAlgebra from_dual_group(const IntMat& table);
/// Groupoid algebra of the pair groupoid on n points; g_ij at index i*n + j.
WeakKacAlgebra from_pair_groupoid(int n);
WeakKacAlgebra direct_sum(const WeakKacAlgebra& a, const WeakKacAlgebra& b);

} // namespace wka

#endif // WKA_WEAK_KAC_HPP_
