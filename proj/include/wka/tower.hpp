// Finite stages of the tower K ⊂ K >< K* ⊂ K >< K* >< K ⊂ ... built from
// alternating dual actions, with the lower row K_s ⊂ K* ⊂ K* >< K ⊂ ..., the
// commuting squares between the rows, the left/right iterated products, the
// relative commutant lemma and the index arithmetic of biconnected algebras.

#ifndef WKA_TOWER_HPP_
#define WKA_TOWER_HPP_

#include <optional>
#include <vector>

#include "wka/crossed.hpp"

namespace wka {

/// One algebra of the upper row.  Stage 0 is K itself, sitting over K_t.
struct TowerStage {
  int index = 0;
  AlgebraPtr algebra;
  std::optional<CrossedProduct> cp;    // stage j >= 1 is stage j-1 >< G_j
  SubalgebraEmbedding below;           // previous stage (K_t at stage 0)
  ConditionalExpectation expectation;  // onto `below`
  Element jones;                       // e_j = i_G(p_G); empty at stage 0
  Functional trace;                    // tr_j, normalized by tr_j(1) = 1
  IntMat inclusion;                    // inclusion matrix of `below`
  // Maps between carrier coordinates and the tensor K (x) K* (x) K (x) ...
  // with one factor per stage.
  Mat to_full, from_full;
};

/// lower[0] = K_s inside K; lower[j] = L_{j-1} (K*, K* >< K, ...) inside stage j.
struct LowerStage {
  AlgebraPtr algebra;
  std::optional<CrossedProduct> cp;
  SubalgebraEmbedding into_upper;
  Mat to_full, from_full;  // against K* (x) K (x) ...
};

struct Tower {
  std::shared_ptr<const WeakKacAlgebra> k;
  std::shared_ptr<const WkaData> data;
  double lambda = 0.0;
  long long n = 0;  // lambda^{-1}
  int requested_depth = 0;
  bool partial = false;
  std::vector<TowerStage> upper;
  std::vector<LowerStage> lower;
  Report report;

  int depth() const { return int(upper.size()) - 1; }
  std::vector<int> dims() const;
};

constexpr int default_tower_cap = 256;

/// Builds stages 0..depth.  At every stage j >= 1 the report checks that
/// e_j is a projection, e x e = E(x) e on random x of the previous stage,
/// a -> a e is injective on the stage before, E_j(e_j) = lambda, the products
/// x e y span the stage, dim grows by lambda^{-1}, tr_j = tr_{j-1} o E_j is a
/// trace extending tr_{j-1} with tr_j(x e_j) = lambda tr_{j-1}(x), and the
/// inclusion matrix is the transpose of the previous one.  The commuting
/// square with the lower row is checked at every level.  A stage whose
/// dimension would exceed `cap` is not built; the tower is then partial and
/// carries a warning.  Throws VerificationError when K is not lambda-Markov.
Tower build_tower(const WeakKacAlgebra& k, int depth, const Tolerance& tol, int cap = default_tower_cap);

/// Commuting square of level j (1 <= j <= depth): E_j maps the lower row
/// into the lower row one step down, and the upper stage j-1 together with
/// the lower algebra span stage j.
Report commuting_square_report(const Tower& t, int level, const Tolerance& tol);

/// K_s ⊂ K, K* ⊂ K >< K*: E_K(i_{K*}(phi)) = i_K(E_t(phi) |> 1) in i_K(K_s) for
/// every dual basis element, plus the spanning (symmetry) condition.
Report commuting_square_check(const WeakKacAlgebra& k, const Tolerance& tol);

/// The identity map on coordinates of K (x) K* (x) ... between the left
/// products K >< K* >< ... and the right products K |>< K* |>< ... with 2r
/// factors.  Checks it is well defined on the quotients, bijective, unital,
/// multiplicative and *-preserving.  r = 2 is skipped with a warning when
/// over the cap.
Report left_right_iso_check(const WeakKacAlgebra& k, int r, const Tolerance& tol, int cap = default_tower_cap);

/// i_{K*}(K*)' ∩ i_{A><K}(A >< K) inside (A >< K) >< K* equals i_A(A).
/// Left actions only.
Report relative_commutant_checks(const ActionSpec& spec, const Tolerance& tol);

struct Fraction {
  long long num = 0, den = 1;
  bool integral() const { return den == 1; }
};

struct ArithmeticReport {
  long long lambda_inverse = 0;
  long long d = 0;  // dim K_s
  long long dim = 0;
  std::vector<int> m;           // block sizes of K_s
  std::vector<int> block_dims;  // block sizes of K
  std::vector<Fraction> first_kind;   // m_alpha^2 lambda^{-1} / d^2
  std::vector<Fraction> second_kind;  // (d_i / d)^2
  bool biconnected = false;
  bool first_kind_integral = false;
  bool d_divides_blocks = false;
  bool d2_divides_dim = false;
  bool d_divides_index = false;
  bool dim_is_d_times_index = false;
  bool prime_index = false;
  Report report;
};

/// Divisibility predictions for biconnected K, evaluated on integers after
/// integrality validation.  For biconnected K the flags are hard checks;
/// otherwise they are reported as soft flags.
ArithmeticReport arithmetic_report(const WeakKacAlgebra& k, const Tolerance& tol);

Json to_json(const ArithmeticReport& a);

} // namespace wka

#endif // WKA_TOWER_HPP_
