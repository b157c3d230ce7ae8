// The lambda-Markov condition and its equivalent forms: the trace identity,
// the Perron-Frobenius equation for the inclusion matrix of K_s in K and the
// existence of bases for the counital expectations.

#ifndef WKA_MARKOV_HPP_
#define WKA_MARKOV_HPP_

#include <optional>
#include <vector>

#include "wka/weak_kac.hpp"

namespace wka {

struct MarkovLambda {
  Element value;                 // E_s(p_eps) in K
  bool scalar = false;
  double lambda = 0.0;           // set when scalar
  std::vector<double> spectrum;  // distinct values of E_s(p_eps) on the blocks of K
  double source_target_residual = 0.0;  // |E_s(p_eps) - E_t(p_eps)|
};

MarkovLambda markov_lambda(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

/// Inclusion matrix of K_s in K together with the decomposition of K.
struct InclusionData {
  IntMat lambda;          // L x N
  std::vector<int> m;     // block sizes of K_s
  std::vector<int> d;     // block sizes of K
  BlockDecomposition dec;
  MatrixUnitSystem units;
};

InclusionData source_inclusion(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

struct MarkovReport {
  Report report;
  double lambda = 0.0;
  long long n = 0;
  InclusionData inclusion;
  // lambda^{-1} obtained five ways
  double inv_from_haar = 0.0;
  double inv_from_trace = 0.0;
  double inv_from_perron = 0.0;
  double inv_from_dimension = 0.0;
  double inv_from_norm = 0.0;
};

/// Checks tau = lambda Tr, (Lambda Lambda^t) m = lambda^{-1} m (the form used
/// in the proof; the residual of the variant with lambda is reported as
/// well), lambda^{-1} = ||Lambda||^2 = dim K / dim K_s and integrality.
/// Throws VerificationError when some criteria hold and others fail.
MarkovReport verify_equivalences(const WeakKacAlgebra& k, const WkaData& d, double lambda, const Tolerance& tol);

struct EsBasis {
  Mat x;  // columns x_1..x_n
  Report report;
  double index = 0.0;
};

/// Builds a basis of K over K_s orthonormal for E_s, following the
/// constructive argument: orthonormal bases of K f_11^(alpha) for the
/// K_s-valued inner product, propagated by f_1t and combined with Fourier
/// phases.  A seed other than nullopt mixes the spanning set randomly, which
/// gives an independent basis.
EsBasis construct_es_basis(const WeakKacAlgebra& k, const WkaData& d, double lambda, const Tolerance& tol,
                           std::optional<std::uint64_t> seed = std::nullopt);

/// y_nu = S(x_nu^*), checked as a basis for E_t.
EsBasis et_basis_from_es(const WeakKacAlgebra& k, const WkaData& d, const Mat& x, const Tolerance& tol);

/// (Lambda^t Lambda) t = lambda^{-1} t with t = lambda d, plus tau(e_kk^(i)) = t_i.
Report markov_trace_check(const WeakKacAlgebra& k, const WkaData& d, const InclusionData& inc, double lambda,
                          const Tolerance& tol);

/// For indecomposable K of prime dimension: dim K_s = 1, commutativity,
/// cocommutativity and a basis of group-like elements forming a cyclic group.
/// Returns a report with the single note "skipped" when the hypotheses fail.
Report prime_dimension_report(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol);

/// Group-like elements of K (Delta(g) = g (x) g, eps(g) = 1), found as the
/// characters of K* when K* is commutative.
Mat group_like_elements(const WeakKacAlgebra& k, const Tolerance& tol);

bool is_prime(long long n);

} // namespace wka

#endif // WKA_MARKOV_HPP_
