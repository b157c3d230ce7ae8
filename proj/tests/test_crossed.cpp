#include "doctest.h"
#include "oracles.hpp"
#include "wka/crossed.hpp"
#include "wka/linalg.hpp"

using namespace wka;

namespace {

const Tolerance tol;

WeakKacAlgebra cyclic(int n) { return from_group(cyclic_group_table(n)); }

std::vector<WeakKacAlgebra> suite() {
  return {cyclic(2), cyclic(3), from_pair_groupoid(2), from_pair_groupoid(3), from_group(symmetric_group_table(3))};
}

} // namespace

TEST_CASE("trivial and dual actions are actions") {
  for (const WeakKacAlgebra& k : suite())
    for (Side side : {Side::left, Side::right}) {
      CHECK(validate_action(trivial_action(k, side, tol), tol).passed());
      CHECK(validate_action(dual_action(k, side, tol), tol).passed());
    }
  // C Z_2 has K_t = C and h |> 1 = eps(h)
  ActionSpec t = trivial_action(cyclic(2), Side::left, tol);
  REQUIRE(t.dim_a() == 1);
  CHECK(std::abs(t.act(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(t.act(0, 1) - 1.0) < 1e-12);
}

TEST_CASE("dual action of (C Z_2)* rescales group elements") {
  ActionSpec d = dual_action(cyclic(2), Side::left, tol);
  // phi_i |> g = g <phi_i, g> = delta_{i,g} g
  for (int i = 0; i < 2; ++i)
    for (int g = 0; g < 2; ++g) {
      Element expected = Element::Zero(2);
      if (i == g)
        expected(g) = 1.0;
      CHECK(max_abs(Element(d.op(i).col(g) - expected)) < 1e-14);
    }
}

TEST_CASE("left multiplication is not an action of the pair groupoid") {
  WeakKacAlgebra g = from_pair_groupoid(2);
  const int n = g.dim();
  Mat act(n, n * n);
  for (int h = 0; h < n; ++h)
    act.middleCols(h * n, n) = g.algebra().left_matrix(g.algebra().basis(h));
  ActionSpec s = make_action(g, g.algebra_ptr(), Side::left, act, tol);
  Report r = validate_action(s, tol);
  CHECK(r.find("module_law")->pass);
  CHECK_FALSE(r.find("multiplicative")->pass);
}

TEST_CASE("crossed products by trivial actions recover K") {
  for (const WeakKacAlgebra& k : suite())
    for (Side side : {Side::left, Side::right}) {
      Report r = trivial_crossed_isomorphism(k, side, tol);
      CHECK(r.passed());
      CHECK(r.max_residual() < 1e-9);
      CrossedProduct cp = crossed_product(trivial_action(k, side, tol), tol);
      CHECK(cp.dim() == k.dim());
      CHECK(verify_crossed_product(cp, tol).passed());
    }
}

TEST_CASE("E_A on K_t >< K is E_t") {
  WeakKacAlgebra g = from_pair_groupoid(2);
  ActionSpec spec = trivial_action(g, Side::left, tol);
  CrossedProduct cp = crossed_product(spec, tol);
  ConditionalExpectation ea = crossed_expectation(cp, tol);
  CHECK(verify_conditional_expectation(ea, tol).passed());
  // [a (x) h] -> a h, computed directly from the representatives
  const SubalgebraEmbedding& kt = spec.data->cartan.kt;
  Mat phi(g.dim(), cp.dim());
  for (int i = 0; i < cp.dim(); ++i) {
    Eigen::Index v;
    cp.section.col(i).cwiseAbs().maxCoeff(&v);
    int a = int(v) / g.dim(), h = int(v) % g.dim();
    phi.col(i) = g.algebra().multiply(kt.emb.col(a), g.algebra().basis(h));
  }
  Mat lhs = phi * ea.e.emb * ea.map;
  Mat rhs = spec.data->expectations.et_full * phi;
  CHECK(max_abs(Mat(lhs - rhs)) < 1e-10);

  CrossedBasis b = crossed_basis(cp, ea, tol);
  CHECK(b.result.report.passed());
  CHECK(b.result.scalar_index.value_or(0.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("dual action on the crossed product") {
  for (const WeakKacAlgebra& k : {cyclic(2), from_pair_groupoid(2)}) {
    CrossedProduct cp = crossed_product(trivial_action(k, Side::left, tol), tol);
    ActionSpec d = dual_action_on_crossed(cp, tol);
    CHECK(validate_action(d, tol).passed());
  }
}

TEST_CASE("duality for the trivial action on K_t") {
  struct Case {
    WeakKacAlgebra k;
    int n, dim_a;
  };
  for (const Case& c : {Case{cyclic(2), 2, 1}, Case{cyclic(3), 3, 1}, Case{from_pair_groupoid(2), 2, 2},
                        Case{from_group(symmetric_group_table(3)), 6, 1}}) {
    Duality d = duality_isomorphism(trivial_action(c.k, Side::left, tol), tol);
    CHECK(d.report.passed());
    CHECK(d.n == c.n);
    CHECK(d.cp2.dim() == c.n * c.n * c.dim_a);
    CHECK(numerical_rank(d.rho, tol) == c.n * c.n * c.dim_a);
  }
}

TEST_CASE("centralizer of A in K >< A") {
  for (const WeakKacAlgebra& k : {cyclic(2), from_pair_groupoid(2)}) {
    CrossedProduct cp = crossed_product(trivial_action(k, Side::right, tol), tol);
    Report r = centralizer_check(cp, tol);
    CHECK(r.passed());
    CHECK(r.find("target_cartan_commutes_with_A")->residual < 1e-12);
  }
  // dual action of K* on K: reported only
  CrossedProduct cp = crossed_product(dual_action(cyclic(2), Side::right, tol), tol);
  Report r = centralizer_check(cp, tol);
  CHECK(r.passed());
  CHECK(r.values()["relative_commutant_dim"].get<int>() >= 1);
}

TEST_CASE("two-sided crossed product from C Z_2 and its dual") {
  WeakKacAlgebra h = cyclic(2);
  TwoSidedInput in = kac_subalgebra_example(h, Mat::Identity(2, 2), tol);
  CHECK(verify_two_sided_input(in, tol).passed());
  // Haar projection of A = H* is the dual counit delta_e, cocommutative
  CHECK(max_abs(Mat(in.p - in.p.transpose())) == 0.0);
  TwoSided ts = two_sided_crossed_product(in, tol);
  CHECK(ts.report.passed());
  const WeakKacAlgebra& k = *ts.k;
  CHECK(k.dim() == 8);
  CHECK(verify_wka(k, tol).max_residual() < 1e-8);
  WkaData d = analyze(k, tol);
  MarkovLambda ml = markov_lambda(k, d, tol);
  REQUIRE(ml.scalar);
  CHECK(1.0 / ml.lambda == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(biconnectivity(k, tol).biconnected());
}

TEST_CASE("two-sided crossed product with a trivial subalgebra") {
  WeakKacAlgebra h = cyclic(3);
  Mat eps = h.counit().transpose();  // the counit as an element of H*
  TwoSided ts = two_sided_crossed_product(kac_subalgebra_example(h, eps, tol), tol);
  CHECK(ts.report.passed());
  CHECK(ts.k->dim() == 3);
  WkaData d = analyze(*ts.k, tol);
  CHECK(1.0 / markov_lambda(*ts.k, d, tol).lambda == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("trivial H on M_2 gives a dual isomorphic to M_4") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  TwoSidedInput in = trivial_two_sided_input(m2, transpose_map(2), tol);
  // P = (1/2) sum E_rs (x) E_rs
  Mat expected = Mat::Zero(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      expected(r * 2 + s, r * 2 + s) = 0.5;
  CHECK(max_abs(Mat(in.p - expected)) < 1e-10);
  TwoSided ts = two_sided_crossed_product(in, tol);
  CHECK(ts.report.passed());
  CHECK(ts.k->dim() == 16);
  WeakKacAlgebra kd = dual(*ts.k);
  CHECK(block_decompose(kd.algebra(), tol).block_dims == std::vector<int>{4});
}

TEST_CASE("perturbed separability element is rejected") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  TwoSidedInput in = trivial_two_sided_input(m2, transpose_map(2), tol);
  in.p(0, 0) += 0.1;
  Report r = verify_two_sided_input(in, tol);
  CHECK_FALSE(r.find("p_separability_left")->pass);
  CHECK_THROWS_AS(two_sided_crossed_product(in, tol), VerificationError);
}
