#include "doctest.h"
#include "oracles.hpp"
#include "wka/linalg.hpp"
#include "wka/markov.hpp"

using namespace wka;

namespace {

const Tolerance tol;

WeakKacAlgebra cyclic(int n) { return from_group(cyclic_group_table(n)); }

} // namespace

TEST_CASE("lambda of group algebras and pair groupoids") {
  for (int p : {2, 3, 5}) {
    WeakKacAlgebra k = cyclic(p);
    MarkovLambda ml = markov_lambda(k, analyze(k, tol), tol);
    REQUIRE(ml.scalar);
    CHECK(ml.lambda == doctest::Approx(1.0 / p).epsilon(1e-12));
    CHECK(ml.source_target_residual < 1e-12);
  }
  for (int n : {2, 3}) {
    WeakKacAlgebra g = from_pair_groupoid(n);
    MarkovLambda ml = markov_lambda(g, analyze(g, tol), tol);
    REQUIRE(ml.scalar);
    CHECK(ml.lambda == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("a direct sum is not Markov") {
  WeakKacAlgebra sum = direct_sum(cyclic(2), cyclic(3));
  MarkovLambda ml = markov_lambda(sum, analyze(sum, tol), tol);
  CHECK_FALSE(ml.scalar);
  REQUIRE(ml.spectrum.size() == 2);
  CHECK(ml.spectrum[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ml.spectrum[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("equivalent forms of the Markov condition") {
  WeakKacAlgebra g = from_pair_groupoid(3);
  WkaData d = analyze(g, tol);
  MarkovReport mr = verify_equivalences(g, d, markov_lambda(g, d, tol).lambda, tol);
  CHECK(mr.report.passed());
  CHECK(mr.n == 3);
  // K = M_3 over its diagonal: Lambda is a column of ones
  REQUIRE(mr.inclusion.lambda.rows() == 3);
  REQUIRE(mr.inclusion.lambda.cols() == 1);
  CHECK(mr.inclusion.lambda == IntMat::Ones(3, 1));
  CHECK(mr.inclusion.m == std::vector<int>{1, 1, 1});
  CHECK(mr.inclusion.d == std::vector<int>{3});
  for (double v : {mr.inv_from_haar, mr.inv_from_trace, mr.inv_from_perron, mr.inv_from_dimension, mr.inv_from_norm})
    CHECK(std::abs(v - 3.0) < 1e-9);
  // the variant with lambda instead of lambda^{-1} fails here
  CHECK_FALSE(mr.report.find("perron_equation_with_lambda")->pass);

  WeakKacAlgebra s3 = from_group(symmetric_group_table(3));
  WkaData ds = analyze(s3, tol);
  MarkovReport ms = verify_equivalences(s3, ds, markov_lambda(s3, ds, tol).lambda, tol);
  CHECK(ms.report.passed());
  CHECK(ms.n == 6);
  // C S_3 = C + C + M_2 over C 1: Lambda = (1 1 2)
  CHECK(ms.inclusion.lambda.rows() == 1);
  CHECK(ms.inclusion.lambda.sum() == 4);
}

TEST_CASE("wrong lambda makes every criterion fail together") {
  WeakKacAlgebra k = cyclic(3);
  WkaData d = analyze(k, tol);
  MarkovReport mr = verify_equivalences(k, d, 0.5, tol);
  CHECK_FALSE(mr.report.passed());
}

TEST_CASE("basis for E_s in the group algebra") {
  for (int p : {2, 3}) {
    WeakKacAlgebra k = cyclic(p);
    WkaData d = analyze(k, tol);
    EsBasis b = construct_es_basis(k, d, 1.0 / p, tol);
    CHECK(b.report.passed());
    CHECK(b.x.cols() == p);
    CHECK(b.index == doctest::Approx(double(p)).epsilon(1e-10));
    // E_s(x^* y) = tau(x^* y) 1 and tau(x^* y) is the standard inner product
    Mat gram = b.x.adjoint() * b.x;
    CHECK(max_abs(Mat(gram - Mat::Identity(p, p))) < 1e-10);
  }
}

TEST_CASE("basis for E_s in the pair groupoid") {
  const int n = 3;
  WeakKacAlgebra g = from_pair_groupoid(n);
  WkaData d = analyze(g, tol);
  for (std::optional<std::uint64_t> seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{7}}) {
    EsBasis b = construct_es_basis(g, d, 1.0 / n, tol, seed);
    CHECK(b.report.passed());
    REQUIRE(b.x.cols() == n);
    // E_s is the diagonal part of a matrix
    oracle::Mat sum = oracle::Mat::Zero(n, n);
    for (int nu = 0; nu < n; ++nu) {
      oracle::Mat xn = oracle::as_matrix(b.x.col(nu), n);
      for (int ka = 0; ka < n; ++ka) {
        oracle::Mat prod = xn.adjoint() * oracle::as_matrix(b.x.col(ka), n);
        oracle::Mat expected = oracle::Mat::Identity(n, n) * double(nu == ka);
        CHECK((oracle::Mat(prod.diagonal().asDiagonal()) - expected).cwiseAbs().maxCoeff() < 1e-10);
      }
      sum += xn * xn.adjoint();
    }
    CHECK((sum - n * oracle::Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

    EsBasis y = et_basis_from_es(g, d, b.x, tol);
    CHECK(y.report.passed());
    CHECK(y.index == doctest::Approx(double(n)).epsilon(1e-10));
  }
}

TEST_CASE("basis for E_s in C S_3") {
  WeakKacAlgebra s3 = from_group(symmetric_group_table(3));
  WkaData d = analyze(s3, tol);
  EsBasis b = construct_es_basis(s3, d, 1.0 / 6, tol, 11);
  CHECK(b.report.passed());
  CHECK(b.x.cols() == 6);
}

TEST_CASE("Markov trace vector") {
  for (int p : {2, 3}) {
    WeakKacAlgebra k = cyclic(p);
    WkaData d = analyze(k, tol);
    InclusionData inc = source_inclusion(k, d, tol);
    Report r = markov_trace_check(k, d, inc, 1.0 / p, tol);
    CHECK(r.passed());
    // tau of each minimal projection of C Z_p is 1/p
    for (double t : r.values()["trace_vector"].get<std::vector<double>>())
      CHECK(t == doctest::Approx(1.0 / p).epsilon(1e-12));
  }
  WeakKacAlgebra g = from_pair_groupoid(2);
  WkaData dg = analyze(g, tol);
  CHECK(markov_trace_check(g, dg, source_inclusion(g, dg, tol), 0.5, tol).passed());
}

TEST_CASE("prime dimension") {
  CHECK(is_prime(2));
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
  for (int p : {2, 3, 5}) {
    WeakKacAlgebra k = cyclic(p);
    Report r = prime_dimension_report(k, analyze(k, tol), tol);
    CHECK(r.values()["skipped"] == false);
    CHECK(r.passed());
    // the group-like elements are the group elements
    Mat gl = group_like_elements(k, tol);
    REQUIRE(gl.cols() == p);
    for (int j = 0; j < p; ++j) {
      Eigen::Index at;
      gl.col(j).cwiseAbs().maxCoeff(&at);
      CHECK(max_abs(Element(gl.col(j) - Element::Unit(p, at))) < 1e-10);
    }
  }
  WeakKacAlgebra s3 = from_group(symmetric_group_table(3));
  CHECK(prime_dimension_report(s3, analyze(s3, tol), tol).values()["skipped"] == true);
  WeakKacAlgebra sum = direct_sum(cyclic(2), cyclic(3));
  Report rs = prime_dimension_report(sum, analyze(sum, tol), tol);
  CHECK(rs.values()["skipped"] == true);
  CHECK(rs.values()["reason"] == "decomposable");
}
