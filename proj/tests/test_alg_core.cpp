#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "wka/expectation.hpp"
#include "wka/linalg.hpp"
#include "wka/star_algebra.hpp"
#include "wka/weak_kac.hpp"
#include "wka/wedderburn.hpp"

using namespace wka;

namespace {

const Tolerance tol;

StarAlgebra group_algebra(int n) { return from_group(cyclic_group_table(n)).algebra(); }

// diagonal C^2 inside M_2: E_00, E_11
Mat diagonal_in_m2() {
  Mat s = Mat::Zero(4, 2);
  s(0, 0) = 1.0;
  s(3, 1) = 1.0;
  return s;
}

} // namespace

TEST_CASE("group algebra of Z_2 is a C*-algebra with trace form 2*I") {
  StarAlgebra a = group_algebra(2);
  Report r = verify_star_algebra(a, tol);
  CHECK(r.passed());
  CHECK(r.max_residual() < 1e-14);
  // Tr(e) = 2, Tr(g) = 0 and g* g = e give the Gram matrix diag(2, 2)
  Mat gram = a.involution().adjoint() * a.bilinear_form(regular_trace(a));
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  CHECK(es.eigenvalues()(0) == doctest::Approx(2.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2.0));
}

TEST_CASE("matrix algebra M_2 passes verification") {
  CHECK(verify_star_algebra(matrix_algebra(2), tol).passed());
  CHECK(verify_star_algebra(matrix_algebra(3), tol).passed());
}

TEST_CASE("perturbed structure constants break associativity") {
  StarAlgebra a = group_algebra(2);
  Mat m = a.structure();
  m(0, 0) += 0.1;  // m[0][0][0]
  StarAlgebra bad(m, a.unit(), a.involution());
  Report r = verify_star_algebra(bad, tol);
  CHECK_FALSE(r.passed());
  REQUIRE(r.find("associativity"));
  CHECK(r.find("associativity")->residual >= 0.01);
}

TEST_CASE("shape errors are structural") {
  CHECK_THROWS_AS(StarAlgebra(Mat::Zero(2, 3), Element::Zero(2), Mat::Identity(2, 2)), StructureError);
}

TEST_CASE("non-C* involution is flagged but not fatal") {
  // C^2 with the swap involution is a *-algebra whose trace form is indefinite
  Mat structure = Mat::Zero(2, 4);
  structure(0, 0) = 1.0;
  structure(1, 3) = 1.0;
  Mat swap(2, 2);
  swap << 0, 1, 1, 0;
  StarAlgebra a(structure, Element::Ones(2), swap);
  Report r = verify_star_algebra(a, tol);
  CHECK(r.passed());
  REQUIRE(r.find("c_star"));
  CHECK_FALSE(r.find("c_star")->pass);
}

TEST_CASE("block decomposition of small algebras") {
  CHECK(block_decompose(group_algebra(2), tol).block_dims == std::vector<int>{1, 1});
  CHECK(block_decompose(matrix_algebra(2), tol).block_dims == std::vector<int>{2});
  CHECK(block_decompose(group_algebra(3), tol).block_dims == std::vector<int>{1, 1, 1});
  StarAlgebra s3 = from_group(symmetric_group_table(3)).algebra();
  BlockDecomposition dec = block_decompose(s3, tol);
  CHECK(dec.block_dims == std::vector<int>{1, 1, 2});
  CHECK(verify_block_decomposition(s3, dec, tol).passed());
}

TEST_CASE("central projections of Z_3 are the character projections") {
  StarAlgebra a = group_algebra(3);
  BlockDecomposition dec = block_decompose(a, tol);
  for (int k = 0; k < 3; ++k) {
    Element p(3);
    for (int g = 0; g < 3; ++g)
      p(g) = std::conj(oracle::character(3, k, g)) / 3.0;
    double best = 1e9;
    for (int c = 0; c < 3; ++c)
      best = std::min(best, max_abs(Element(dec.central_projections.col(c) - p)));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("matrix units satisfy the defining relations") {
  for (int n : {2, 3}) {
    StarAlgebra a = matrix_algebra(n);
    MatrixUnitSystem mu = matrix_units(a, block_decompose(a, tol), tol);
    Report r = verify_matrix_units(a, mu, tol);
    CHECK(r.passed());
    CHECK(r.max_residual() < 1e-10);
  }
  StarAlgebra s3 = from_group(symmetric_group_table(3)).algebra();
  CHECK(verify_matrix_units(s3, matrix_units(s3, block_decompose(s3, tol), tol), tol).passed());
}

TEST_CASE("matrix units of Z_2 are (e+g)/2 and (e-g)/2") {
  StarAlgebra a = group_algebra(2);
  MatrixUnitSystem mu = matrix_units(a, block_decompose(a, tol), tol);
  REQUIRE(mu.units.size() == 2);
  Element plus(2), minus(2);
  plus << 0.5, 0.5;
  minus << 0.5, -0.5;
  Element u0 = mu.unit(0, 0, 0), u1 = mu.unit(1, 0, 0);
  bool direct = max_abs(Element(u0 - plus)) < 1e-10 && max_abs(Element(u1 - minus)) < 1e-10;
  bool swapped = max_abs(Element(u0 - minus)) < 1e-10 && max_abs(Element(u1 - plus)) < 1e-10;
  CHECK((direct || swapped));
}

TEST_CASE("matrix units of the diagonal algebra are its minimal projections") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  SubalgebraEmbedding e = make_subalgebra(m2, diagonal_in_m2(), tol);
  MatrixUnitSystem mu = matrix_units(*e.sub, block_decompose(*e.sub, tol), tol);
  REQUIRE(mu.units.size() == 2);
  Element p = e.embed(mu.unit(0, 0, 0)), q = e.embed(mu.unit(1, 0, 0));
  bool ok = (max_abs(Element(p - oracle::as_coords(oracle::unit_matrix(2, 0, 0)))) < 1e-10 &&
             max_abs(Element(q - oracle::as_coords(oracle::unit_matrix(2, 1, 1)))) < 1e-10) ||
            (max_abs(Element(q - oracle::as_coords(oracle::unit_matrix(2, 0, 0)))) < 1e-10 &&
             max_abs(Element(p - oracle::as_coords(oracle::unit_matrix(2, 1, 1)))) < 1e-10);
  CHECK(ok);
}

TEST_CASE("commutants") {
  StarAlgebra m2 = matrix_algebra(2);
  Mat all = commutant(m2, Mat::Identity(4, 4), tol);
  REQUIRE(all.cols() == 1);
  CHECK(distance_from_span(all, m2.unit()) < 1e-12);

  Mat diag = commutant(m2, diagonal_in_m2(), tol);
  CHECK(diag.cols() == 2);
  CHECK(distance_from_span(diag, diagonal_in_m2()) < 1e-12);

  CHECK(commutant(m2, m2.unit(), tol).cols() == 4);
}

TEST_CASE("inclusion matrices") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  IntMat diag = inclusion_matrix(make_subalgebra(m2, diagonal_in_m2(), tol), tol);
  CHECK(diag.rows() == 2);
  CHECK(diag.cols() == 1);
  CHECK(diag(0, 0) == 1);
  CHECK(diag(1, 0) == 1);

  IntMat scalar = inclusion_matrix(make_subalgebra(m2, m2->unit(), tol), tol);
  CHECK(scalar.rows() == 1);
  CHECK(scalar(0, 0) == 2);

  AlgebraPtr z3 = share(group_algebra(3));
  IntMat id = inclusion_matrix(make_subalgebra(z3, Mat::Identity(3, 3), tol), tol);
  CHECK(id == IntMat::Identity(3, 3));
}

TEST_CASE("regular trace") {
  StarAlgebra m2 = matrix_algebra(2);
  Functional tr = regular_trace(m2);
  CHECK(std::abs(tr(0) - 2.0) < 1e-14);  // e_11
  CHECK(std::abs((tr * m2.unit())(0) - 4.0) < 1e-14);
  Functional tz = regular_trace(group_algebra(2));
  CHECK(std::abs(tz(1)) < 1e-14);
  CHECK(std::abs(tz(0) - 2.0) < 1e-14);
}

TEST_CASE("trace conditional expectation onto scalars is the normalized trace") {
  AlgebraPtr m3 = share(matrix_algebra(3));
  Functional tr = regular_trace(*m3) / 9.0;  // normalized
  ConditionalExpectation ce = trace_conditional_expectation(make_subalgebra(m3, m3->unit(), tol), tr, tol);
  for (int i = 0; i < 9; ++i) {
    Element x = m3->basis(i);
    CHECK(max_abs(Element(ce.apply_in_amb(x) - tr(i) * m3->unit())) < 1e-12);
  }
  CHECK(verify_conditional_expectation(ce, tol, tr).passed());
}

TEST_CASE("conditional expectation onto the diagonal deletes off-diagonal entries") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  ConditionalExpectation ce =
      trace_conditional_expectation(make_subalgebra(m2, diagonal_in_m2(), tol), regular_trace(*m2), tol);
  Rng rng(7);
  Element x(4);
  for (int k = 0; k < 4; ++k)
    x(k) = rng.complex();
  Mat expected = oracle::as_matrix(x, 2);
  expected(0, 1) = expected(1, 0) = 0.0;
  CHECK(max_abs(Element(ce.apply_in_amb(x) - oracle::as_coords(expected))) < 1e-12);
  Report r = verify_conditional_expectation(ce, tol, regular_trace(*m2));
  CHECK(r.passed());
  CHECK(r.find("bimodule")->residual < 1e-12);
}

TEST_CASE("quasi-basis of scalars in M_n has index n^2") {
  const int n = 3;
  AlgebraPtr mn = share(matrix_algebra(n));
  Functional tr = regular_trace(*mn) / double(n * n);
  ConditionalExpectation ce = trace_conditional_expectation(make_subalgebra(mn, mn->unit(), tol), tr, tol);

  // sqrt(n) E_ij
  Mat u(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      u.col(i * n + j) = std::sqrt(double(n)) * oracle::as_coords(oracle::unit_matrix(n, i, j));
  QuasiBasisResult q = verify_quasi_basis(ce, u, tol);
  CHECK(q.report.passed());
  CHECK(q.is_basis);
  // brute force sum of u u^* with explicit matrices
  Mat sum = Mat::Zero(n, n);
  for (int c = 0; c < n * n; ++c) {
    Mat m = oracle::as_matrix(u.col(c), n);
    sum += m * m.adjoint();
  }
  CHECK(max_abs(Element(q.index - oracle::as_coords(sum))) < 1e-12);
  REQUIRE(q.scalar_index);
  CHECK(*q.scalar_index == doctest::Approx(n * n));

  // independent basis: Weyl unitaries clock^a shift^b
  Mat w(n * n, n * n);
  Mat c = oracle::clock(n), s = oracle::shift(n);
  Mat ca = Mat::Identity(n, n);
  for (int a = 0; a < n; ++a, ca = ca * c) {
    Mat sb = Mat::Identity(n, n);
    for (int b = 0; b < n; ++b, sb = sb * s)
      w.col(a * n + b) = oracle::as_coords(ca * sb);
  }
  QuasiBasisResult q2 = verify_quasi_basis(ce, w, tol);
  CHECK(q2.report.passed());
  REQUIRE(q2.scalar_index);
  CHECK(std::abs(*q2.scalar_index - *q.scalar_index) < 1e-10);
}

TEST_CASE("identity expectation has index 1") {
  AlgebraPtr z2 = share(group_algebra(2));
  ConditionalExpectation ce =
      trace_conditional_expectation(make_subalgebra(z2, Mat::Identity(2, 2), tol), regular_trace(*z2), tol);
  QuasiBasisResult q = verify_quasi_basis(ce, z2->unit(), tol);
  CHECK(q.report.passed());
  REQUIRE(q.scalar_index);
  CHECK(*q.scalar_index == doctest::Approx(1.0));
}

TEST_CASE("broken quasi-basis is rejected") {
  AlgebraPtr m2 = share(matrix_algebra(2));
  Functional tr = regular_trace(*m2) / 4.0;
  ConditionalExpectation ce = trace_conditional_expectation(make_subalgebra(m2, m2->unit(), tol), tr, tol);
  Mat u = Mat::Identity(4, 3) * std::sqrt(2.0);  // one matrix unit missing
  CHECK_FALSE(verify_quasi_basis(ce, u, tol).report.passed());
}

TEST_CASE("basic construction of C in C^2 is M_2") {
  Mat structure = Mat::Zero(2, 4);
  structure(0, 0) = 1.0;
  structure(1, 3) = 1.0;
  AlgebraPtr c2 = share(StarAlgebra(structure, Element::Ones(2), Mat::Identity(2, 2)));
  Functional avg(2);
  avg << 0.5, 0.5;
  ConditionalExpectation ce = trace_conditional_expectation(make_subalgebra(c2, c2->unit(), tol), avg, tol);
  Mat u(2, 2);
  u << 1, 1, 1, -1;  // orthonormal for the average
  BasicConstruction bc = basic_construction(ce, u, tol);
  CHECK(bc.algebra->dim() == 4);
  CHECK(center(*bc.algebra, tol).cols() == 1);
  Report r = verify_basic_construction(bc, ce, tol);
  CHECK(r.passed());

  // e b e = E(b) e for random b
  Rng rng(11);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Element b(2);
    b << rng.complex(), rng.complex();
    Element bb = bc.of_b.embed(b);
    Element lhs = bc.algebra->multiply(bc.algebra->multiply(bc.jones, bb), bc.jones);
    Element rhs = bc.algebra->multiply(bc.of_b.embed(ce.apply_in_amb(b)), bc.jones);
    worst = std::max(worst, max_abs(Element(lhs - rhs)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("basic construction for the identity expectation is the algebra itself") {
  AlgebraPtr s3 = share(from_group(symmetric_group_table(3)).algebra());
  ConditionalExpectation ce =
      trace_conditional_expectation(make_subalgebra(s3, Mat::Identity(6, 6), tol), regular_trace(*s3), tol);
  BasicConstruction bc = basic_construction(ce, s3->unit(), tol);
  CHECK(bc.algebra->dim() == 6);
  CHECK(verify_basic_construction(bc, ce, tol).passed());
}

TEST_CASE("Perron-Frobenius data") {
  RealMat ones = RealMat::Ones(2, 2);
  PerronData p = perron_eigen(ones);
  CHECK(p.value == doctest::Approx(2.0));
  CHECK(p.vector(0) == doctest::Approx(1.0));
  CHECK(p.vector(1) == doctest::Approx(1.0));
  CHECK(p.irreducible);

  RealMat two(1, 1);
  two << 2.0;
  CHECK(perron_eigen(two).value == doctest::Approx(2.0));

  IntMat lambda(2, 1);
  lambda << 1, 1;
  RealMat ll = to_real(lambda) * to_real(lambda).transpose();
  PerronData q = perron_eigen(ll);
  CHECK(q.value == doctest::Approx(oracle::spectral_radius(ll)));
  CHECK(q.value == doctest::Approx(2.0));

  RealMat reducible = RealMat::Identity(2, 2);
  CHECK_FALSE(perron_eigen(reducible).irreducible);
}
