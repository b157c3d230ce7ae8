#include "doctest.h"
#include "oracles.hpp"
#include "wka/linalg.hpp"
#include "wka/tower.hpp"

using namespace wka;

namespace {

const Tolerance tol;

WeakKacAlgebra cyclic(int n) { return from_group(cyclic_group_table(n)); }

WeakKacAlgebra dim8() {
  return *two_sided_crossed_product(kac_subalgebra_example(cyclic(2), Mat::Identity(2, 2), tol), tol).k;
}

double worst_residual(const Report& r, const std::string& suffix) {
  double worst = 0.0;
  for (const Check& c : r.checks())
    if (c.name.size() >= suffix.size() && c.name.compare(c.name.size() - suffix.size(), suffix.size(), suffix) == 0)
      worst = std::max(worst, c.residual);
  return worst;
}

// dim Z(A) from the structure constants: x with x_i x - x x_i = 0 for all i.
int center_dim(const StarAlgebra& a) {
  const int n = a.dim();
  Eigen::MatrixXcd eqs(Eigen::Index(n) * n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        eqs(Eigen::Index(i) * n + k, j) = a.constant(i, j, k) - a.constant(j, i, k);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(eqs);
  lu.setThreshold(1e-10);
  return n - int(lu.rank());
}

} // namespace

TEST_CASE("tower of C Z_2 to depth 2") {
  Tower t = build_tower(cyclic(2), 2, tol);
  CHECK(t.report.passed());
  CHECK_FALSE(t.partial);
  CHECK(t.dims() == std::vector<int>{2, 4, 8});
  CHECK(t.n == 2);
  CHECK(worst_residual(t.report, "expectation_of_jones") < 1e-8);
  CHECK(worst_residual(t.report, "exe.compression") < 1e-8);
  // C ⊂ C Z_2 has inclusion matrix (1 1); each later one is its transpose
  REQUIRE(t.upper[0].inclusion.rows() == 1);
  CHECK(t.upper[0].inclusion.cols() == 2);
  CHECK(t.upper[0].inclusion.sum() == 2);
  CHECK(t.upper[1].inclusion.rows() == 2);
  CHECK(t.upper[1].inclusion.cols() == 1);
  CHECK(t.upper[2].inclusion.cols() == 2);
  CHECK(t.lower.size() == 3);
  CHECK(t.lower[1].algebra->dim() == 2);
  CHECK(t.lower[2].algebra->dim() == 4);
}

TEST_CASE("tower of the pair groupoid and of S_3") {
  Tower pg = build_tower(from_pair_groupoid(2), 2, tol);
  CHECK(pg.report.passed());
  CHECK(pg.dims() == std::vector<int>{4, 8, 16});
  Tower s3 = build_tower(from_group(symmetric_group_table(3)), 1, tol);
  CHECK(s3.report.passed());
  CHECK(s3.dims() == std::vector<int>{6, 36});
}

TEST_CASE("tower of the dimension 8 example") {
  Tower t = build_tower(dim8(), 1, tol);
  CHECK(t.report.passed());
  CHECK(t.dims() == std::vector<int>{8, 32});
  CHECK(t.n == 4);
}

TEST_CASE("dimension cap gives a partial tower") {
  Tower t = build_tower(cyclic(2), 3, tol, 8);
  CHECK(t.partial);
  CHECK(t.dims() == std::vector<int>{2, 4, 8});
  CHECK_FALSE(t.report.warnings().empty());
  CHECK(t.report.passed());
}

TEST_CASE("commuting squares") {
  Report z2 = commuting_square_check(cyclic(2), tol);
  CHECK(z2.passed());
  CHECK(z2.values()["image_dim"].get<int>() == 1);
  CHECK(z2.max_residual() < 1e-8);
  for (int n : {2, 3}) {
    Report pg = commuting_square_check(from_pair_groupoid(n), tol);
    CHECK(pg.passed());
    // the image is the diagonal subalgebra K_s = C^n
    CHECK(pg.values()["image_dim"].get<int>() == n);
    CHECK(pg.values()["dim_crossed"].get<int>() == n * n * n);
  }
  Report d8 = commuting_square_check(dim8(), tol);
  CHECK(d8.passed());
  CHECK(d8.values()["image_dim"].get<int>() == 2);
}

TEST_CASE("left and right iterated products agree") {
  for (const WeakKacAlgebra& k : {cyclic(1), cyclic(2), cyclic(3), from_pair_groupoid(2), dim8()}) {
    Report r = left_right_iso_check(k, 1, tol);
    CHECK(r.passed());
    CHECK(r.max_residual() < 1e-8);
    CHECK_FALSE(r.values()["skipped"].get<bool>());
  }
  Report z2 = left_right_iso_check(cyclic(2), 1, tol);
  CHECK(z2.values()["coordinates_agree"].get<bool>());
  Report r2 = left_right_iso_check(cyclic(2), 2, tol);
  CHECK(r2.passed());
  CHECK(r2.values()["dim_left"].get<int>() == 16);
  Report big = left_right_iso_check(dim8(), 2, tol);
  CHECK(big.values()["skipped"].get<bool>());
  CHECK_FALSE(big.warnings().empty());
}

TEST_CASE("relative commutant lemma") {
  Report z2 = relative_commutant_checks(trivial_action(cyclic(2), Side::left, tol), tol);
  CHECK(z2.passed());
  CHECK(z2.values()["intersection_dim"].get<int>() == 1);
  Report pg = relative_commutant_checks(trivial_action(from_pair_groupoid(2), Side::left, tol), tol);
  CHECK(pg.passed());
  CHECK(pg.values()["intersection_dim"].get<int>() == 2);
  Report on_k = relative_commutant_checks(dual_action(cyclic(3), Side::left, tol), tol);
  CHECK(on_k.passed());
  CHECK(on_k.values()["intersection_dim"].get<int>() == 3);
}

TEST_CASE("index arithmetic") {
  for (int p : {2, 3, 5}) {
    ArithmeticReport a = arithmetic_report(cyclic(p), tol);
    CHECK(a.report.passed());
    CHECK(a.d == 1);
    CHECK(a.lambda_inverse == p);
    CHECK(a.prime_index);
    CHECK(a.first_kind_integral);
  }
  WeakKacAlgebra k = dim8();
  ArithmeticReport a = arithmetic_report(k, tol);
  CHECK(a.report.passed());
  CHECK(a.biconnected);
  CHECK(a.d == 2);
  CHECK(a.lambda_inverse == 4);
  CHECK(a.m == std::vector<int>{1, 1});
  REQUIRE(a.first_kind.size() == 2);
  CHECK(a.first_kind[0].num == 1);
  CHECK(a.first_kind[0].den == 1);
  CHECK(a.d_divides_blocks);
  CHECK(a.d_divides_index);
  // two blocks with d_1^2 + d_2^2 = 8 force d = (2, 2)
  CHECK(center_dim(k.algebra()) == 2);
  CHECK(a.block_dims == std::vector<int>{2, 2});

  ArithmeticReport pg = arithmetic_report(from_pair_groupoid(3), tol);
  CHECK_FALSE(pg.biconnected);
  CHECK(pg.report.passed());
  CHECK_FALSE(pg.first_kind_integral);
  CHECK(pg.first_kind[0].num == 1);
  CHECK(pg.first_kind[0].den == 3);
}
