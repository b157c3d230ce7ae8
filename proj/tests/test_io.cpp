#include <string>

#include "doctest.h"
#include "wka/io.hpp"

using namespace wka;

namespace {

const Tolerance tol;

WeakKacAlgebra cyclic(int n) { return from_group(cyclic_group_table(n)); }

bool identical(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

std::string message_of(const std::string& text) {
  try {
    weak_kac_from_json(parse_document(text, "input"));
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("weak Kac algebras round-trip exactly") {
  for (const WeakKacAlgebra& k : {cyclic(2), from_pair_groupoid(3), dual(from_group(symmetric_group_table(3)))}) {
    std::string text = serialize(to_json(k));
    WeakKacAlgebra back = weak_kac_from_json(parse_document(text, "input"));
    CHECK(identical(back.algebra().structure(), k.algebra().structure()));
    CHECK(identical(back.algebra().involution(), k.algebra().involution()));
    CHECK(identical(back.comult(), k.comult()));
    CHECK(identical(back.antipode(), k.antipode()));
    CHECK(identical(back.counit(), k.counit()));
    CHECK(serialize(to_json(back)) == text);
  }
}

TEST_CASE("values that need all digits survive") {
  StarAlgebra a = matrix_algebra(2);
  Mat s = a.structure();
  s(0, 0) = cplx(0.1 + 0.2, -1.0 / 3.0);
  StarAlgebra b(s, a.unit(), a.involution());
  StarAlgebra back = star_algebra_from_json(parse_document(serialize(to_json(b)), "input"));
  CHECK(back.structure()(0, 0) == s(0, 0));
}

TEST_CASE("actions and crossed products round-trip") {
  ActionSpec spec = dual_action(from_pair_groupoid(2), Side::left, tol);
  ActionSpec back = action_from_json(parse_document(serialize(to_json(spec)), "input"), tol);
  CHECK(identical(back.act, spec.act));
  CHECK(back.side == Side::left);
  CHECK(validate_action(back, tol).passed());

  CrossedProduct cp = crossed_product(spec, tol);
  std::string text = serialize(to_json(cp));
  CrossedProduct cb = crossed_product_from_json(parse_document(text, "input"), tol);
  CHECK(identical(cb.algebra->structure(), cp.algebra->structure()));
  CHECK(identical(cb.projection, cp.projection));
  CHECK(cb.relations.cols() == cp.relations.cols());
  CHECK(verify_crossed_product(cb, tol).passed());
  CHECK(serialize(to_json(cb)) == text);
}

TEST_CASE("non-finite numbers are rejected") {
  std::string text = serialize(to_json(cyclic(2)));
  std::string with_nan = text;
  with_nan.replace(with_nan.find("[1.0,0.0]"), 9, "[NaN,0.0]");
  CHECK_THROWS_AS(weak_kac_from_json(parse_document(with_nan, "input")), ParseError);
  std::string huge = text;
  huge.replace(huge.find("[1.0,0.0]"), 9, "[1e999,0.0]");
  std::string msg = message_of(huge);
  bool rejected = msg.find("non-finite") != std::string::npos || msg.find("overflow") != std::string::npos;
  CHECK(rejected);
}

TEST_CASE("errors carry positions") {
  std::string text = serialize(to_json(cyclic(2)));
  // truncated input: the parser reports line and column
  std::string msg = message_of(text.substr(0, text.size() / 2));
  CHECK(msg.find("input") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);

  Json doc = to_json(cyclic(2));
  doc["comult"][3].erase(1);
  msg = message_of(doc.dump());
  CHECK(msg.find("/comult/3") != std::string::npos);

  doc = to_json(cyclic(2));
  doc["antipode"][1][0] = "x";
  msg = message_of(doc.dump());
  CHECK(msg.find("/antipode/1/0") != std::string::npos);

  doc = to_json(cyclic(2));
  doc["kind"] = "group";
  msg = message_of(doc.dump());
  CHECK(msg.find("unknown kind") != std::string::npos);

  doc = to_json(cyclic(2));
  doc.erase("counit");
  msg = message_of(doc.dump());
  CHECK(msg.find("counit") != std::string::npos);

  Json action = to_json(trivial_action(cyclic(2), Side::left, tol));
  action["k"]["comult"][0][0] = Json::array({1.0});
  try {
    action_from_json(action, tol);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/k/comult/0/0") != std::string::npos);
  }
}
