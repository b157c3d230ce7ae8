#include "wka/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace wka {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& member(const Json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object())
    fail(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end())
    fail(where, "missing field \"" + key + "\"");
  return *it;
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    fail(where, "expected a [re, im] pair");
  double parts[2];
  for (int i = 0; i < 2; ++i) {
    if (!j[i].is_number())
      fail(where + "/" + std::to_string(i), "expected a number");
    parts[i] = j[i].get<double>();
    if (!std::isfinite(parts[i]))
      fail(where + "/" + std::to_string(i), "non-finite number");
  }
  return {parts[0], parts[1]};
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

int dim_from_json(const Json& doc, const std::string& where) {
  const Json& d = member(doc, "dim", where);
  if (!d.is_number_integer() || d.get<long long>() < 0 || d.get<long long>() > 1 << 20)
    fail(where + "/dim", "expected a nonnegative integer");
  return d.get<int>();
}

Json header(const char* kind, int dim) {
  Json j = Json::object();
  j["format_version"] = format_version;
  j["kind"] = kind;
  j["dim"] = dim;
  return j;
}

void expect_kind(const Json& doc, const std::string& kind) {
  std::string k = kind_of(doc);
  if (k != kind)
    fail("/kind", "expected kind \"" + kind + "\", found \"" + k + "\"");
}

StarAlgebra algebra_fields(const Json& doc, int n, const std::string& where) {
  Mat structure = matrix_from_json(member(doc, "structure", where), n, Eigen::Index(n) * n, where + "/structure");
  Element unit = vector_from_json(member(doc, "unit", where), n, where + "/unit");
  Mat invol = matrix_from_json(member(doc, "involution", where), n, n, where + "/involution");
  return StarAlgebra(structure, unit, invol);
}

// Errors from nested documents carry the pointer of the nested field.
template <class F>
auto nested(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (msg.rfind("at /: ", 0) == 0)
      throw ParseError("at " + where + msg.substr(4));
    if (msg.rfind("at /", 0) == 0)
      throw ParseError("at " + where + msg.substr(3));
    throw;
  }
}

} // namespace

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(complex_to_json(v(i)));
  return out;
}

Mat matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!j.is_array())
    fail(where, "expected an array of rows");
  if (Eigen::Index(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    const std::string rw = where + "/" + std::to_string(i);
    if (!row.is_array())
      fail(rw, "expected an array");
    if (Eigen::Index(row.size()) != cols)
      fail(rw, "expected " + std::to_string(cols) + " entries, found " + std::to_string(row.size()));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = complex_from_json(row[c], rw + "/" + std::to_string(c));
  }
  return m;
}

Eigen::VectorXcd vector_from_json(const Json& j, Eigen::Index size, const std::string& where) {
  if (!j.is_array())
    fail(where, "expected an array");
  if (Eigen::Index(j.size()) != size)
    fail(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  Eigen::VectorXcd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v(i) = complex_from_json(j[i], where + "/" + std::to_string(i));
  return v;
}

Json to_json(const StarAlgebra& a) {
  Json j = header("star_algebra", a.dim());
  j["structure"] = matrix_to_json(a.structure());
  j["unit"] = vector_to_json(a.unit());
  j["involution"] = matrix_to_json(a.involution());
  return j;
}

Json to_json(const WeakKacAlgebra& k) {
  Json j = header("weak_kac", k.dim());
  Json alg = Json::object();
  alg["structure"] = matrix_to_json(k.algebra().structure());
  alg["unit"] = vector_to_json(k.algebra().unit());
  alg["involution"] = matrix_to_json(k.algebra().involution());
  j["algebra"] = alg;
  j["comult"] = matrix_to_json(k.comult());
  j["counit"] = vector_to_json(k.counit().transpose());
  j["antipode"] = matrix_to_json(k.antipode());
  return j;
}

Json to_json(const ActionSpec& s) {
  Json j = header("action", s.dim_a());
  j["side"] = side_name(s.side);
  j["k"] = to_json(*s.k);
  j["a"] = to_json(*s.a);
  j["act"] = matrix_to_json(s.act);
  return j;
}

Json to_json(const CrossedProduct& cp) {
  Json j = header("crossed_product", cp.dim());
  j["action"] = to_json(cp.spec);
  j["algebra"] = to_json(*cp.algebra);
  j["relations_dim"] = cp.relations.cols();
  j["relations"] = matrix_to_json(cp.relations);
  j["section"] = matrix_to_json(cp.section);
  j["projection"] = matrix_to_json(cp.projection);
  j["i_a"] = matrix_to_json(cp.i_a.emb);
  j["i_k"] = matrix_to_json(cp.i_k.emb);
  return j;
}

std::string kind_of(const Json& doc) {
  const Json& v = member(doc, "format_version", "");
  if (!v.is_string())
    fail("/format_version", "expected a string");
  if (v.get<std::string>() != format_version)
    fail("/format_version", "unsupported version \"" + v.get<std::string>() + "\"");
  const Json& k = member(doc, "kind", "");
  if (!k.is_string())
    fail("/kind", "expected a string");
  std::string kind = k.get<std::string>();
  if (kind != "star_algebra" && kind != "weak_kac" && kind != "action" && kind != "crossed_product")
    fail("/kind", "unknown kind \"" + kind + "\"");
  return kind;
}

StarAlgebra star_algebra_from_json(const Json& doc) {
  std::string kind = kind_of(doc);
  if (kind == "weak_kac")
    return weak_kac_from_json(doc).algebra();
  expect_kind(doc, "star_algebra");
  return algebra_fields(doc, dim_from_json(doc, ""), "");
}

WeakKacAlgebra weak_kac_from_json(const Json& doc) {
  expect_kind(doc, "weak_kac");
  const int n = dim_from_json(doc, "");
  AlgebraPtr alg = share(algebra_fields(member(doc, "algebra", ""), n, "/algebra"));
  Mat comult = matrix_from_json(member(doc, "comult", ""), Eigen::Index(n) * n, n, "/comult");
  Functional counit = vector_from_json(member(doc, "counit", ""), n, "/counit").transpose();
  Mat antipode = matrix_from_json(member(doc, "antipode", ""), n, n, "/antipode");
  return WeakKacAlgebra(alg, comult, counit, antipode);
}

ActionSpec action_from_json(const Json& doc, const Tolerance& tol) {
  expect_kind(doc, "action");
  const Json& side = member(doc, "side", "");
  if (!side.is_string() || (side != "left" && side != "right"))
    fail("/side", "expected \"left\" or \"right\"");
  const Json& kj = member(doc, "k", "");
  const Json& aj = member(doc, "a", "");
  WeakKacAlgebra k = nested("/k", [&] { return weak_kac_from_json(kj); });
  AlgebraPtr a = share(nested("/a", [&] { return star_algebra_from_json(aj); }));
  if (dim_from_json(doc, "") != a->dim())
    fail("/dim", "does not match the acted-on algebra");
  Mat act = matrix_from_json(member(doc, "act", ""), a->dim(), Eigen::Index(k.dim()) * a->dim(), "/act");
  return make_action(std::move(k), a, side == "left" ? Side::left : Side::right, act, tol);
}

CrossedProduct crossed_product_from_json(const Json& doc, const Tolerance& tol) {
  expect_kind(doc, "crossed_product");
  CrossedProduct cp;
  const Json& aj = member(doc, "action", "");
  const Json& cj = member(doc, "algebra", "");
  cp.spec = nested("/action", [&] { return action_from_json(aj, tol); });
  cp.algebra = share(nested("/algebra", [&] { return star_algebra_from_json(cj); }));
  const int q = dim_from_json(doc, "");
  if (q != cp.dim())
    fail("/dim", "does not match the carrier algebra");
  const Eigen::Index nv = cp.tensor_dim();
  const Json& rd = member(doc, "relations_dim", "");
  if (!rd.is_number_integer() || rd.get<long long>() < 0 || rd.get<long long>() > nv)
    fail("/relations_dim", "expected an integer between 0 and " + std::to_string(nv));
  cp.relations = matrix_from_json(member(doc, "relations", ""), nv, rd.get<Eigen::Index>(), "/relations");
  cp.section = matrix_from_json(member(doc, "section", ""), nv, q, "/section");
  cp.projection = matrix_from_json(member(doc, "projection", ""), q, nv, "/projection");
  cp.i_a = make_embedding(cp.spec.a, cp.algebra,
                          matrix_from_json(member(doc, "i_a", ""), q, cp.spec.dim_a(), "/i_a"));
  cp.i_k = make_embedding(cp.spec.k->algebra_ptr(), cp.algebra,
                          matrix_from_json(member(doc, "i_k", ""), q, cp.spec.dim_k(), "/i_k"));
  return cp;
}

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
}

std::string serialize(const Json& doc) { return doc.dump() + "\n"; }

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path);
  out << text;
}

} // namespace wka
