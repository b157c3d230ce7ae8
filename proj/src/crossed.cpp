#include "wka/crossed.hpp"

#include <algorithm>
#include <cmath>

#include "wka/linalg.hpp"
#include "wka/tensor.hpp"

namespace wka {

namespace {

// Basis vectors when n is small, random elements otherwise.
Mat probes(int n, Rng& rng, int limit = 12) {
  if (n <= limit)
    return Mat::Identity(n, n);
  Mat m(n, limit);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m(i) = rng.complex();
  return m;
}

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m(i) = rng.complex();
  return m;
}

// Columns op_j(x) for j over the basis of K.
Mat orbit(const ActionSpec& s, const Element& x) {
  Mat out(s.dim_a(), s.dim_k());
  for (int j = 0; j < s.dim_k(); ++j)
    out.col(j) = s.op(j) * x;
  return out;
}

Mat identity(int n) { return Mat::Identity(n, n); }

double scale_of(const Mat& m) { return std::max(1.0, max_abs(m)); }

} // namespace

const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

Mat ActionSpec::op(const Element& h) const {
  Mat out = Mat::Zero(dim_a(), dim_a());
  for (int i = 0; i < dim_k(); ++i)
    if (h(i) != cplx(0))
      out += h(i) * op(i);
  return out;
}

ActionSpec make_action(WeakKacAlgebra k, AlgebraPtr a, Side side, Mat act, const Tolerance& tol) {
  ActionSpec s;
  if (act.rows() != a->dim() || act.cols() != Eigen::Index(k.dim()) * a->dim())
    throw StructureError("action tensor has shape " + std::to_string(act.rows()) + "x" +
                         std::to_string(act.cols()) + ", expected " + std::to_string(a->dim()) + "x" +
                         std::to_string(k.dim() * a->dim()));
  s.data = std::make_shared<const WkaData>(analyze(k, tol));
  s.k = std::make_shared<const WeakKacAlgebra>(std::move(k));
  s.a = std::move(a);
  s.side = side;
  s.act = std::move(act);
  return s;
}

Report validate_action(const ActionSpec& s, const Tolerance& tol) {
  const StarAlgebra& A = *s.a;
  const WeakKacAlgebra& K = *s.k;
  const StarAlgebra& KA = K.algebra();
  const int na = A.dim(), nk = K.dim();
  const bool left = s.side == Side::left;
  Report r(std::string(side_name(s.side)) + " action");
  Rng rng(tol.seed ^ 0xac7104ULL);
  const double bound = 10.0 * tol.bound(scale_of(s.act) * scale_of(s.act));

  r.check("module_unit", max_abs(Mat(s.op(KA.unit()) - identity(na))), bound);

  Mat hs = probes(nk, rng), as = probes(na, rng);
  double module = 0.0;
  for (Eigen::Index i = 0; i < hs.cols(); ++i)
    for (Eigen::Index j = 0; j < hs.cols(); ++j) {
      Mat gh = s.op(KA.multiply(hs.col(i), hs.col(j)));
      Mat composed = left ? Mat(s.op(hs.col(i)) * s.op(hs.col(j))) : Mat(s.op(hs.col(j)) * s.op(hs.col(i)));
      module = std::max(module, max_abs(Mat(gh - composed)));
    }
  r.check("module_law", module, bound);

  // h |> ab = (h_(1) |> a)(h_(2) |> b); the right version has the same shape
  double mult = 0.0, star = 0.0;
  std::vector<Mat> orbits;
  for (Eigen::Index i = 0; i < as.cols(); ++i)
    orbits.push_back(orbit(s, as.col(i)));
  for (Eigen::Index h = 0; h < hs.cols(); ++h) {
    Element hv = hs.col(h);
    Mat t = K.delta(hv);
    Mat oh = s.op(hv);
    Mat oh_star = s.op(K.antipode(KA.star(hv)));
    for (Eigen::Index i = 0; i < as.cols(); ++i) {
      Mat pt = orbits[i] * t;
      for (Eigen::Index j = 0; j < as.cols(); ++j) {
        Element lhs = oh * A.multiply(as.col(i), as.col(j));
        Element rhs = A.structure() * flatten(Mat(pt * orbits[j].transpose()));
        mult = std::max(mult, max_abs(Element(lhs - rhs)));
      }
      Element sa = A.star(Element(oh * as.col(i)));
      star = std::max(star, max_abs(Element(sa - oh_star * A.star(as.col(i)))));
    }
  }
  r.check("multiplicative", mult, bound);
  r.check("star", star, bound);

  const Mat& eps = left ? s.data->counital.eps_t : s.data->counital.eps_s;
  double unit = 0.0;
  for (Eigen::Index h = 0; h < hs.cols(); ++h)
    unit = std::max(unit, max_abs(Element(s.op(hs.col(h)) * A.unit() - s.op(Element(eps * hs.col(h))) * A.unit())));
  r.check("unit_condition", unit, bound);

  // z -> z |> 1 is an injective *-homomorphism on the Cartan subalgebra
  const SubalgebraEmbedding& cartan = left ? s.data->cartan.kt : s.data->cartan.ks;
  const int nc = cartan.sub->dim();
  Mat images(na, nc);
  for (int i = 0; i < nc; ++i)
    images.col(i) = s.op(Element(cartan.emb.col(i))) * A.unit();
  r.require("cartan_injective", numerical_rank(images, tol) == nc,
            "rank " + std::to_string(numerical_rank(images, tol)) + " of " + std::to_string(nc));
  double hom = 0.0;
  for (int i = 0; i < nc; ++i) {
    Element zi = cartan.emb.col(i);
    hom = std::max(hom, max_abs(Element(s.op(Element(KA.star(zi))) * A.unit() - A.star(images.col(i)))));
    for (int j = 0; j < nc; ++j) {
      Element prod = s.op(KA.multiply(zi, cartan.emb.col(j))) * A.unit();
      hom = std::max(hom, max_abs(Element(prod - A.multiply(images.col(i), images.col(j)))));
    }
  }
  r.check("cartan_homomorphism", hom, bound);
  return r;
}

ActionSpec trivial_action(const WeakKacAlgebra& k, Side side, const Tolerance& tol) {
  auto data = std::make_shared<const WkaData>(analyze(k, tol));
  const bool left = side == Side::left;
  const SubalgebraEmbedding& c = left ? data->cartan.kt : data->cartan.ks;
  const Mat& eps = left ? data->counital.eps_t : data->counital.eps_s;
  const int nk = k.dim(), na = c.sub->dim();
  Mat act(na, Eigen::Index(nk) * na);
  for (int h = 0; h < nk; ++h)
    for (int a = 0; a < na; ++a) {
      Element prod = left ? k.algebra().multiply(k.algebra().basis(h), c.emb.col(a))
                          : k.algebra().multiply(c.emb.col(a), k.algebra().basis(h));
      act.col(Eigen::Index(h) * na + a) = c.coords * (eps * prod);
    }
  ActionSpec s;
  s.k = std::make_shared<const WeakKacAlgebra>(k);
  s.data = data;
  s.a = c.sub;
  s.side = side;
  s.act = act;
  return s;
}

ActionSpec dual_action(const WeakKacAlgebra& k, Side side, const Tolerance& tol) {
  const int n = k.dim();
  Mat act(n, Eigen::Index(n) * n);
  for (int a = 0; a < n; ++a) {
    Mat t = k.delta(k.algebra().basis(a));
    for (int i = 0; i < n; ++i)
      act.col(Eigen::Index(i) * n + a) = side == Side::left ? Element(t.col(i)) : Element(t.row(i).transpose());
  }
  return make_action(dual(k), k.algebra_ptr(), side, act, tol);
}

Element CrossedProduct::cls(const Element& a, const Element& h) const {
  return projection * (spec.side == Side::left ? kron(a, h) : kron(h, a));
}

Element CrossedProduct::tensor_multiply(const Element& u, const Element& v) const {
  const StarAlgebra& A = *spec.a;
  const WeakKacAlgebra& K = *spec.k;
  const int na = A.dim(), nk = K.dim();
  if (spec.side == Side::left) {
    // [a (x) h][b (x) k] = [a (h_(1) |> b) (x) h_(2) k]
    Mat U = unflatten(u, na, nk), V = unflatten(v, na, nk);
    Mat out = Mat::Zero(na, nk);
    for (int b = 0; b < na; ++b) {
      if (V.row(b).isZero(0.0))
        continue;
      Mat pb = orbit(spec, A.basis(b));
      Mat rv = K.algebra().right_matrix(Element(V.row(b).transpose()));
      for (int h = 0; h < nk; ++h) {
        if (U.col(h).isZero(0.0))
          continue;
        out += A.left_matrix(Element(U.col(h))) * pb * K.delta(K.algebra().basis(h)) * rv.transpose();
      }
    }
    return flatten(out);
  }
  // [h (x) a][k (x) b] = [h k_(1) (x) (a <| k_(2)) b]
  Mat U = unflatten(u, nk, na), V = unflatten(v, nk, na);
  Mat out = Mat::Zero(nk, na);
  for (int a = 0; a < na; ++a) {
    if (U.col(a).isZero(0.0))
      continue;
    Mat qa = orbit(spec, A.basis(a));
    Mat lu = K.algebra().left_matrix(Element(U.col(a)));
    for (int k = 0; k < nk; ++k) {
      if (V.row(k).isZero(0.0))
        continue;
      Mat rb = A.right_matrix(Element(V.row(k).transpose()));
      out += lu * K.delta(K.algebra().basis(k)) * (rb * qa).transpose();
    }
  }
  return flatten(out);
}

Element CrossedProduct::tensor_star(const Element& u) const {
  const StarAlgebra& A = *spec.a;
  const WeakKacAlgebra& K = *spec.k;
  const int na = A.dim(), nk = K.dim();
  const bool left = spec.side == Side::left;
  Mat out = left ? Mat::Zero(na, nk) : Mat::Zero(nk, na);
  for (int a = 0; a < na; ++a)
    for (int h = 0; h < nk; ++h) {
      cplx c = u(tensor_index(a, h));
      if (c == cplx(0))
        continue;
      Mat p = orbit(spec, A.star(A.basis(a)));
      Mat t = K.delta(K.algebra().star(K.algebra().basis(h)));
      // [(h_(1)^* |> a^*) (x) h_(2)^*] or [h_(1)^* (x) (a^* <| h_(2)^*)]
      out += std::conj(c) * (left ? Mat(p * t) : Mat(t * p.transpose()));
    }
  return flatten(out);
}

CrossedProduct crossed_product(const ActionSpec& spec, const Tolerance& tol) {
  const StarAlgebra& A = *spec.a;
  const WeakKacAlgebra& K = *spec.k;
  const StarAlgebra& KA = K.algebra();
  const int na = A.dim(), nk = K.dim();
  const bool left = spec.side == Side::left;
  CrossedProduct cp;
  cp.spec = spec;
  const int nv = na * nk;

  // a (z |> 1) (x) h - a (x) z h   or   h z (x) a - h (x) (1 <| z) a
  const SubalgebraEmbedding& c = left ? spec.data->cartan.kt : spec.data->cartan.ks;
  Mat gens(nv, Eigen::Index(na) * nk * c.sub->dim());
  Eigen::Index g = 0;
  for (int zi = 0; zi < c.sub->dim(); ++zi) {
    Element z = c.emb.col(zi);
    Element z1 = spec.op(z) * A.unit();
    for (int a = 0; a < na; ++a)
      for (int h = 0; h < nk; ++h) {
        if (left)
          gens.col(g++) = kron(A.multiply(A.basis(a), z1), KA.basis(h)) - kron(A.basis(a), KA.multiply(z, KA.basis(h)));
        else
          gens.col(g++) = kron(KA.multiply(KA.basis(h), z), A.basis(a)) - kron(KA.basis(h), A.multiply(z1, A.basis(a)));
      }
  }
  cp.relations = max_abs(gens) == 0.0 ? Mat(nv, 0) : range_basis(gens, tol);
  std::vector<int> idx = independent_columns(identity(nv), cp.relations, tol);
  const int q = int(idx.size());
  if (q + cp.relations.cols() != nv)
    throw DecompositionError("crossed_product: section and relations do not span A (x) K");
  cp.section = Mat::Zero(nv, q);
  for (int i = 0; i < q; ++i)
    cp.section(idx[i], i) = 1.0;
  Mat full(nv, nv);
  full << cp.section, cp.relations;
  cp.projection = full.partialPivLu().inverse().topRows(q);
  const bool trivial = cp.relations.cols() == 0;

  // well-definedness on a few random representatives before building tables
  Rng rng(tol.seed ^ 0xc40552ULL);
  if (!trivial) {
    double worst = 0.0;
    for (int t = 0; t < 6; ++t) {
      Element w = cp.relations * random_matrix(cp.relations.cols(), 1, rng);
      Element v = random_matrix(nv, 1, rng);
      worst = std::max({worst, max_abs(Element(cp.projection * cp.tensor_multiply(w, v))),
                        max_abs(Element(cp.projection * cp.tensor_multiply(v, w))),
                        max_abs(Element(cp.projection * cp.tensor_star(w)))});
    }
    if (worst > 1e3 * tol.bound(nv))
      throw VerificationError("crossed_product: multiplication is not well defined on the quotient (residual " +
                              std::to_string(worst) + ")");
  }

  std::vector<Mat> orbits(na), deltas(nk), rights(nk);
  for (int a = 0; a < na; ++a)
    orbits[a] = orbit(spec, A.basis(a));
  for (int h = 0; h < nk; ++h) {
    deltas[h] = K.delta(KA.basis(h));
    if (left)
      rights[h] = KA.right_matrix(KA.basis(h)).transpose();
  }
  auto split = [&](int index) {
    return left ? std::pair<int, int>{index / nk, index % nk} : std::pair<int, int>{index % na, index / na};
  };

  Mat structure(q, Eigen::Index(q) * q);
  Mat block(nv, q);
  for (int i = 0; i < q; ++i) {
    auto [a, h] = split(idx[i]);
    for (int j = 0; j < q; ++j) {
      auto [b, k] = split(idx[j]);
      Mat m = left ? Mat(A.left_basis(a) * orbits[b] * deltas[h] * rights[k])
                   : Mat(KA.left_basis(h) * deltas[k] * (A.right_matrix(A.basis(b)) * orbits[a]).transpose());
      block.col(j) = flatten(m);
    }
    // with no relations the section is the identity
    structure.middleCols(Eigen::Index(i) * q, q) = trivial ? block : Mat(cp.projection * block);
  }
  Mat invol(q, q);
  for (int i = 0; i < q; ++i)
    invol.col(i) = cp.projection * cp.tensor_star(Element(cp.section.col(i)));
  Element unit = cp.projection * (left ? kron(A.unit(), KA.unit()) : kron(KA.unit(), A.unit()));
  cp.algebra = share(StarAlgebra(structure, unit, invol));

  Mat ea(q, na), ek(q, nk);
  for (int a = 0; a < na; ++a)
    ea.col(a) = cp.cls(A.basis(a), KA.unit());
  for (int h = 0; h < nk; ++h)
    ek.col(h) = cp.cls(A.unit(), KA.basis(h));
  cp.i_a = make_embedding(spec.a, cp.algebra, ea);
  cp.i_k = make_embedding(K.algebra_ptr(), cp.algebra, ek);
  return cp;
}

Report verify_crossed_product(const CrossedProduct& cp, const Tolerance& tol, int samples) {
  Report r(std::string(side_name(cp.spec.side)) + " crossed product");
  const int nv = cp.tensor_dim(), q = cp.dim();
  r.merge(verify_star_algebra(*cp.algebra, tol), "carrier.");
  r.check("section", max_abs(Mat(cp.projection * cp.section - identity(q))), tol.bound(nv));
  double worst = 0.0;
  if (cp.relations.cols() > 0) {
    Rng rng(tol.seed ^ 0x3e11de7ULL);
    for (int t = 0; t < samples; ++t) {
      Element w = cp.relations * random_matrix(cp.relations.cols(), 1, rng);
      Element v = random_matrix(nv, 1, rng);
      worst = std::max({worst, max_abs(Element(cp.projection * cp.tensor_multiply(w, v))),
                        max_abs(Element(cp.projection * cp.tensor_multiply(v, w))),
                        max_abs(Element(cp.projection * cp.tensor_star(w)))});
    }
  }
  r.check("well_defined", worst, 10.0 * tol.bound(nv));
  r.merge(verify_embedding(cp.i_a, tol), "i_A.");
  r.merge(verify_embedding(cp.i_k, tol), "i_K.");
  const int na = cp.spec.dim_a(), nk = cp.spec.dim_k();
  Mat prods(q, Eigen::Index(na) * nk);
  for (int a = 0; a < na; ++a)
    for (int h = 0; h < nk; ++h) {
      Element x = cp.i_a.emb.col(a), y = cp.i_k.emb.col(h);
      prods.col(Eigen::Index(a) * nk + h) =
          cp.spec.side == Side::left ? cp.algebra->multiply(x, y) : cp.algebra->multiply(y, x);
    }
  int rank = numerical_rank(prods, tol);
  r.require("generated_by_images", rank == q, "rank " + std::to_string(rank) + " of " + std::to_string(q));
  r.values()["dim"] = q;
  r.values()["tensor_dim"] = nv;
  return r;
}

ActionSpec dual_action_on_crossed(const CrossedProduct& cp, const Tolerance& tol) {
  const WeakKacAlgebra& K = *cp.spec.k;
  const int nk = K.dim(), na = cp.spec.dim_a(), q = cp.dim();
  const bool left = cp.spec.side == Side::left;
  Mat act(q, Eigen::Index(nk) * q);
  double leak = 0.0;
  for (int i = 0; i < nk; ++i) {
    Mat d(nk, nk);
    for (int x = 0; x < nk; ++x) {
      Mat t = K.delta(K.algebra().basis(x));
      d.col(x) = left ? Element(t.col(i)) : Element(t.row(i).transpose());
    }
    Mat lifted = left ? kron(identity(na), d) : kron(d, identity(na));
    if (cp.relations.cols() > 0)
      leak = std::max(leak, max_abs(Mat(cp.projection * lifted * cp.relations)));
    act.middleCols(Eigen::Index(i) * q, q) = cp.projection * lifted * cp.section;
  }
  if (leak > 1e3 * tol.bound(q))
    throw VerificationError("dual action is not well defined on the crossed product (residual " +
                            std::to_string(leak) + ")");
  return make_action(dual(K), cp.algebra, cp.spec.side, act, tol);
}

Report trivial_crossed_isomorphism(const WeakKacAlgebra& k, Side side, const Tolerance& tol) {
  ActionSpec spec = trivial_action(k, side, tol);
  CrossedProduct cp = crossed_product(spec, tol);
  const bool left = side == Side::left;
  const SubalgebraEmbedding& c = left ? spec.data->cartan.kt : spec.data->cartan.ks;
  const StarAlgebra& KA = k.algebra();
  const int na = spec.dim_a(), nk = k.dim();
  Mat phi_v(nk, cp.tensor_dim());
  for (int a = 0; a < na; ++a)
    for (int h = 0; h < nk; ++h)
      phi_v.col(cp.tensor_index(a, h)) = left ? KA.multiply(c.emb.col(a), KA.basis(h))
                                              : KA.multiply(KA.basis(h), c.emb.col(a));
  Mat phi = phi_v * cp.section;
  Report r(left ? "K_t >< K = K" : "K >< K_s = K");
  r.check("well_defined", cp.relations.cols() ? max_abs(Mat(phi_v * cp.relations)) : 0.0, tol.bound());
  r.require("bijective", cp.dim() == nk && numerical_rank(phi, tol) == nk,
            "dim " + std::to_string(cp.dim()) + ", dim K " + std::to_string(nk));
  r.check("unital", max_abs(Element(phi * cp.algebra->unit() - KA.unit())), tol.bound());
  r.check("multiplicative", homomorphism_residual(*cp.algebra, KA, phi), tol.bound());
  r.check("star_preserving", star_residual(*cp.algebra, KA, phi), tol.bound());
  r.values()["dim"] = cp.dim();
  return r;
}

ConditionalExpectation crossed_expectation(const CrossedProduct& cp, const Tolerance& tol) {
  const ActionSpec& s = cp.spec;
  const StarAlgebra& A = *s.a;
  const bool left = s.side == Side::left;
  const Mat& e = left ? s.data->expectations.et_full : s.data->expectations.es_full;
  const int na = A.dim(), nk = s.dim_k();
  Mat ev(na, cp.tensor_dim());
  for (int h = 0; h < nk; ++h) {
    Element one = s.op(Element(e.col(h))) * A.unit();
    for (int a = 0; a < na; ++a)
      ev.col(cp.tensor_index(a, h)) = left ? A.multiply(A.basis(a), one) : A.multiply(one, A.basis(a));
  }
  if (cp.relations.cols() > 0) {
    double leak = max_abs(Mat(ev * cp.relations));
    if (leak > 1e3 * tol.bound(na))
      throw VerificationError("E_A is not well defined on the crossed product (residual " + std::to_string(leak) + ")");
  }
  return ConditionalExpectation{cp.i_a, ev * cp.section};
}

CrossedBasis crossed_basis(const CrossedProduct& cp, const ConditionalExpectation& ea, const Tolerance& tol) {
  if (cp.spec.side != Side::left)
    throw StructureError("crossed_basis: left crossed products only");
  const WeakKacAlgebra& K = *cp.spec.k;
  const WkaData& d = *cp.spec.data;
  MarkovLambda ml = markov_lambda(K, d, tol);
  if (!ml.scalar)
    throw VerificationError("crossed_basis: K is not lambda-Markov");
  EsBasis xs = construct_es_basis(K, d, ml.lambda, tol);
  EsBasis ys = et_basis_from_es(K, d, xs.x, tol);
  CrossedBasis out;
  out.u = cp.i_k.emb * ys.x;
  out.result = verify_quasi_basis(ea, out.u, tol);
  const StarAlgebra& B = *cp.algebra;
  const int n = int(out.u.cols());
  double orth = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Element g = ea.apply(B.multiply(B.star(out.u.col(i)), out.u.col(j)));
      Element expected = i == j ? ea.e.sub->unit() : ea.e.sub->zero();
      orth = std::max(orth, max_abs(Element(g - expected)));
    }
  out.result.report.check("orthonormal", orth, tol.bound(n));
  out.result.report.check("index_is_lambda_inverse",
                          max_abs(Element(out.result.index - B.unit() / ml.lambda)), tol.bound(n));
  return out;
}

Duality duality_isomorphism(const ActionSpec& spec, const Tolerance& tol) {
  if (spec.side != Side::left)
    throw StructureError("duality_isomorphism: left actions only");
  Duality out;
  Report& r = out.report;
  r = Report("duality");
  out.cp = crossed_product(spec, tol);
  ActionSpec dspec = dual_action_on_crossed(out.cp, tol);
  r.merge(validate_action(dspec, tol), "dual_action.");
  out.cp2 = crossed_product(dspec, tol);
  const CrossedProduct& cp = out.cp;
  const CrossedProduct& cp2 = out.cp2;
  const StarAlgebra& A = *spec.a;
  const StarAlgebra& B = *cp.algebra;
  const StarAlgebra& C = *cp2.algebra;
  const int na = A.dim(), nb = B.dim(), nc = C.dim();

  MarkovLambda ml = markov_lambda(*spec.k, *spec.data, tol);
  if (!ml.scalar)
    throw VerificationError("duality_isomorphism: K is not lambda-Markov");
  const double lambda = ml.lambda;
  out.n = int(std::llround(1.0 / lambda));
  const int n = out.n;

  ConditionalExpectation ea = crossed_expectation(cp, tol);
  ConditionalExpectation eb = crossed_expectation(cp2, tol);
  r.merge(verify_conditional_expectation(ea, tol), "E_A.");

  out.jones = cp2.i_k.embed(Element(spec.data->tau.transpose()));
  const Element& e = out.jones;
  r.check("jones_idempotent", max_abs(Element(C.multiply(e, e) - e)), tol.bound());
  r.check("jones_self_adjoint", max_abs(Element(C.star(e) - e)), tol.bound());

  Mat ia = cp2.i_a.emb * cp.i_a.emb;  // A -> cp2
  double exe = 0.0;
  for (int x = 0; x < nb; ++x) {
    Element lhs = C.multiply(C.multiply(e, cp2.i_a.emb.col(x)), e);
    Element rhs = C.multiply(Element(ia * ea.apply(B.basis(x))), e);
    exe = std::max(exe, max_abs(Element(lhs - rhs)));
  }
  r.check("exe.compression", exe, 10.0 * tol.bound());
  Mat ae(nc, na);
  for (int a = 0; a < na; ++a)
    ae.col(a) = C.multiply(ia.col(a), e);
  r.require("exe.injective", numerical_rank(ae, tol) == na);
  Element ee = eb.apply(e);
  r.check("exe.expectation_of_jones", max_abs(Element(ee - lambda * B.unit())), 10.0 * tol.bound());

  Mat beb(nc, Eigen::Index(nb) * nb);
  for (int i = 0; i < nb; ++i) {
    Element left = C.multiply(cp2.i_a.emb.col(i), e);
    for (int j = 0; j < nb; ++j)
      beb.col(Eigen::Index(i) * nb + j) = C.multiply(left, cp2.i_a.emb.col(j));
  }
  int span = numerical_rank(beb, tol);
  r.require("beb.spanning", span == nc, "rank " + std::to_string(span) + " of " + std::to_string(nc));

  // rho(x)_ij = E_A(u_i^* (x . u_j)), [c (x) phi] acting by y -> c (phi |> y)
  CrossedBasis basis = crossed_basis(cp, ea, tol);
  r.merge(basis.result.report, "basis.");
  const Mat& u = basis.u;
  const int nk = dspec.dim_k();
  auto op_of = [&](int index) {
    int c = index / nk, phi = index % nk;
    return Mat(B.left_basis(c) * dspec.op(phi));
  };
  double leak = 0.0;
  for (Eigen::Index w = 0; w < cp2.relations.cols(); ++w) {
    Mat acc = Mat::Zero(nb, nb);
    for (int v = 0; v < cp2.tensor_dim(); ++v)
      if (std::abs(cp2.relations(v, w)) > 0.0)
        acc += cp2.relations(v, w) * op_of(v);
    leak = std::max(leak, max_abs(acc));
  }
  r.check("representation_well_defined", leak, 10.0 * tol.bound(nb));

  out.matrices = share(tensor_product(matrix_algebra(n), A));
  out.rho = Mat::Zero(Eigen::Index(n) * n * na, nc);
  Mat ustar(nb, n);
  for (int i = 0; i < n; ++i)
    ustar.col(i) = B.star(u.col(i));
  for (int m = 0; m < nc; ++m) {
    Mat op = Mat::Zero(nb, nb);
    for (int v = 0; v < cp2.tensor_dim(); ++v)
      if (std::abs(cp2.section(v, m)) > 0.0)
        op += cp2.section(v, m) * op_of(v);
    Mat xu = op * u;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.rho.block((Eigen::Index(i) * n + j) * na, m, na, 1) = ea.apply(B.multiply(ustar.col(i), xu.col(j)));
  }
  const StarAlgebra& M = *out.matrices;
  r.check("rho.unital", max_abs(Element(out.rho * C.unit() - M.unit())), 10.0 * tol.bound());
  r.check("rho.multiplicative", homomorphism_residual(C, M, out.rho), 10.0 * tol.bound(n));
  r.check("rho.star_preserving", star_residual(C, M, out.rho), 10.0 * tol.bound(n));
  int rank = numerical_rank(out.rho, tol);
  r.require("rho.injective", rank == nc, "rank " + std::to_string(rank) + " of " + std::to_string(nc));
  r.require("dimension", nc == n * n * na,
            std::to_string(nc) + " against n^2 dim A = " + std::to_string(n * n * na));
  r.values()["n"] = n;
  r.values()["dim_A"] = na;
  r.values()["dim_crossed"] = nb;
  r.values()["dim_double_crossed"] = nc;
  return out;
}

Mat transpose_map(int k) {
  Mat t = Mat::Zero(Eigen::Index(k) * k, Eigen::Index(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      t(Eigen::Index(j) * k + i, Eigen::Index(i) * k + j) = 1.0;
  return t;
}

Mat separability_projection(const StarAlgebra& a, const Mat& s_a, const Tolerance& tol) {
  BlockDecomposition dec = block_decompose(a, tol);
  MatrixUnitSystem mu = matrix_units(a, dec, tol);
  Mat p = Mat::Zero(a.dim(), a.dim());
  for (int al = 0; al < int(mu.block_dims.size()); ++al) {
    const int m = mu.block_dims[al];
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s)
        p += outer(mu.unit(al, r, s), Element(s_a * mu.unit(al, s, r))) / double(m);
  }
  return p;
}

Report verify_two_sided_input(const TwoSidedInput& in, const Tolerance& tol) {
  Report r("two-sided input");
  const StarAlgebra& A = *in.a;
  const int na = A.dim();
  r.require("kac_algebra", is_kac_algebra(*in.h, tol), "H must have trivial Cartan subalgebras");
  r.require("left_action_side", in.left.side == Side::left);
  r.require("right_action_side", in.right.side == Side::right);
  r.merge(validate_action(in.left, tol), "left.");
  r.merge(validate_action(in.right, tol), "right.");

  double anti = 0.0;
  for (int i = 0; i < na; ++i) {
    anti = std::max(anti, max_abs(Element(in.s_a * A.star(A.basis(i)) - A.star(Element(in.s_a.col(i))))));
    for (int j = 0; j < na; ++j)
      anti = std::max(anti, max_abs(Element(in.s_a * A.multiply(A.basis(i), A.basis(j)) -
                                            A.multiply(in.s_a.col(j), in.s_a.col(i)))));
  }
  r.check("antipode_anti_automorphism", anti, tol.bound());
  bool invertible = numerical_rank(in.s_a, tol) == na;
  r.require("antipode_invertible", invertible);
  if (!invertible)
    return r;
  Mat s_inv = in.s_a.inverse();

  const Mat& p = in.p;
  r.check("p_idempotent", max_abs(Mat(wka::tensor_multiply(A, A, p, p) - p)), tol.bound());
  r.check("p_self_adjoint", max_abs(Mat(wka::tensor_star(A, A, p) - p)), tol.bound());
  r.check("p_separability_left", max_abs(Element(tensor_contract(A, p * s_inv.transpose()) - A.unit())), tol.bound());
  r.check("p_separability_right", max_abs(Element(tensor_contract(A, in.s_a * p) - A.unit())), tol.bound());
  Functional tau = regular_trace(A);
  r.check("p_trace_right", max_abs(Element(p * tau.transpose() - A.unit())), tol.bound(na));
  r.check("p_trace_left", max_abs(Element((tau * p).transpose() - A.unit())), tol.bound(na));
  double compat = 0.0;
  for (int h = 0; h < in.h->dim(); ++h)
    compat = std::max(compat, max_abs(Mat(p * in.left.op(h).transpose() - in.right.op(h) * p)));
  r.check("p_compatible_with_actions", compat, tol.bound());
  return r;
}

TwoSided two_sided_crossed_product(const TwoSidedInput& in, const Tolerance& tol) {
  Report pre = verify_two_sided_input(in, tol);
  if (!pre.passed())
    throw VerificationError("two-sided crossed product: precondition " + pre.first_failure()->name + " fails");
  const WeakKacAlgebra& H = *in.h;
  const StarAlgebra& HA = H.algebra();
  const StarAlgebra& A = *in.a;
  const int na = A.dim(), nh = H.dim();
  const int n = na * na * nh;
  auto idx = [&](int b, int h, int a) { return (b * nh + h) * na + a; };

  std::vector<Mat> deltas(nh), hr(nh), opl(nh), opr(nh);
  for (int h = 0; h < nh; ++h) {
    deltas[h] = H.delta(HA.basis(h));
    opl[h] = in.left.op(h);
    opr[h] = in.right.op(h);
    hr[h].resize(nh, nh);
    for (int l = 0; l < nh; ++l)
      for (int j = 0; j < nh; ++j)
        hr[h](l, j) = HA.structure()(h, Eigen::Index(l) * nh + j);
  }
  auto orbit_l = [&](const Element& x) {
    Mat o(na, nh);
    for (int j = 0; j < nh; ++j)
      o.col(j) = opl[j] * x;
    return o;
  };
  auto orbit_r = [&](const Element& x) {
    Mat o(na, nh);
    for (int j = 0; j < nh; ++j)
      o.col(j) = opr[j] * x;
    return o;
  };
  // (Delta (x) id) Delta(h) as nh slices: t3[k](j1, j2)
  auto triple = [&](const Element& h) {
    Mat t = H.delta(h);
    std::vector<Mat> t3(nh, Mat::Zero(nh, nh));
    for (int j = 0; j < nh; ++j)
      for (int k = 0; k < nh; ++k)
        if (t(j, k) != cplx(0))
          t3[k] += t(j, k) * deltas[j];
    return t3;
  };
  // multiplication
  Mat structure = Mat::Zero(n, Eigen::Index(n) * n);
  std::vector<Mat> ol(na), or_(na);
  for (int x = 0; x < na; ++x) {
    ol[x] = orbit_l(A.basis(x));
    or_[x] = orbit_r(A.basis(x));
  }
  for (int b = 0; b < na; ++b)
    for (int h = 0; h < nh; ++h)
      for (int a = 0; a < na; ++a)
        for (int b2 = 0; b2 < na; ++b2)
          for (int h2 = 0; h2 < nh; ++h2)
            for (int a2 = 0; a2 < na; ++a2) {
              // b (h_(1) |> b') (x) h_(2) h'_(1) (x) (a <| h'_(2)) a'
              Mat a1 = A.left_basis(b) * ol[b2] * deltas[h];
              Mat a2m = deltas[h2] * (A.right_matrix(A.basis(a2)) * or_[a]).transpose();
              Eigen::Index col = Eigen::Index(idx(b, h, a)) * n + idx(b2, h2, a2);
              for (int r = 0; r < nh; ++r) {
                Mat slab = a1 * hr[r] * a2m;
                for (int p = 0; p < na; ++p)
                  for (int s = 0; s < na; ++s)
                    structure(idx(p, r, s), col) = slab(p, s);
              }
            }

  // involution (h_(1)^* |> b^*) (x) h_(2)^* (x) (a^* <| h_(3)^*)
  Mat invol = Mat::Zero(n, n);
  for (int b = 0; b < na; ++b)
    for (int h = 0; h < nh; ++h) {
      std::vector<Mat> t3 = triple(HA.star(HA.basis(h)));
      Mat pb = orbit_l(A.star(A.basis(b)));
      for (int a = 0; a < na; ++a) {
        Mat pa = orbit_r(A.star(A.basis(a)));
        for (int r = 0; r < nh; ++r) {
          Mat slab = Mat::Zero(na, na);
          for (int k = 0; k < nh; ++k)
            slab += pb * t3[k].col(r) * pa.col(k).transpose();
          for (int p = 0; p < na; ++p)
            for (int s = 0; s < na; ++s)
              invol(idx(p, r, s), idx(b, h, a)) = slab(p, s);
        }
      }
    }
  Element unit = kron(kron(A.unit(), HA.unit()), A.unit());
  AlgebraPtr alg = share(StarAlgebra(structure, unit, invol));

  // Delta(b (x) h (x) a) = (b (x) h_(1) (x) 1_(1)) (x) ((h_(2) |> 1_(2)) (x) h_(3) (x) a)
  std::vector<Mat> pl(nh);
  for (int l = 0; l < nh; ++l)
    pl[l] = in.p * opl[l].transpose();
  Mat comult = Mat::Zero(Eigen::Index(n) * n, n);
  for (int h = 0; h < nh; ++h) {
    std::vector<Mat> t3 = triple(HA.basis(h));
    for (int b = 0; b < na; ++b)
      for (int a = 0; a < na; ++a) {
        Mat d = Mat::Zero(n, n);
        for (int j = 0; j < nh; ++j)
          for (int m = 0; m < nh; ++m) {
            Mat acc = Mat::Zero(na, na);
            for (int l = 0; l < nh; ++l)
              if (t3[m](j, l) != cplx(0))
                acc += t3[m](j, l) * pl[l];
            for (int p = 0; p < na; ++p)
              for (int c = 0; c < na; ++c)
                d(idx(b, j, p), idx(c, m, a)) = acc(p, c);
          }
        comult.col(idx(b, h, a)) = flatten(d);
      }
  }

  // eps(b (x) h (x) a) = tau(S_A^{-1}(S(h) |> b) a), S(b (x) h (x) a) = S_A(a) (x) S_H(h) (x) S_A^{-1}(b)
  Functional tau = regular_trace(A);
  Functional counit(1, n);
  Mat antipode(n, n);
  Mat s_inv = in.s_a.inverse();
  for (int b = 0; b < na; ++b)
    for (int h = 0; h < nh; ++h) {
      Mat os = in.left.op(H.antipode(HA.basis(h)));
      for (int a = 0; a < na; ++a) {
        counit(idx(b, h, a)) = (tau * A.multiply(s_inv * (os * A.basis(b)), A.basis(a)))(0);
        antipode.col(idx(b, h, a)) =
            kron(kron(Element(in.s_a.col(a)), Element(H.antipode().col(h))), Element(s_inv.col(b)));
      }
    }

  TwoSided out;
  out.k = std::make_shared<const WeakKacAlgebra>(alg, comult, counit, antipode);
  const WeakKacAlgebra& K = *out.k;
  Report& r = out.report;
  r = Report("two-sided crossed product");
  r.merge(pre, "input.");
  Report axioms = verify_wka(K, tol);
  if (!axioms.passed()) {
    const Check* worst = nullptr;
    for (const Check& c : axioms.checks())
      if (!c.pass && (!worst || c.residual > worst->residual))
        worst = &c;
    throw VerificationError("two-sided crossed product violates " + worst->name);
  }
  r.merge(axioms, "wka.");

  WkaData d = analyze(K, tol);
  Mat ks(n, na), kt(n, na);
  for (int a = 0; a < na; ++a) {
    ks.col(a) = kron(kron(A.unit(), HA.unit()), A.basis(a));
    kt.col(a) = kron(kron(A.basis(a), HA.unit()), A.unit());
  }
  r.require("source_cartan_dim", d.cartan.ks.sub->dim() == na);
  r.require("target_cartan_dim", d.cartan.kt.sub->dim() == na);
  r.check("source_cartan", d.cartan.ks.distance(ks), tol.bound(na));
  r.check("target_cartan", d.cartan.kt.distance(kt), tol.bound(na));

  Mat stack_l(Eigen::Index(nh) * na, na), stack_r(Eigen::Index(nh) * na, na);
  for (int h = 0; h < nh; ++h) {
    cplx e = H.counit(HA.basis(h));
    stack_l.middleRows(Eigen::Index(h) * na, na) = opl[h] - e * identity(na);
    stack_r.middleRows(Eigen::Index(h) * na, na) = opr[h] - e * identity(na);
  }
  out.fixed_left = int(null_space(stack_l, tol).cols());
  out.fixed_right = int(null_space(stack_r, tol).cols());
  r.values()["dim"] = n;
  r.values()["fixed_points_left"] = out.fixed_left;
  r.values()["fixed_points_right"] = out.fixed_right;
  Biconnectivity bc = biconnectivity(K, tol);
  r.values()["connected"] = bc.primal.connected;
  r.values()["dual_connected"] = bc.dual.connected;
  r.values()["biconnected"] = bc.biconnected();
  r.require("dual_connected", bc.dual.connected, "K_s cap K_t = C");
  if (out.fixed_left == 1 && out.fixed_right == 1)
    r.require("biconnected_when_fixed_points_trivial", bc.biconnected());
  return out;
}

TwoSidedInput kac_subalgebra_example(const WeakKacAlgebra& h, const Mat& basis, const Tolerance& tol) {
  if (!is_kac_algebra(h, tol))
    throw StructureError("kac_subalgebra_example: H must be a Kac algebra");
  WeakKacAlgebra hd = dual(h);
  SubalgebraEmbedding sub = make_subalgebra(hd.algebra_ptr(), basis, tol);
  const int na = sub.sub->dim(), nh = h.dim();
  Mat comult(Eigen::Index(na) * na, na);
  double closure = 0.0;
  for (int i = 0; i < na; ++i) {
    Mat t = hd.delta(Element(sub.emb.col(i)));
    Mat c = sub.coords * t * sub.coords.transpose();
    closure = std::max(closure, max_abs(Mat(sub.emb * c * sub.emb.transpose() - t)));
    comult.col(i) = flatten(c);
  }
  Mat s = sub.coords * hd.antipode() * sub.emb;
  closure = std::max(closure, max_abs(Mat(sub.emb * s - hd.antipode() * sub.emb)));
  if (closure > 1e3 * tol.bound(nh))
    throw StructureError("kac_subalgebra_example: span is not a Kac subalgebra of H* (residual " +
                         std::to_string(closure) + ")");
  WeakKacAlgebra a_kac(sub.sub, comult, Functional(hd.counit() * sub.emb), s);
  Report ra = verify_wka(a_kac, tol);
  if (!ra.passed())
    throw StructureError("kac_subalgebra_example: subalgebra fails " + ra.first_failure()->name);

  Element p = haar_projection(a_kac, counital_maps(a_kac), tol);
  Mat act_l(na, Eigen::Index(nh) * na), act_r(na, Eigen::Index(nh) * na);
  for (int x = 0; x < nh; ++x) {
    Element pairing = sub.emb.transpose() * h.algebra().basis(x);  // <x_h, a_q>
    for (int a = 0; a < na; ++a) {
      Mat c = a_kac.delta(sub.sub->basis(a));
      act_l.col(Eigen::Index(x) * na + a) = c * pairing;              // a_(1) <h, a_(2)>
      act_r.col(Eigen::Index(x) * na + a) = c.transpose() * pairing;  // <h, a_(1)> a_(2)
    }
  }
  TwoSidedInput in;
  in.h = std::make_shared<const WeakKacAlgebra>(h);
  in.a = sub.sub;
  in.left = make_action(h, sub.sub, Side::left, act_l, tol);
  in.right = make_action(h, sub.sub, Side::right, act_r, tol);
  in.s_a = s;
  in.p = a_kac.delta(p);
  return in;
}

TwoSidedInput trivial_two_sided_input(AlgebraPtr a, const Mat& s_a, const Tolerance& tol) {
  IntMat table(1, 1);
  table(0, 0) = 0;
  WeakKacAlgebra h = from_group(table);
  const int na = a->dim();
  TwoSidedInput in;
  in.h = std::make_shared<const WeakKacAlgebra>(h);
  in.a = a;
  in.left = make_action(h, a, Side::left, identity(na), tol);
  in.right = make_action(h, a, Side::right, identity(na), tol);
  in.s_a = s_a;
  in.p = separability_projection(*a, s_a, tol);
  return in;
}

Report centralizer_check(const CrossedProduct& cp, const Tolerance& tol) {
  Report r("centralizer");
  if (cp.spec.side != Side::right)
    throw StructureError("centralizer_check: right crossed products only");
  const StarAlgebra& C = *cp.algebra;
  const SubalgebraEmbedding& kt = cp.spec.data->cartan.kt;
  Mat z = cp.i_k.emb * kt.emb;
  double comm = 0.0;
  for (Eigen::Index i = 0; i < z.cols(); ++i)
    for (Eigen::Index a = 0; a < cp.i_a.emb.cols(); ++a) {
      Element x = z.col(i), y = cp.i_a.emb.col(a);
      comm = std::max(comm, max_abs(Element(C.multiply(x, y) - C.multiply(y, x))));
    }
  r.check("target_cartan_commutes_with_A", comm, tol.bound());
  Mat rel = commutant(C, cp.i_a.emb, tol);
  const int kt_dim = int(z.cols());
  r.flag("minimal", rel.cols() == kt_dim,
         "dim A' cap K >< A = " + std::to_string(rel.cols()) + ", dim K_t = " + std::to_string(kt_dim));
  r.values()["relative_commutant_dim"] = rel.cols();
  r.values()["target_cartan_dim"] = kt_dim;
  return r;
}

} // namespace wka
