#include "wka/weak_kac.hpp"

#include <algorithm>
#include <numeric>

#include "wka/linalg.hpp"
#include "wka/tensor.hpp"

namespace wka {

WeakKacAlgebra::WeakKacAlgebra(AlgebraPtr alg, Mat comult, Functional counit, Mat antipode)
    : alg_(std::move(alg)), comult_(std::move(comult)), counit_(std::move(counit)),
      antipode_(std::move(antipode)) {
  if (!alg_)
    throw StructureError("weak Kac algebra: missing algebra");
  const Eigen::Index n = alg_->dim();
  if (comult_.rows() != n * n || comult_.cols() != n)
    throw StructureError("weak Kac algebra: comultiplication must be n^2 x n (n = " + std::to_string(n) + ")");
  if (counit_.size() != n)
    throw StructureError("weak Kac algebra: counit must have length n");
  if (antipode_.rows() != n || antipode_.cols() != n)
    throw StructureError("weak Kac algebra: antipode must be n x n");
  if (!comult_.allFinite() || !counit_.allFinite() || !antipode_.allFinite())
    throw StructureError("weak Kac algebra: non-finite entries");
}

Mat WeakKacAlgebra::delta(const Element& x) const {
  return unflatten(comult_ * x, dim(), dim());
}

namespace {

std::vector<Mat> all_deltas(const WeakKacAlgebra& k) {
  std::vector<Mat> d;
  d.reserve(k.dim());
  for (int i = 0; i < k.dim(); ++i)
    d.push_back(unflatten(k.comult().col(i), k.dim(), k.dim()));
  return d;
}

// indices to test: all of them when cheap enough, otherwise a seeded sample
std::vector<int> sample_indices(int n, int full_limit, int samples, Rng& rng) {
  std::vector<int> out;
  if (n <= full_limit) {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
  } else {
    for (int s = 0; s < samples; ++s)
      out.push_back(int(rng.index(std::size_t(n))));
  }
  return out;
}

} // namespace

CounitalData counital_maps(const WeakKacAlgebra& k) {
  const StarAlgebra& a = k.algebra();
  const int n = k.dim();
  Mat d1 = k.delta(a.unit());
  CounitalData c;
  c.eps_s.resize(n, n);
  c.eps_t.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Functional el = k.counit() * a.left_basis(i);       // y -> eps(x_i y)
    c.eps_s.col(i) = d1 * el.transpose();
    Functional er = k.counit() * a.right_matrix(a.basis(i));  // y -> eps(y x_i)
    c.eps_t.col(i) = (er * d1).transpose();
  }
  return c;
}

Report verify_wka(const WeakKacAlgebra& k, const Tolerance& tol) {
  Report r("weak Kac algebra");
  const StarAlgebra& a = k.algebra();
  const int n = k.dim();
  const Mat& s = k.antipode();
  const Functional& eps = k.counit();
  const double scale = std::max({1.0, max_abs(k.comult()), max_abs(a.structure()), max_abs(s)});
  const double bound = tol.bound(scale * scale * scale);
  Rng rng(tol.seed ^ 0x776b61ULL);

  std::vector<Mat> d = all_deltas(k);
  CounitalData c = counital_maps(k);
  Mat d1 = k.delta(a.unit());
  Mat ident = Mat::Identity(n, n);

  double coassoc = 0.0;
  for (int i : sample_indices(n, 40, 8, rng)) {
    Mat m1 = k.comult() * d[i];                   // (Delta (x) id)Delta, row a*n+b, col c
    Mat m2 = d[i] * k.comult().transpose();       // (id (x) Delta)Delta, row a, col b*n+c
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int t = 0; t < n; ++t)
          coassoc = std::max(coassoc, std::abs(m1(Eigen::Index(p) * n + q, t) - m2(p, Eigen::Index(q) * n + t)));
  }
  r.check("coassociativity", coassoc, bound);

  double cl = 0.0, cr = 0.0;
  for (int i = 0; i < n; ++i) {
    cl = std::max(cl, max_abs(Element((eps * d[i]).transpose() - a.basis(i))));
    cr = std::max(cr, max_abs(Element(d[i] * eps.transpose() - a.basis(i))));
  }
  r.check("counit_left", cl, bound);
  r.check("counit_right", cr, bound);

  // (2) eps_s(x) y = (id (x) eps)((1 (x) x)Delta(y))
  // (2') x eps_t(y) = (eps (x) id)(Delta(x)(y (x) 1))
  double ax2 = 0.0, ax2p = 0.0;
  for (int i = 0; i < n; ++i) {
    Element v = (eps * a.left_basis(i)).transpose();
    Mat ls = a.left_matrix(c.eps_s.col(i));
    Mat lx = a.left_basis(i);
    Mat lhs2p = lx * c.eps_t;
    for (int j = 0; j < n; ++j) {
      ax2 = std::max(ax2, max_abs(Element(ls.col(j) - d[j] * v)));
      Element w = (eps * a.right_matrix(a.basis(j))).transpose();
      ax2p = std::max(ax2p, max_abs(Element(lhs2p.col(j) - d[i].transpose() * w)));
    }
  }
  r.check("axiom_2", ax2, bound);
  r.check("axiom_2p", ax2p, bound);

  double ax3 = 0.0, ax3p = 0.0, ax4 = 0.0, ax4p = 0.0;
  for (int i = 0; i < n; ++i) {
    Mat lx = a.left_basis(i);
    ax3 = std::max(ax3, max_abs(Mat(c.eps_s * d[i] - d1 * lx.transpose())));
    ax3p = std::max(ax3p, max_abs(Mat(d[i] * c.eps_t.transpose() - a.right_matrix(a.basis(i)) * d1)));
    ax4 = std::max(ax4, max_abs(Element(tensor_contract(a, s * d[i]) - c.eps_s.col(i))));
    ax4p = std::max(ax4p, max_abs(Element(tensor_contract(a, d[i] * s.transpose()) - c.eps_t.col(i))));
  }
  r.check("axiom_3", ax3, bound);
  r.check("axiom_4", ax4, bound);
  r.check("axiom_3p", ax3p, bound);
  r.check("axiom_4p", ax4p, bound);

  double mult = 0.0;
  if (n <= 20) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Mat lhs = k.delta(a.left_basis(i).col(j));
        mult = std::max(mult, max_abs(Mat(lhs - tensor_multiply(a, a, d[i], d[j]))));
      }
  } else {
    for (int t = 0; t < 60; ++t) {
      int i = int(rng.index(std::size_t(n))), j = int(rng.index(std::size_t(n)));
      Mat lhs = k.delta(a.left_basis(i).col(j));
      mult = std::max(mult, max_abs(Mat(lhs - tensor_multiply(a, a, d[i], d[j]))));
    }
  }
  r.check("comult_multiplicative", mult, bound);

  double cstar = 0.0, santi = 0.0, sco = 0.0;
  std::vector<Mat> ls(n);
  for (int j = 0; j < n; ++j)
    ls[j] = a.left_matrix(s.col(j));
  for (int i = 0; i < n; ++i) {
    cstar = std::max(cstar, max_abs(Mat(k.delta(a.involution().col(i)) - tensor_star(a, a, d[i]))));
    Mat lhs = s * a.left_basis(i);
    for (int j = 0; j < n; ++j)
      santi = std::max(santi, max_abs(Element(lhs.col(j) - ls[j] * s.col(i))));
    sco = std::max(sco, max_abs(Mat(k.delta(s.col(i)) - s * d[i].transpose() * s.transpose())));
  }
  r.check("comult_star", cstar, bound);
  r.check("antipode_involutive", max_abs(Mat(s * s - ident)), bound);
  r.check("antipode_antimultiplicative", santi, bound);
  r.check("antipode_anticomultiplicative", sco, bound);
  r.check("antipode_star", max_abs(Mat(s * a.involution() - a.involution() * s.conjugate())), bound);
  r.check("counit_hermitian", max_abs(Mat(eps * a.involution() - eps.conjugate())), bound);

  // eps(x^* x) >= 0: the Gram matrix eps(x_i^* x_j) must be positive semidefinite
  Mat gram = a.involution().adjoint() * a.bilinear_form(eps);
  double min_eig = min_hermitian_eigenvalue(gram);
  double worst_sample = 0.0;
  for (int t = 0; t < 50; ++t) {
    Element x(n);
    for (int q = 0; q < n; ++q)
      x(q) = rng.complex();
    cplx v = k.counit(a.multiply(a.star(x), x)) / x.squaredNorm();
    worst_sample = std::min({worst_sample, v.real(), -std::abs(v.imag())});
  }
  r.check("counit_positive", std::max(0.0, std::max(-min_eig, -worst_sample)), bound);
  r.values()["dim"] = n;
  return r;
}

Report verify_counital_maps(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol) {
  Report r("counital maps");
  const double bound = tol.bound(std::max(1.0, max_abs(c.eps_s)));
  r.check("source_idempotent", max_abs(Mat(c.eps_s * c.eps_s - c.eps_s)), bound);
  r.check("target_idempotent", max_abs(Mat(c.eps_t * c.eps_t - c.eps_t)), bound);
  r.check("antipode_exchanges", max_abs(Mat(k.antipode() * c.eps_s - c.eps_t * k.antipode())), bound);
  return r;
}

CartanPair cartan_subalgebras(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol) {
  CartanPair cp;
  cp.ks = make_subalgebra(k.algebra_ptr(), c.eps_s, tol);
  cp.kt = make_subalgebra(k.algebra_ptr(), c.eps_t, tol);
  cp.dec_s = block_decompose(*cp.ks.sub, tol);
  cp.dec_t = block_decompose(*cp.kt.sub, tol);
  cp.units_s = matrix_units(*cp.ks.sub, cp.dec_s, tol);
  cp.units_t = matrix_units(*cp.kt.sub, cp.dec_t, tol);
  return cp;
}

Report verify_cartan(const WeakKacAlgebra& k, const CartanPair& cp, const Tolerance& tol) {
  Report r("Cartan subalgebras");
  const StarAlgebra& a = k.algebra();
  r.require("equal_dimensions", cp.ks.sub->dim() == cp.kt.sub->dim());
  double comm = 0.0;
  for (Eigen::Index i = 0; i < cp.ks.emb.cols(); ++i)
    comm = std::max(comm, max_abs(Mat(a.commutator_matrix(cp.ks.emb.col(i)) * cp.kt.emb)));
  r.check("commute", comm, tol.bound(max_abs(a.structure())));
  r.check("antipode_maps_source_to_target", cp.kt.distance(k.antipode() * cp.ks.emb), tol.bound());
  r.merge(verify_embedding(cp.ks, tol), "source.");
  r.merge(verify_embedding(cp.kt, tol), "target.");
  r.merge(verify_matrix_units(*cp.ks.sub, cp.units_s, tol), "source_units.");
  r.merge(verify_matrix_units(*cp.kt.sub, cp.units_t, tol), "target_units.");

  // g_rs = S(f_sr) is a system of matrix units of K_t
  MatrixUnitSystem image;
  image.block_dims = cp.units_s.block_dims;
  for (std::size_t al = 0; al < cp.units_s.units.size(); ++al) {
    const int m = cp.units_s.block_dims[al];
    Mat u(cp.kt.sub->dim(), Eigen::Index(m) * m);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        u.col(Eigen::Index(p) * m + q) =
            cp.kt.restrict(k.antipode() * cp.ks.embed(cp.units_s.unit(int(al), q, p)));
    image.units.push_back(std::move(u));
  }
  r.merge(verify_matrix_units(*cp.kt.sub, image, tol), "antipode_image_units.");
  r.values()["dim_source"] = cp.ks.sub->dim();
  r.values()["m"] = cp.dec_s.block_dims;
  return r;
}

Element haar_projection(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol) {
  const StarAlgebra& a = k.algebra();
  const int n = k.dim();
  Mat sys(2 * Eigen::Index(n) * n + n, n);
  Element rhs = Element::Zero(sys.rows());
  for (int i = 0; i < n; ++i) {
    sys.middleRows(Eigen::Index(i) * n, n) = a.right_matrix(Element(a.basis(i) - c.eps_s.col(i)));
    sys.middleRows((Eigen::Index(n) + i) * n, n) = a.left_matrix(Element(a.basis(i) - c.eps_t.col(i)));
  }
  sys.bottomRows(n) = c.eps_s;
  rhs.tail(n) = a.unit();
  if (numerical_rank(sys, tol) != n)
    throw VerificationError("haar_projection: defining system does not have a unique solution");
  double residual = 0.0;
  Element p = solve_least_squares(sys, rhs, &residual);
  if (residual > 1e2 * tol.bound(std::max(1.0, max_abs(sys))))
    throw VerificationError("haar_projection: defining system is inconsistent (residual " +
                            std::to_string(residual) + ")");
  return p;
}

Report verify_haar_projection(const WeakKacAlgebra& k, const CounitalData& c, const Element& p,
                              const Tolerance& tol) {
  Report r("Haar projection");
  const StarAlgebra& a = k.algebra();
  const double bound = tol.bound(std::max(1.0, max_abs(p)) * max_abs(a.structure()));
  r.check("idempotent", max_abs(Element(a.multiply(p, p) - p)), bound);
  r.check("self_adjoint", max_abs(Element(a.star(p) - p)), bound);
  r.check("source_normalized", max_abs(Element(c.eps_s * p - a.unit())), bound);
  r.check("target_normalized", max_abs(Element(c.eps_t * p - a.unit())), bound);
  r.check("antipode_invariant", max_abs(Element(k.antipode() * p - p)), bound);
  double absorb = 0.0;
  for (int i = 0; i < k.dim(); ++i) {
    absorb = std::max(absorb, max_abs(Element(a.multiply(p, a.basis(i)) - a.multiply(p, c.eps_s.col(i)))));
    absorb = std::max(absorb, max_abs(Element(a.multiply(a.basis(i), p) - a.multiply(c.eps_t.col(i), p))));
  }
  r.check("absorbing", absorb, bound);
  Mat dp = k.delta(p);
  r.check("cocommutative", max_abs(Mat(dp - dp.transpose())), bound);
  return r;
}

Functional haar_trace(const WeakKacAlgebra& k, const CounitalData& c, const Tolerance& tol) {
  const int n = k.dim();
  Mat ident = Mat::Identity(n, n);
  Mat sys(2 * Eigen::Index(n) * n + 2 * n, n);
  Element rhs = Element::Zero(sys.rows());
  for (int i = 0; i < n; ++i) {
    Mat d = unflatten(k.comult().col(i), n, n);
    sys.middleRows(Eigen::Index(i) * n, n) = (ident - c.eps_s) * d.transpose();
    sys.middleRows((Eigen::Index(n) + i) * n, n) = (ident - c.eps_t) * d;
  }
  const Eigen::Index base = 2 * Eigen::Index(n) * n;
  sys.middleRows(base, n) = c.eps_s.transpose();
  sys.middleRows(base + n, n) = c.eps_t.transpose();
  rhs.segment(base, n) = k.counit().transpose();
  rhs.segment(base + n, n) = k.counit().transpose();
  if (numerical_rank(sys, tol) != n)
    throw VerificationError("haar_trace: defining system does not have a unique solution");
  double residual = 0.0;
  Element t = solve_least_squares(sys, rhs, &residual);
  if (residual > 1e2 * tol.bound(std::max(1.0, max_abs(sys))))
    throw VerificationError("haar_trace: defining system is inconsistent (residual " +
                            std::to_string(residual) + ")");
  return t.transpose();
}

Report verify_haar_trace(const WeakKacAlgebra& k, const Functional& tau, const Tolerance& tol) {
  Report r("Haar trace");
  const StarAlgebra& a = k.algebra();
  Mat q = a.bilinear_form(tau);
  const double bound = tol.bound(std::max(1.0, max_abs(q)));
  r.check("trace_property", max_abs(Mat(q - q.transpose())), bound);
  Mat gram = a.involution().adjoint() * q;
  double min_eig = min_hermitian_eigenvalue(gram);
  Check& c = r.require("faithful", min_eig > bound);
  c.residual = min_eig;
  r.check("antipode_invariant", max_abs(Mat(tau * k.antipode() - tau)), bound);
  r.check("hermitian", max_abs(Mat(tau * a.involution() - tau.conjugate())), bound);
  return r;
}

CounitalExpectations counital_expectations(const WeakKacAlgebra& k, const CartanPair& cp,
                                           const Functional& tau) {
  const int n = k.dim();
  CounitalExpectations ce;
  ce.es_full.resize(n, n);
  ce.et_full.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Mat d = unflatten(k.comult().col(i), n, n);
    ce.es_full.col(i) = d.transpose() * tau.transpose();
    ce.et_full.col(i) = d * tau.transpose();
  }
  ce.es.e = cp.ks;
  ce.es.map = cp.ks.coords * ce.es_full;
  ce.et.e = cp.kt;
  ce.et.map = cp.kt.coords * ce.et_full;
  return ce;
}

Report verify_counital_expectations(const WeakKacAlgebra& k, const CartanPair& cp, const Functional& tau,
                                    const CounitalExpectations& ce, const Tolerance& tol) {
  Report r("counital expectations");
  const double bound = tol.bound(std::max(1.0, max_abs(ce.es_full)));
  r.check("source_lands_in_cartan", cp.ks.distance(ce.es_full), bound);
  r.check("target_lands_in_cartan", cp.kt.distance(ce.et_full), bound);
  r.merge(verify_conditional_expectation(ce.es, tol, tau), "source.");
  r.merge(verify_conditional_expectation(ce.et, tol, tau), "target.");
  const Mat& s = k.antipode();
  r.check("target_is_conjugate_of_source", max_abs(Mat(ce.et_full - s * ce.es_full * s)), bound);
  // independent construction: orthogonal projection w.r.t. tau
  ConditionalExpectation orth = trace_conditional_expectation(cp.ks, tau, tol);
  r.check("source_matches_orthogonal_projection", max_abs(Mat(orth.map - ce.es.map)), bound);
  return r;
}

WkaData analyze(const WeakKacAlgebra& k, const Tolerance& tol) {
  WkaData d;
  d.counital = counital_maps(k);
  d.cartan = cartan_subalgebras(k, d.counital, tol);
  d.haar = haar_projection(k, d.counital, tol);
  d.tau = haar_trace(k, d.counital, tol);
  d.expectations = counital_expectations(k, d.cartan, d.tau);
  return d;
}

WeakKacAlgebra dual(const WeakKacAlgebra& k) {
  const StarAlgebra& a = k.algebra();
  Mat invol = (k.antipode() * a.involution()).adjoint();
  AlgebraPtr alg = share(StarAlgebra(k.comult().transpose(), k.counit().transpose(), std::move(invol)));
  return WeakKacAlgebra(std::move(alg), a.structure().transpose(), a.unit().transpose(),
                        k.antipode().transpose());
}

double double_dual_residual(const WeakKacAlgebra& k) {
  WeakKacAlgebra dd = dual(dual(k));
  const StarAlgebra& a = k.algebra();
  const StarAlgebra& b = dd.algebra();
  return std::max({max_abs(Mat(a.structure() - b.structure())), max_abs(Element(a.unit() - b.unit())),
                   max_abs(Mat(a.involution() - b.involution())), max_abs(Mat(k.comult() - dd.comult())),
                   max_abs(Mat(k.counit() - dd.counit())), max_abs(Mat(k.antipode() - dd.antipode()))});
}

Report verify_delta_unit(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  Report r("comultiplication of the unit");
  const StarAlgebra& a = k.algebra();
  const Mat& s = k.antipode();
  Mat d1 = k.delta(a.unit());
  const double bound = tol.bound(std::max(1.0, max_abs(d1)) * max_abs(a.structure()));

  r.check("projection", std::max(max_abs(Mat(tensor_multiply(a, a, d1, d1) - d1)),
                                 max_abs(Mat(tensor_star(a, a, d1) - d1))),
          bound);
  Mat qs = range_basis(d.cartan.ks.emb, tol);
  Mat qt = range_basis(d.cartan.kt.emb, tol);
  Mat ps = qs * qs.adjoint();
  Mat pt = qt * qt.adjoint();
  r.check("in_source_tensor_target", max_abs(Mat(ps * d1 * pt.transpose() - d1)), bound);
  r.check("contract_with_antipode_right", max_abs(Element(tensor_contract(a, d1 * s.transpose()) - a.unit())), bound);
  r.check("contract_with_antipode_left", max_abs(Element(tensor_contract(a, s * d1) - a.unit())), bound);

  // sum_alpha 1/m_alpha sum_rs f_rs (x) S(f_sr); the expression does not
  // change under a unitary change of matrix units inside a block, so it is
  // evaluated on the computed system directly
  const CartanPair& cp = d.cartan;
  Mat formula_s = Mat::Zero(a.dim(), a.dim());
  Mat formula_t = Mat::Zero(a.dim(), a.dim());
  for (std::size_t al = 0; al < cp.units_s.units.size(); ++al) {
    const int m = cp.units_s.block_dims[al];
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        Element f_pq = cp.ks.embed(cp.units_s.unit(int(al), p, q));
        Element f_qp = cp.ks.embed(cp.units_s.unit(int(al), q, p));
        formula_s += outer(f_pq, s * f_qp) / double(m);
      }
  }
  for (std::size_t al = 0; al < cp.units_t.units.size(); ++al) {
    const int m = cp.units_t.block_dims[al];
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        Element g_pq = cp.kt.embed(cp.units_t.unit(int(al), p, q));
        Element g_qp = cp.kt.embed(cp.units_t.unit(int(al), q, p));
        formula_t += outer(s * g_qp, g_pq) / double(m);
      }
  }
  double res_s = max_abs(Mat(formula_s - d1));
  double res_t = max_abs(Mat(formula_t - d1));
  r.check("unit_formula_source_units", res_s, bound, false);
  r.check("unit_formula_target_units", res_t, bound, false);
  if (res_s > bound || res_t > bound)
    r.warnings().push_back("matrix-unit expression of Delta(1) not realized by the computed units");

  BlockDecomposition dec = block_decompose(a, tol);
  MatrixUnitSystem mu = matrix_units(a, dec, tol);
  Mat formula_p = Mat::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < mu.units.size(); ++i) {
    const int di = mu.block_dims[i];
    for (int p = 0; p < di; ++p)
      for (int q = 0; q < di; ++q)
        formula_p += outer(mu.unit(int(i), p, q), s * mu.unit(int(i), q, p)) / double(di);
  }
  double res_p = max_abs(Mat(formula_p - k.delta(d.haar)));
  r.check("haar_formula", res_p, bound, false);
  if (res_p > bound)
    r.warnings().push_back("matrix-unit expression of Delta(p_eps) not realized by the computed units");
  return r;
}

Mat hypercenter(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  Mat st = intersect(d.cartan.ks.emb, d.cartan.kt.emb, tol);
  return intersect(st, center(k.algebra(), tol), tol);
}

bool is_decomposable(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  return hypercenter(k, d, tol).cols() > 1;
}

std::vector<WeakKacAlgebra> decompose(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  Mat h = hypercenter(k, d, tol);
  if (h.cols() <= 1)
    return {k};
  const StarAlgebra& a = k.algebra();
  Mat q = minimal_projections(a, h, tol);
  std::vector<WeakKacAlgebra> out;
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    Element qc = q.col(c);
    SubalgebraEmbedding e = make_subalgebra(k.algebra_ptr(), a.right_matrix(qc), tol, qc);
    const int m = e.sub->dim();
    Mat comult(Eigen::Index(m) * m, m);
    double leak = 0.0;
    for (int i = 0; i < m; ++i) {
      Mat t = k.delta(e.emb.col(i));
      Mat tq = e.coords * t * e.coords.transpose();
      leak = std::max(leak, max_abs(Mat(e.emb * tq * e.emb.transpose() - t)));
      comult.col(i) = flatten(tq);
    }
    Mat santi = k.antipode() * e.emb;
    leak = std::max(leak, e.distance(santi));
    if (leak > 1e3 * tol.bound(std::max(1.0, max_abs(k.comult()))))
      throw VerificationError("decompose: summand is not a weak Kac subalgebra");
    WeakKacAlgebra part(e.sub, std::move(comult), k.counit() * e.emb, e.coords * santi);
    verify_wka(part, tol).throw_if_failed("decompose");
    out.push_back(std::move(part));
  }
  return out;
}

Connectivity connectivity(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  Connectivity c;
  c.report = Report("connectivity");
  const StarAlgebra& a = k.algebra();

  Mat zs = intersect(d.cartan.ks.emb, center(a, tol), tol);
  c.center_criterion = zs.cols() == 1;

  WeakKacAlgebra kd = dual(k);
  CounitalData cd = counital_maps(kd);
  Mat st = intersect(range_basis(cd.eps_s, tol), range_basis(cd.eps_t, tol), tol);
  c.dual_criterion = st.cols() == 1;

  Mat corner = a.left_matrix(d.haar) * a.right_matrix(d.haar);
  int corner_dim = numerical_rank(corner, tol);
  c.minimality_criterion = corner_dim == 1;

  c.report.values()["source_center_dim"] = zs.cols();
  c.report.values()["dual_cartan_intersection_dim"] = st.cols();
  c.report.values()["haar_corner_dim"] = corner_dim;
  c.report.flag("source_center_trivial", c.center_criterion);
  c.report.flag("dual_cartan_intersection_trivial", c.dual_criterion);
  c.report.flag("haar_projection_minimal", c.minimality_criterion);
  bool agree = c.center_criterion == c.dual_criterion && c.dual_criterion == c.minimality_criterion;
  c.report.require("criteria_agree", agree);
  if (!agree)
    throw VerificationError("connectivity: the three equivalent criteria disagree");
  c.connected = c.center_criterion;
  c.report.values()["connected"] = c.connected;
  return c;
}

Biconnectivity biconnectivity(const WeakKacAlgebra& k, const Tolerance& tol) {
  Biconnectivity b;
  b.primal = connectivity(k, analyze(k, tol), tol);
  WeakKacAlgebra kd = dual(k);
  b.dual = connectivity(kd, analyze(kd, tol), tol);
  return b;
}

bool is_kac_algebra(const WeakKacAlgebra& k, const Tolerance& tol) {
  const Element& u = k.algebra().unit();
  return max_abs(Mat(k.delta(u) - outer(u, u))) <= tol.bound();
}

IntMat cyclic_group_table(int order) {
  if (order < 1)
    throw StructureError("cyclic group: order must be positive");
  IntMat t(order, order);
  for (int g = 0; g < order; ++g)
    for (int h = 0; h < order; ++h)
      t(g, h) = (g + h) % order;
  return t;
}

IntMat symmetric_group_table(int degree) {
  if (degree < 1 || degree > 5)
    throw StructureError("symmetric group: degree must be between 1 and 5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(degree);
  std::iota(p.begin(), p.end(), 0);
  do
    perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const int n = int(perms.size());
  IntMat t(n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      std::vector<int> gh(degree);
      for (int x = 0; x < degree; ++x)
        gh[x] = perms[g][perms[h][x]];
      t(g, h) = int(std::find(perms.begin(), perms.end(), gh) - perms.begin());
    }
  return t;
}

void validate_group_table(const IntMat& t) {
  const Eigen::Index n = t.rows();
  if (n == 0 || t.cols() != n)
    throw StructureError("group table must be square and nonempty");
  if ((t.array() < 0).any() || (t.array() >= n).any())
    throw StructureError("group table has entries out of range");
  for (Eigen::Index g = 0; g < n; ++g) {
    if (t(0, g) != g || t(g, 0) != g)
      throw StructureError("group table: element 0 is not the identity");
    std::vector<bool> row(n, false), col(n, false);
    for (Eigen::Index h = 0; h < n; ++h) {
      row[t(g, h)] = true;
      col[t(h, g)] = true;
    }
    if (std::find(row.begin(), row.end(), false) != row.end() ||
        std::find(col.begin(), col.end(), false) != col.end())
      throw StructureError("group table is not a Latin square");
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c)
        if (t(t(a, b), c) != t(a, t(b, c)))
          throw StructureError("group table is not associative");
}

namespace {

std::vector<int> group_inverses(const IntMat& t) {
  std::vector<int> inv(t.rows());
  for (Eigen::Index g = 0; g < t.rows(); ++g)
    for (Eigen::Index h = 0; h < t.rows(); ++h)
      if (t(g, h) == 0)
        inv[g] = int(h);
  return inv;
}

} // namespace

WeakKacAlgebra from_group(const IntMat& t) {
  validate_group_table(t);
  const int n = int(t.rows());
  std::vector<int> inv = group_inverses(t);
  Mat structure = Mat::Zero(n, Eigen::Index(n) * n);
  Mat invol = Mat::Zero(n, n);
  Mat comult = Mat::Zero(Eigen::Index(n) * n, n);
  Mat antipode = Mat::Zero(n, n);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h)
      structure(t(g, h), Eigen::Index(g) * n + h) = 1.0;
    invol(inv[g], g) = 1.0;
    antipode(inv[g], g) = 1.0;
    comult(Eigen::Index(g) * n + g, g) = 1.0;
  }
  Element unit = Element::Unit(n, 0);
  AlgebraPtr alg = share(StarAlgebra(std::move(structure), std::move(unit), std::move(invol)));
  return WeakKacAlgebra(std::move(alg), std::move(comult), Functional::Ones(n), std::move(antipode));
}

WeakKacAlgebra from_dual_group(const IntMat& t) {
  validate_group_table(t);
  const int n = int(t.rows());
  std::vector<int> inv = group_inverses(t);
  Mat structure = Mat::Zero(n, Eigen::Index(n) * n);
  Mat comult = Mat::Zero(Eigen::Index(n) * n, n);
  Mat antipode = Mat::Zero(n, n);
  for (int g = 0; g < n; ++g) {
    structure(g, Eigen::Index(g) * n + g) = 1.0;
    antipode(inv[g], g) = 1.0;
    for (int h = 0; h < n; ++h)
      comult(Eigen::Index(h) * n + t(inv[h], g), g) = 1.0;  // delta_g -> sum_{hk=g} delta_h (x) delta_k
  }
  Functional counit = Functional::Zero(n);
  counit(0) = 1.0;
  AlgebraPtr alg = share(StarAlgebra(std::move(structure), Element::Ones(n), Mat::Identity(n, n)));
  return WeakKacAlgebra(std::move(alg), std::move(comult), std::move(counit), std::move(antipode));
}

WeakKacAlgebra from_pair_groupoid(int n) {
  if (n < 1)
    throw StructureError("pair groupoid: n must be positive");
  AlgebraPtr alg = share(matrix_algebra(n));
  const Eigen::Index dim = Eigen::Index(n) * n;
  Mat comult = Mat::Zero(dim * dim, dim);
  Mat antipode = Mat::Zero(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::Index g = Eigen::Index(i) * n + j;
      comult(g * dim + g, g) = 1.0;
      antipode(Eigen::Index(j) * n + i, g) = 1.0;
    }
  return WeakKacAlgebra(std::move(alg), std::move(comult), Functional::Ones(dim), std::move(antipode));
}

WeakKacAlgebra direct_sum(const WeakKacAlgebra& a, const WeakKacAlgebra& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  AlgebraPtr alg = share(direct_sum(a.algebra(), b.algebra()));
  Mat comult = Mat::Zero(Eigen::Index(n) * n, n);
  for (int i = 0; i < na; ++i) {
    Mat t = a.delta(a.algebra().basis(i));
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        comult(Eigen::Index(j) * n + k, i) = t(j, k);
  }
  for (int i = 0; i < nb; ++i) {
    Mat t = b.delta(b.algebra().basis(i));
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k)
        comult(Eigen::Index(na + j) * n + (na + k), na + i) = t(j, k);
  }
  Functional counit(n);
  counit << a.counit(), b.counit();
  Mat antipode = Mat::Zero(n, n);
  antipode.topLeftCorner(na, na) = a.antipode();
  antipode.bottomRightCorner(nb, nb) = b.antipode();
  return WeakKacAlgebra(std::move(alg), std::move(comult), std::move(counit), std::move(antipode));
}

} // namespace wka
