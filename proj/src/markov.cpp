#include "wka/markov.hpp"

#include <algorithm>
#include <cmath>

#include "wka/linalg.hpp"
#include "wka/tensor.hpp"

namespace wka {

namespace {

cplx scalar_part(const StarAlgebra& a, const Element& v) {
  return a.unit().dot(v) / a.unit().squaredNorm();
}

std::vector<double> distinct(std::vector<double> v, double gap) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(out.back() - x) > gap)
      out.push_back(x);
  return out;
}

// E_s(x^* y) for x, y in K, as an element of K
Element source_pairing(const WeakKacAlgebra& k, const WkaData& d, const Element& x, const Element& y) {
  const StarAlgebra& a = k.algebra();
  return d.expectations.es_full * a.multiply(a.star(x), y);
}

} // namespace

MarkovLambda markov_lambda(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  const StarAlgebra& a = k.algebra();
  MarkovLambda out;
  out.value = d.expectations.es_full * d.haar;
  Element vt = d.expectations.et_full * d.haar;
  out.source_target_residual = max_abs(Element(out.value - vt));

  BlockDecomposition dec = block_decompose(a, tol);
  Functional tr = regular_trace(a);
  std::vector<double> values;
  for (int i = 0; i < dec.blocks(); ++i) {
    Element q = dec.central_projections.col(i);
    values.push_back((tr * a.multiply(out.value, q))(0).real() / (tr * q)(0).real());
  }
  out.spectrum = distinct(values, 1e3 * tol.bound());

  cplx c = scalar_part(a, out.value);
  double dev = max_abs(Element(out.value - c * a.unit()));
  out.scalar = dev <= tol.bound(std::abs(c)) && std::abs(c.imag()) <= tol.bound() && c.real() > 0;
  if (out.scalar)
    out.lambda = c.real();
  return out;
}

InclusionData source_inclusion(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  InclusionData inc;
  inc.dec = block_decompose(k.algebra(), tol);
  inc.units = matrix_units(k.algebra(), inc.dec, tol);
  inc.lambda = inclusion_matrix(d.cartan.ks, d.cartan.units_s, inc.dec, tol);
  inc.m = d.cartan.dec_s.block_dims;
  inc.d = inc.dec.block_dims;
  return inc;
}

MarkovReport verify_equivalences(const WeakKacAlgebra& k, const WkaData& d, double lambda, const Tolerance& tol) {
  const StarAlgebra& a = k.algebra();
  MarkovReport mr;
  Report& r = mr.report;
  r = Report("Markov equivalences");
  mr.lambda = lambda;
  const double inv = 1.0 / lambda;
  const double bound = 10.0 * tol.bound(inv);

  // (i)
  Element es = d.expectations.es_full * d.haar;
  Element et = d.expectations.et_full * d.haar;
  double res_i = std::max(max_abs(Element(es - lambda * a.unit())), max_abs(Element(et - lambda * a.unit())));
  const bool pi = r.check("markov_condition", res_i, bound).pass;
  mr.inv_from_haar = inv;

  // (ii)
  Functional tr = regular_trace(a);
  double res_ii = max_abs(Mat(d.tau - lambda * tr));
  const bool pii = r.check("trace_is_multiple_of_regular_trace", res_ii, bound).pass;
  mr.inv_from_trace = tr.squaredNorm() / std::real(tr.dot(d.tau));

  // (iii)
  mr.inclusion = source_inclusion(k, d, tol);
  RealMat lam = to_real(mr.inclusion.lambda);
  Eigen::VectorXd m = to_real(mr.inclusion.m);
  RealMat llt = lam * lam.transpose();
  double res_iii = (llt * m - inv * m).lpNorm<Eigen::Infinity>();
  const bool piii = r.check("perron_equation", res_iii, bound).pass;
  double res_stmt = (llt * m - lambda * m).lpNorm<Eigen::Infinity>();
  r.check("perron_equation_with_lambda", res_stmt, bound, false).note =
      "variant (Lambda Lambda^t) m = lambda m; holds only when lambda = 1";

  PerronData pd = perron_eigen(llt);
  mr.inv_from_perron = pd.value;
  Eigen::JacobiSVD<RealMat> svd(lam);
  mr.inv_from_norm = svd.singularValues()(0) * svd.singularValues()(0);
  mr.inv_from_dimension = double(k.dim()) / double(d.cartan.ks.sub->dim());

  const double agree_bound = 10.0 * tol.bound(inv) * 10.0;
  double spread = 0.0;
  for (double v : {mr.inv_from_trace, mr.inv_from_perron, mr.inv_from_dimension, mr.inv_from_norm})
    spread = std::max(spread, std::abs(v - inv));
  r.check("determinations_agree", spread, agree_bound);
  r.check("norm_identity", std::abs(mr.inv_from_norm - inv), agree_bound);
  r.check("dimension_identity", std::abs(mr.inv_from_dimension - inv), agree_bound);
  r.check("perron_eigenvalue", std::abs(mr.inv_from_perron - inv), agree_bound);

  bool integral = is_integral(inv, Tolerance{1e-7, 1e-9, tol.seed});
  r.require("index_integral", integral);
  if (integral)
    mr.n = std::llround(inv);

  if (!(pi == pii && pii == piii))
    throw VerificationError("Markov equivalences: criteria disagree (i=" + std::to_string(pi) +
                            ", ii=" + std::to_string(pii) + ", iii=" + std::to_string(piii) + ")");

  Json& v = r.values();
  v["lambda"] = lambda;
  v["lambda_inverse"] = inv;
  if (integral)
    v["n"] = mr.n;
  v["inverse_from_haar"] = mr.inv_from_haar;
  v["inverse_from_trace"] = mr.inv_from_trace;
  v["inverse_from_perron"] = mr.inv_from_perron;
  v["inverse_from_dimension"] = mr.inv_from_dimension;
  v["inverse_from_norm"] = mr.inv_from_norm;
  Json lj = Json::array();
  for (Eigen::Index i = 0; i < mr.inclusion.lambda.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < mr.inclusion.lambda.cols(); ++j)
      row.push_back(mr.inclusion.lambda(i, j));
    lj.push_back(row);
  }
  v["inclusion_matrix"] = lj;
  v["m"] = mr.inclusion.m;
  v["d"] = mr.inclusion.d;
  return mr;
}

namespace {

Mat orthonormal_family(const WeakKacAlgebra& k, const WkaData& d, const Element& f11, const Mat& candidates,
                       int wanted, const Tolerance& tol) {
  const StarAlgebra& a = k.algebra();
  const double f_norm = f11.squaredNorm();
  auto pairing = [&](const Element& y, const Element& z) {
    return f11.dot(source_pairing(k, d, y, z)) / f_norm;
  };
  Mat out(a.dim(), wanted);
  int count = 0;
  for (Eigen::Index c = 0; c < candidates.cols() && count < wanted; ++c) {
    Element v = candidates.col(c);
    double scale = std::max(1.0, std::abs(pairing(v, v)));
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < count; ++j)
        v -= Element(out.col(j)) * pairing(out.col(j), v);
    double norm2 = pairing(v, v).real();
    if (norm2 > 1e3 * tol.bound(scale))
      out.col(count++) = v / std::sqrt(norm2);
  }
  if (count < wanted)
    return Mat(a.dim(), 0);
  return out;
}

} // namespace

EsBasis construct_es_basis(const WeakKacAlgebra& k, const WkaData& d, double lambda, const Tolerance& tol,
                           std::optional<std::uint64_t> seed) {
  const StarAlgebra& a = k.algebra();
  const CartanPair& cp = d.cartan;
  const double inv = 1.0 / lambda;
  if (!is_integral(inv, Tolerance{1e-7, 1e-9, tol.seed}))
    throw VerificationError("construct_es_basis: lambda^{-1} is not an integer");
  const int n = int(std::llround(inv));
  const int dim = a.dim();
  const double pi = std::acos(-1.0);

  Mat x = Mat::Zero(dim, n);
  for (std::size_t al = 0; al < cp.units_s.units.size(); ++al) {
    const int m = cp.units_s.block_dims[al];
    auto f = [&](int r, int s) { return Element(cp.ks.embed(cp.units_s.unit(int(al), r, s))); };
    Element f11 = f(0, 0);
    Mat span = a.right_matrix(f11);  // columns x_i f_11 span K f_11

    Mat family;
    for (int attempt = 0; attempt < 8 && family.cols() == 0; ++attempt) {
      Mat candidates = span;
      if (seed || attempt > 0) {
        Rng rng((seed ? *seed : tol.seed) + std::uint64_t(attempt) * 0x9e37ULL + al);
        Mat mix(dim, dim);
        for (Eigen::Index q = 0; q < mix.size(); ++q)
          mix(q) = rng.complex();
        candidates = span * mix;
      }
      family = orthonormal_family(k, d, f11, candidates, n * m, tol);
    }
    if (family.cols() == 0)
      throw VerificationError("construct_es_basis: E_s inner product on K f_11 is degenerate");

    // x^{alpha r}_mu = x^{alpha 1}_mu f_1r, combined with phases exp(2 pi i s r / m)
    for (int r = 0; r < m; ++r) {
      Mat fam_r = a.right_matrix(f(0, r)) * family;
      for (int s = 0; s < m; ++s) {
        cplx phase = std::polar(1.0 / std::sqrt(double(m)), 2.0 * pi * double((s + 1) * (r + 1)) / m);
        for (int nu = 0; nu < n; ++nu)
          x.col(nu) += phase * fam_r.col(nu + s * n);
      }
    }
  }

  EsBasis out;
  out.x = x;
  out.report = Report("E_s basis");
  double orth = 0.0;
  for (int nu = 0; nu < n; ++nu)
    for (int ka = 0; ka < n; ++ka) {
      Element g = source_pairing(k, d, x.col(nu), x.col(ka));
      Element expected = nu == ka ? a.unit() : a.zero();
      orth = std::max(orth, max_abs(Element(g - expected)));
    }
  out.report.check("orthonormal", orth, tol.bound(inv));
  QuasiBasisResult qb = verify_quasi_basis(d.expectations.es, x, tol);
  out.report.merge(qb.report);
  out.report.require("unique_coefficients", qb.is_basis);
  out.index = qb.scalar_index ? *qb.scalar_index : NAN;
  out.report.check("index_is_lambda_inverse", max_abs(Element(qb.index - inv * a.unit())), tol.bound(inv));
  out.report.values()["size"] = n;
  out.report.values()["index"] = out.index;
  return out;
}

EsBasis et_basis_from_es(const WeakKacAlgebra& k, const WkaData& d, const Mat& x, const Tolerance& tol) {
  const StarAlgebra& a = k.algebra();
  const int n = int(x.cols());
  EsBasis out;
  out.x = k.antipode() * a.involution() * x.conjugate();
  out.report = Report("E_t basis");
  double orth = 0.0;
  for (int nu = 0; nu < n; ++nu)
    for (int ka = 0; ka < n; ++ka) {
      Element g = d.expectations.et_full * a.multiply(a.star(out.x.col(nu)), out.x.col(ka));
      Element expected = nu == ka ? a.unit() : a.zero();
      orth = std::max(orth, max_abs(Element(g - expected)));
    }
  out.report.check("orthonormal", orth, tol.bound(n));
  QuasiBasisResult qb = verify_quasi_basis(d.expectations.et, out.x, tol);
  out.report.merge(qb.report);
  out.report.require("unique_coefficients", qb.is_basis);
  out.index = qb.scalar_index ? *qb.scalar_index : NAN;
  out.report.values()["index"] = out.index;
  return out;
}

Report markov_trace_check(const WeakKacAlgebra& k, const WkaData& d, const InclusionData& inc, double lambda,
                          const Tolerance& tol) {
  Report r("Markov trace");
  RealMat lam = to_real(inc.lambda);
  Eigen::VectorXd dv = to_real(inc.d);
  Eigen::VectorXd t = lambda * dv;
  double res = (lam.transpose() * lam * t - t / lambda).lpNorm<Eigen::Infinity>();
  r.check("trace_vector_eigen_equation", res, 10.0 * tol.bound(1.0 / lambda));
  double direct = 0.0;
  for (std::size_t i = 0; i < inc.units.units.size(); ++i) {
    cplx v = (d.tau * inc.units.unit(int(i), 0, 0))(0);
    direct = std::max(direct, std::abs(v - t(Eigen::Index(i))));
  }
  r.check("trace_vector_matches_haar_trace", direct, 10.0 * tol.bound());
  std::vector<double> tv(t.data(), t.data() + t.size());
  r.values()["trace_vector"] = tv;
  (void)k;
  return r;
}

bool is_prime(long long n) {
  if (n < 2)
    return false;
  for (long long p = 2; p * p <= n; ++p)
    if (n % p == 0)
      return false;
  return true;
}

Mat group_like_elements(const WeakKacAlgebra& k, const Tolerance& tol) {
  WeakKacAlgebra kd = dual(k);
  const StarAlgebra& b = kd.algebra();
  const int n = k.dim();
  if (!is_commutative(b, tol))
    return Mat(n, 0);
  Mat e = minimal_projections(b, Mat::Identity(n, n), tol);
  Mat g(n, e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    Element ej = e.col(j);
    for (int a = 0; a < n; ++a)
      g(a, j) = ej.dot(b.left_basis(a) * ej) / ej.squaredNorm();  // phi_a e_j = chi_j(phi_a) e_j
  }
  return g;
}

Report prime_dimension_report(const WeakKacAlgebra& k, const WkaData& d, const Tolerance& tol) {
  Report r("prime dimension");
  const int n = k.dim();
  bool decomposable = is_decomposable(k, d, tol);
  if (!is_prime(n) || decomposable) {
    r.values()["skipped"] = true;
    r.values()["reason"] = decomposable ? "decomposable" : "dimension is not prime";
    return r;
  }
  r.values()["skipped"] = false;
  r.require("trivial_cartan", d.cartan.ks.sub->dim() == 1);
  r.require("commutative", is_commutative(k.algebra(), tol));
  double cocomm = 0.0;
  for (int i = 0; i < n; ++i) {
    Mat t = k.delta(k.algebra().basis(i));
    cocomm = std::max(cocomm, max_abs(Mat(t - t.transpose())));
  }
  r.check("cocommutative", cocomm, tol.bound());

  Mat g = group_like_elements(k, tol);
  r.require("group_like_count", g.cols() == n, std::to_string(g.cols()) + " group-like elements");
  if (g.cols() == n) {
    double gl = 0.0;
    for (int j = 0; j < n; ++j)
      gl = std::max(gl, max_abs(Mat(k.delta(g.col(j)) - outer(g.col(j), g.col(j)))));
    r.check("group_like", gl, tol.bound());
    r.require("group_like_basis", numerical_rank(g, tol) == n);
    // closed under products, hence a group of prime order, hence cyclic
    double closure = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Element prod = k.algebra().multiply(g.col(i), g.col(j));
        double best = INFINITY;
        for (int l = 0; l < n; ++l)
          best = std::min(best, max_abs(Element(prod - g.col(l))));
        closure = std::max(closure, best);
      }
    r.check("group_closed", closure, 1e3 * tol.bound());
  }
  r.values()["cyclic_order"] = n;
  return r;
}

} // namespace wka
