#include "wka/expectation.hpp"

#include "wka/linalg.hpp"

namespace wka {

ConditionalExpectation trace_conditional_expectation(const SubalgebraEmbedding& e, const Functional& tr,
                                                     const Tolerance& tol) {
  Mat q = e.amb->bilinear_form(tr);        // tr(x_i x_j) on B
  Mat t = e.emb.transpose() * q;           // tr(a_i x_j)
  Mat g = t * e.emb;                       // tr(a_i a_j)
  if (numerical_rank(g, tol) != g.rows())
    throw VerificationError("trace_conditional_expectation: trace is degenerate on the subalgebra");
  ConditionalExpectation ce;
  ce.e = e;
  ce.map = g.fullPivLu().solve(t);
  return ce;
}

Report verify_conditional_expectation(const ConditionalExpectation& ce, const Tolerance& tol,
                                      const std::optional<Functional>& tr) {
  Report r("conditional expectation");
  const StarAlgebra& a = *ce.e.sub;
  const StarAlgebra& b = *ce.e.amb;
  const Mat& s = ce.e.emb;
  const Mat& e = ce.map;
  const int m = a.dim(), n = b.dim();
  const double scale = std::max(1.0, max_abs(e)) * std::max(1.0, max_abs(s));

  r.check("identity_on_subalgebra", max_abs(Mat(e * s - Mat::Identity(m, m))), tol.bound(scale));

  // E(a x) = a E(x) and E(x a) = E(x) a, as matrices in x
  double bimod = 0.0;
  Rng rng(tol.seed ^ 0x62696d6fULL);
  const bool full = double(m) * n * n * n < 4e8;
  const int samples = full ? m : 12;
  for (int k = 0; k < samples; ++k) {
    Element av;
    if (full) {
      av = a.basis(k);
    } else {
      av.resize(m);
      for (int c = 0; c < m; ++c)
        av(c) = rng.complex();
    }
    Element sa = s * av;
    Mat left = e * b.left_matrix(sa) - a.left_matrix(av) * e;
    Mat right = e * b.right_matrix(sa) - a.right_matrix(av) * e;
    bimod = std::max({bimod, max_abs(left) / std::max(1.0, av.norm()), max_abs(right) / std::max(1.0, av.norm())});
  }
  r.check("bimodule", bimod, tol.bound(scale * max_abs(b.structure())));

  r.check("star_preserving", max_abs(Mat(e * b.involution() - a.involution() * e.conjugate())),
          tol.bound(scale));

  if (tr) {
    Functional lhs = (*tr) * s * e;
    r.check("trace_preserving", max_abs(Mat(lhs - *tr)), tol.bound(scale));
    // <x, y> = tr(E(x^* y)) = tr(x^* y) must be positive definite
    Mat gram = b.involution().adjoint() * b.bilinear_form(lhs);
    double min_eig = min_hermitian_eigenvalue(gram);
    Check& c = r.require("faithful", min_eig > tol.bound(max_abs(gram)));
    c.residual = min_eig;
  }
  return r;
}

QuasiBasisResult verify_quasi_basis(const ConditionalExpectation& ce, const Mat& u, const Tolerance& tol) {
  QuasiBasisResult out;
  out.report = Report("quasi-basis");
  const StarAlgebra& b = *ce.e.amb;
  const int n = b.dim();
  const Eigen::Index k = u.cols();
  const Mat proj = ce.e.emb * ce.map;

  Mat recon = Mat::Zero(n, n);
  Element index = Element::Zero(n);
  Mat assembled(n, k * ce.e.sub->dim());
  for (Eigen::Index i = 0; i < k; ++i) {
    Element ui = u.col(i);
    Element ui_star = b.star(ui);
    Mat lu = b.left_matrix(ui);
    recon += lu * proj * b.left_matrix(ui_star);
    index += b.multiply(ui, ui_star);
    assembled.middleCols(i * ce.e.sub->dim(), ce.e.sub->dim()) = lu * ce.e.emb;
  }
  const double scale = std::max(1.0, max_abs(u));
  out.report.check("reconstruction", max_abs(Mat(recon - Mat::Identity(n, n))),
                   tol.bound(scale * scale * max_abs(b.structure())));

  double comm = max_abs(b.commutator_matrix(index));
  out.central = comm <= tol.bound(max_abs(index) * max_abs(b.structure()));
  out.report.check("index_central", comm, tol.bound(max_abs(index) * max_abs(b.structure())));

  // is the index a scalar multiple of the unit?
  cplx c = b.unit().dot(index) / b.unit().squaredNorm();
  double dev = max_abs(Element(index - c * b.unit()));
  if (dev <= tol.bound(std::abs(c)) && std::abs(c.imag()) <= tol.bound(std::abs(c)))
    out.scalar_index = c.real();

  out.is_basis = numerical_rank(assembled, tol) == assembled.cols();
  out.report.flag("basis", out.is_basis, "coefficients in the subalgebra are unique");
  out.index = std::move(index);
  if (out.scalar_index)
    out.report.values()["index"] = *out.scalar_index;
  return out;
}

BasicConstruction basic_construction(const ConditionalExpectation& ce, const Mat& u, const Tolerance& tol) {
  QuasiBasisResult qb = verify_quasi_basis(ce, u, tol);
  qb.report.throw_if_failed("basic_construction");
  if (!qb.is_basis)
    throw VerificationError("basic_construction: family is a quasi-basis but not a basis");

  const StarAlgebra& a = *ce.e.sub;
  const StarAlgebra& b = *ce.e.amb;
  const int k = int(u.cols());
  const int na = a.dim(), nb = b.dim();

  BasicConstruction bc;
  bc.size = k;
  bc.algebra = share(tensor_product(matrix_algebra(k), a));
  const Eigen::Index dim = Eigen::Index(k) * k * na;

  // b -> (E(u_i^* b u_j))_{ij}
  Mat emb(dim, nb);
  std::vector<Mat> left_star(k);
  for (int i = 0; i < k; ++i)
    left_star[i] = ce.map * b.left_matrix(b.star(u.col(i)));
  for (int j = 0; j < k; ++j) {
    Mat right = b.right_matrix(u.col(j));
    for (int i = 0; i < k; ++i)
      emb.middleRows((Eigen::Index(i) * k + j) * na, na) = left_star[i] * right;
  }
  bc.of_b = make_embedding(share(StarAlgebra(b)), bc.algebra, std::move(emb));
  bc.of_b.amb = bc.algebra;

  bc.jones = Element::Zero(dim);
  Mat eu = ce.map * u;  // column i = E(u_i)
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      bc.jones.segment((Eigen::Index(i) * k + j) * na, na) = a.multiply(a.star(eu.col(i)), eu.col(j));
  return bc;
}

Report verify_basic_construction(const BasicConstruction& bc, const ConditionalExpectation& ce,
                                 const Tolerance& tol) {
  Report r("basic construction");
  const StarAlgebra& c = *bc.algebra;
  const StarAlgebra& b = *ce.e.amb;
  const int nb = b.dim(), na = ce.e.sub->dim();
  r.merge(verify_embedding(bc.of_b, tol), "embedding.");

  const Element& e = bc.jones;
  r.check("jones_projection", std::max(max_abs(Element(c.multiply(e, e) - e)), max_abs(Element(c.star(e) - e))),
          tol.bound());

  // e b e = E(b) e for every basis vector b of B
  Mat le = c.left_matrix(e);
  Mat re = c.right_matrix(e);
  Mat lhs = le * re * bc.of_b.emb;                       // columns e b e
  Mat rhs = re * bc.of_b.emb * ce.e.emb * ce.map;        // columns E(b) e
  r.check("compression", max_abs(Mat(lhs - rhs)), tol.bound(std::max(1.0, max_abs(lhs))));

  // a -> a e is injective on A
  Mat ae = re * bc.of_b.emb * ce.e.emb;
  r.require("injective_on_subalgebra", numerical_rank(ae, tol) == na);

  // span{x e y} = <B, e>
  Mat span(c.dim(), Eigen::Index(nb) * nb);
  for (int i = 0; i < nb; ++i) {
    Element xe = c.multiply(bc.of_b.emb.col(i), e);
    span.middleCols(Eigen::Index(i) * nb, nb) = c.left_matrix(xe) * bc.of_b.emb;
  }
  int rank = numerical_rank(span, tol);
  r.require("spanned_by_b_e_b", rank == c.dim(),
            "rank " + std::to_string(rank) + " of " + std::to_string(c.dim()));
  r.values()["dim"] = c.dim();
  r.values()["size"] = bc.size;
  return r;
}

} // namespace wka
