#include "wka/star_algebra.hpp"

#include <cmath>

#include "wka/linalg.hpp"

namespace wka {

StarAlgebra::StarAlgebra(Mat structure, Element unit, Mat involution)
    : dim_(int(unit.size())), structure_(std::move(structure)), unit_(std::move(unit)),
      involution_(std::move(involution)) {
  const Eigen::Index n = dim_;
  if (n <= 0)
    throw StructureError("star algebra: dimension must be positive");
  if (structure_.rows() != n || structure_.cols() != n * n)
    throw StructureError("star algebra: structure tensor must be n x n^2 (n = " +
                         std::to_string(n) + ")");
  if (involution_.rows() != n || involution_.cols() != n)
    throw StructureError("star algebra: involution must be n x n");
  if (!structure_.allFinite() || !unit_.allFinite() || !involution_.allFinite())
    throw StructureError("star algebra: non-finite entries");
}

Element StarAlgebra::multiply(const Element& x, const Element& y) const {
  Element out = Element::Zero(dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != cplx(0))
      out.noalias() += x(i) * (left_basis(i) * y);
  return out;
}

Mat StarAlgebra::left_matrix(const Element& x) const {
  Mat out = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != cplx(0))
      out += x(i) * left_basis(i);
  return out;
}

Mat StarAlgebra::right_matrix(const Element& y) const {
  Mat out(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    out.col(i).noalias() = left_basis(i) * y;
  return out;
}

Mat StarAlgebra::bilinear_form(const Functional& f) const {
  Functional row = f * structure_;
  Mat q(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      q(i, j) = row(Eigen::Index(i) * dim_ + j);
  return q;
}

bool StarAlgebra::same_structure(const StarAlgebra& other, double bound) const {
  return dim_ == other.dim_ && max_abs(Mat(structure_ - other.structure_)) <= bound &&
         max_abs(Element(unit_ - other.unit_)) <= bound &&
         max_abs(Mat(involution_ - other.involution_)) <= bound;
}

namespace {

double associativity_residual(const StarAlgebra& a, Rng& rng) {
  const int n = a.dim();
  double worst = 0.0;
  if (n <= 40) {
    for (int i = 0; i < n; ++i) {
      Mat li = a.left_basis(i);
      for (int j = 0; j < n; ++j) {
        Element xy = a.left_basis(i).col(j);
        Mat lhs = a.left_matrix(xy);
        Mat rhs = li * a.left_basis(j);
        worst = std::max(worst, max_abs(Mat(lhs - rhs)));
      }
    }
    return worst;
  }
  // large algebras: multilinear identity checked on random triples
  for (int s = 0; s < 24; ++s) {
    Element x(n), y(n), z(n);
    for (int k = 0; k < n; ++k) {
      x(k) = rng.complex();
      y(k) = rng.complex();
      z(k) = rng.complex();
    }
    Element lhs = a.multiply(a.multiply(x, y), z);
    Element rhs = a.multiply(x, a.multiply(y, z));
    worst = std::max(worst, max_abs(Element(lhs - rhs)) / (x.norm() * y.norm() * z.norm()));
  }
  return worst;
}

} // namespace

Report verify_star_algebra(const StarAlgebra& a, const Tolerance& tol) {
  Report r("star algebra");
  const int n = a.dim();
  const double scale = std::max(1.0, max_abs(a.structure()));
  Rng rng(tol.seed ^ 0xa55c1a7eULL);

  r.check("associativity", associativity_residual(a, rng), tol.bound(scale * scale));

  double unit_res = 0.0;
  Mat lu = a.left_matrix(a.unit());
  Mat ru = a.right_matrix(a.unit());
  unit_res = std::max(max_abs(Mat(lu - Mat::Identity(n, n))), max_abs(Mat(ru - Mat::Identity(n, n))));
  r.check("unit", unit_res, tol.bound(scale));

  const Mat& j = a.involution();
  r.check("involution_order", max_abs(Mat(j * j.conjugate() - Mat::Identity(n, n))), tol.bound(scale));

  double anti = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      Element lhs = a.star(a.left_basis(p).col(q));
      Element rhs = a.multiply(j.col(q), j.col(p));
      anti = std::max(anti, max_abs(Element(lhs - rhs)));
    }
  r.check("involution_antimultiplicative", anti, tol.bound(scale));
  r.check("unit_selfadjoint", max_abs(Element(a.star(a.unit()) - a.unit())), tol.bound(scale));

  // Gram matrix G(i,j) = Tr(x_i* x_j); positive definite iff A is a C*-algebra
  Functional tr = regular_trace(a);
  Mat q = a.bilinear_form(tr);          // Tr(x_i x_j)
  Mat gram = j.adjoint() * q;           // row i uses x_i* = sum conj(J(k,i)) x_k
  double herm = max_abs(Mat(gram - gram.adjoint()));
  double min_eig = min_hermitian_eigenvalue(gram);
  r.check("trace_form_hermitian", herm, tol.bound(scale * n));
  Check& c = r.flag("c_star", min_eig > tol.bound(scale), "trace form positive definite");
  c.residual = min_eig;
  r.values()["dim"] = n;
  r.values()["trace_form_min_eigenvalue"] = min_eig;
  return r;
}

Functional regular_trace(const StarAlgebra& a) {
  Functional t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    t(i) = a.left_basis(i).trace();
  return t;
}

Mat commutant(const StarAlgebra& a, const Mat& elements, const Tolerance& tol) {
  const int n = a.dim();
  if (elements.cols() == 0)
    return Mat::Identity(n, n);
  Mat stacked(n * elements.cols(), n);
  for (Eigen::Index s = 0; s < elements.cols(); ++s)
    stacked.middleRows(s * n, n) = a.commutator_matrix(elements.col(s));
  return null_space(stacked, tol);
}

Mat center(const StarAlgebra& a, const Tolerance& tol) {
  const int n = a.dim();
  if (n <= 128)
    return commutant(a, Mat::Identity(n, n), tol);
  // two generic elements generate a semisimple algebra, so their commutant
  // is the center; the result is then checked against the whole basis
  Rng rng(tol.seed ^ 0x63656e746572ULL);
  Mat gens(n, 2);
  for (Eigen::Index k = 0; k < gens.size(); ++k)
    gens(k) = rng.complex();
  Mat z = commutant(a, gens, tol);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    worst = std::max(worst, max_abs(a.commutator_matrix(z.col(c))));
  if (worst > 1e3 * tol.bound(max_abs(a.structure())))
    return commutant(a, Mat::Identity(n, n), tol);
  return z;
}

bool is_commutative(const StarAlgebra& a, const Tolerance& tol) {
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst, max_abs(Element(a.left_basis(i).col(j) - a.left_basis(j).col(i))));
  return worst <= tol.bound(max_abs(a.structure()));
}

StarAlgebra tensor_product(const StarAlgebra& a, const StarAlgebra& b) {
  const int na = a.dim(), nb = b.dim();
  const Eigen::Index n = Eigen::Index(na) * nb;
  Mat structure = Mat::Zero(n, n * n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) {
          Element prod = kron(Element(a.left_basis(i).col(k)), Element(b.left_basis(j).col(l)));
          structure.col((Eigen::Index(i) * nb + j) * n + (Eigen::Index(k) * nb + l)) = prod;
        }
  return StarAlgebra(std::move(structure), kron(a.unit(), b.unit()), kron(a.involution(), b.involution()));
}

StarAlgebra matrix_algebra(int k) {
  const Eigen::Index n = Eigen::Index(k) * k;
  Mat structure = Mat::Zero(n, n * n);
  Mat invol = Mat::Zero(n, n);
  Element unit = Element::Zero(n);
  for (int i = 0; i < k; ++i) {
    unit(i * k + i) = 1.0;
    for (int j = 0; j < k; ++j) {
      invol(j * k + i, i * k + j) = 1.0;
      for (int l = 0; l < k; ++l)  // E_ij E_jl = E_il
        structure(Eigen::Index(i) * k + l, (Eigen::Index(i) * k + j) * n + (Eigen::Index(j) * k + l)) = 1.0;
    }
  }
  return StarAlgebra(std::move(structure), std::move(unit), std::move(invol));
}

StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  Mat structure = Mat::Zero(n, Eigen::Index(n) * n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      structure.col(Eigen::Index(i) * n + j).head(na) = a.left_basis(i).col(j);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      structure.col(Eigen::Index(na + i) * n + (na + j)).tail(nb) = b.left_basis(i).col(j);
  Element unit(n);
  unit << a.unit(), b.unit();
  Mat invol = Mat::Zero(n, n);
  invol.topLeftCorner(na, na) = a.involution();
  invol.bottomRightCorner(nb, nb) = b.involution();
  return StarAlgebra(std::move(structure), std::move(unit), std::move(invol));
}

double SubalgebraEmbedding::distance(const Mat& xs) const {
  return max_abs(Mat(emb * (coords * xs) - xs));
}

namespace {

Mat left_inverse(const Mat& emb) {
  return (emb.adjoint() * emb).ldlt().solve(emb.adjoint());
}

} // namespace

SubalgebraEmbedding make_subalgebra(AlgebraPtr amb, const Mat& spanning, const Tolerance& tol,
                                    std::optional<Element> unit) {
  if (spanning.rows() != amb->dim())
    throw StructureError("make_subalgebra: spanning vectors have wrong length");
  std::vector<int> cols = independent_columns(spanning, tol);
  if (cols.empty())
    throw VerificationError("make_subalgebra: empty span");
  const int m = int(cols.size());
  Mat emb(amb->dim(), m);
  for (int c = 0; c < m; ++c)
    emb.col(c) = spanning.col(cols[c]);
  Mat coords = left_inverse(emb);

  const double scale = std::max(1.0, max_abs(emb));
  double closure = 0.0;
  Mat structure(m, Eigen::Index(m) * m);
  for (int i = 0; i < m; ++i) {
    Mat li = amb->left_matrix(emb.col(i));
    Mat prods = li * emb;
    Mat c = coords * prods;
    closure = std::max(closure, max_abs(Mat(emb * c - prods)));
    structure.middleCols(Eigen::Index(i) * m, m) = c;
  }
  Mat stars(amb->dim(), m);
  for (int i = 0; i < m; ++i)
    stars.col(i) = amb->star(emb.col(i));
  Mat invol = coords * stars;
  double star_closure = max_abs(Mat(emb * invol - stars));

  Element u = unit ? *unit : amb->unit();
  Element ucoords = coords * u;
  double unit_res = max_abs(Element(emb * ucoords - u));

  const double bound = 1e3 * tol.bound(scale * scale);
  if (closure > bound)
    throw VerificationError("make_subalgebra: span not closed under multiplication (residual " +
                            std::to_string(closure) + ")");
  if (star_closure > bound)
    throw VerificationError("make_subalgebra: span not closed under involution");
  if (unit_res > bound)
    throw VerificationError("make_subalgebra: unit not in span");

  SubalgebraEmbedding e;
  e.sub = share(StarAlgebra(std::move(structure), std::move(ucoords), std::move(invol)));
  e.amb = std::move(amb);
  e.emb = std::move(emb);
  e.coords = std::move(coords);
  return e;
}

SubalgebraEmbedding make_embedding(AlgebraPtr sub, AlgebraPtr amb, Mat emb) {
  if (emb.rows() != amb->dim() || emb.cols() != sub->dim())
    throw StructureError("make_embedding: matrix shape does not match algebras");
  SubalgebraEmbedding e;
  e.coords = left_inverse(emb);
  e.sub = std::move(sub);
  e.amb = std::move(amb);
  e.emb = std::move(emb);
  return e;
}

double homomorphism_residual(const StarAlgebra& a, const StarAlgebra& b, const Mat& h) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    Mat lhs = h * a.left_basis(i);            // h(x_i x_j), column j
    Mat rhs = b.left_matrix(h.col(i)) * h;    // h(x_i) h(x_j)
    worst = std::max(worst, max_abs(Mat(lhs - rhs)));
  }
  return worst;
}

double star_residual(const StarAlgebra& a, const StarAlgebra& b, const Mat& h) {
  // h(x_i*) = h(x_i)*, with both sides linear in the basis coordinates
  Mat lhs = h * a.involution();
  Mat rhs = b.involution() * h.conjugate();
  return max_abs(Mat(lhs - rhs));
}

Report verify_embedding(const SubalgebraEmbedding& e, const Tolerance& tol) {
  Report r("embedding");
  const double scale = std::max(1.0, max_abs(e.emb));
  r.require("injective", numerical_rank(e.emb, tol) == e.sub->dim());
  r.check("unital", max_abs(Element(e.emb * e.sub->unit() - e.amb->unit())), tol.bound(scale));
  r.check("multiplicative", homomorphism_residual(*e.sub, *e.amb, e.emb), tol.bound(scale * scale));
  r.check("star_preserving", star_residual(*e.sub, *e.amb, e.emb), tol.bound(scale));
  return r;
}

} // namespace wka
