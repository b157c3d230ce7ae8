#include "wka/wedderburn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wka/linalg.hpp"

namespace wka {

namespace {

constexpr int kRetries = 16;

Element random_element(const Mat& basis, Rng& rng) {
  Element c(basis.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c(i) = rng.complex();
  return basis * c;
}

Element random_self_adjoint(const StarAlgebra& a, const Mat& basis, Rng& rng) {
  Element w = random_element(basis, rng);
  return w + a.star(w);
}

double min_gap(const Eigen::VectorXd& values) {
  Eigen::VectorXd v = values;
  std::sort(v.data(), v.data() + v.size());
  double gap = INFINITY;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    gap = std::min(gap, v(i) - v(i - 1));
  return gap;
}

// Lexicographic comparison of coordinate vectors, ignoring differences below eps.
bool coords_less(const Element& x, const Element& y, double eps) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (std::abs(x(k).real() - y(k).real()) > eps)
      return x(k).real() < y(k).real();
    if (std::abs(x(k).imag() - y(k).imag()) > eps)
      return x(k).imag() < y(k).imag();
  }
  return false;
}

} // namespace

Mat minimal_projections(const StarAlgebra& a, const Mat& basis, const Tolerance& tol) {
  const int n = a.dim();
  Mat q = range_basis(basis, tol);
  const Eigen::Index c = q.cols();
  if (c == 0)
    return Mat(n, 0);
  if (c == 1) {
    Element v = q.col(0);
    cplx alpha = v.dot(a.multiply(v, v)) / v.squaredNorm();
    if (std::abs(alpha) < tol.bound())
      throw DecompositionError("minimal_projections: nilpotent one-dimensional algebra");
    Mat out(n, 1);
    out.col(0) = v / alpha;
    return out;
  }

  Rng rng(tol.seed ^ 0x6d696e70ULL ^ std::uint64_t(c) * 0x9e3779b97f4a7c15ULL);
  double last_gap = 0.0;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    Element z = random_self_adjoint(a, q, rng);
    Mat m = q.adjoint() * (a.left_matrix(z) * q);
    Eigen::ComplexEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success)
      continue;
    Eigen::VectorXd ev = es.eigenvalues().real();
    double spread = ev.maxCoeff() - ev.minCoeff();
    last_gap = min_gap(ev);
    if (last_gap <= std::max(tol.cluster_gap(), 1e-7 * (1.0 + spread)))
      continue;

    Mat out(n, c);
    bool ok = true;
    for (Eigen::Index k = 0; k < c && ok; ++k) {
      Element v = q * es.eigenvectors().col(k);
      cplx alpha = v.dot(a.multiply(v, v)) / v.squaredNorm();
      if (std::abs(alpha) < 1e-12) {
        ok = false;
        break;
      }
      Element p = v / alpha;
      p = 0.5 * (p + a.star(p));
      for (int it = 0; it < 2; ++it) {
        Element p2 = a.multiply(p, p);
        p = 3.0 * p2 - 2.0 * a.multiply(p2, p);
      }
      out.col(k) = p;
    }
    if (!ok)
      continue;

    // the projections must be idempotent, mutually orthogonal and complete
    const double bound = 1e2 * tol.bound(std::max(1.0, max_abs(out)));
    double worst = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) {
      Mat lk = a.left_matrix(out.col(k));
      Mat prods = lk * out;
      prods.col(k) -= out.col(k);
      worst = std::max(worst, max_abs(prods));
    }
    if (worst > bound)
      continue;
    return out;
  }
  throw DecompositionError("minimal_projections: eigenvalues did not separate after " +
                           std::to_string(kRetries) + " attempts (seed " + std::to_string(tol.seed) +
                           ", last gap " + std::to_string(last_gap) + ")");
}

BlockDecomposition block_decompose(const StarAlgebra& a, const Tolerance& tol) {
  Mat z = center(a, tol);
  Mat p = minimal_projections(a, z, tol);
  Functional tr = regular_trace(a);

  std::vector<int> dims;
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    double t = (tr * p.col(i))(0).real();
    long long d = checked_round(std::sqrt(std::max(t, 0.0)), Tolerance{1e-6, 1e-6, tol.seed},
                                "block dimension");
    dims.push_back(int(d));
  }
  std::vector<int> order(dims.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    if (dims[x] != dims[y])
      return dims[x] < dims[y];
    return coords_less(p.col(x), p.col(y), 1e-6);
  });

  BlockDecomposition dec;
  dec.central_projections.resize(a.dim(), p.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    dec.central_projections.col(Eigen::Index(k)) = p.col(order[k]);
    dec.block_dims.push_back(dims[order[k]]);
  }
  int total = 0;
  for (int d : dec.block_dims)
    total += d * d;
  if (total != a.dim())
    throw DecompositionError("block_decompose: block dimensions do not add up (sum d_i^2 = " +
                             std::to_string(total) + ", dim = " + std::to_string(a.dim()) + ")");
  return dec;
}

Report verify_block_decomposition(const StarAlgebra& a, const BlockDecomposition& dec,
                                  const Tolerance& tol) {
  Report r("block decomposition");
  const Mat& q = dec.central_projections;
  Element sum = q.rowwise().sum();
  r.check("sum_to_unit", max_abs(Element(sum - a.unit())), tol.bound());
  double orth = 0.0, herm = 0.0, central = 0.0;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    Mat prods = a.left_matrix(q.col(i)) * q;
    prods.col(i) -= q.col(i);
    orth = std::max(orth, max_abs(prods));
    herm = std::max(herm, max_abs(Element(a.star(q.col(i)) - q.col(i))));
    central = std::max(central, max_abs(a.commutator_matrix(q.col(i))));
  }
  r.check("orthogonal_idempotents", orth, tol.bound());
  r.check("self_adjoint", herm, tol.bound());
  r.check("central", central, tol.bound(max_abs(a.structure())));
  int total = 0;
  for (int d : dec.block_dims)
    total += d * d;
  r.require("dimension_count", total == a.dim());
  return r;
}

MatrixUnitSystem matrix_units(const StarAlgebra& a, const BlockDecomposition& dec,
                              const Tolerance& tol) {
  const int n = a.dim();
  const int nb = dec.blocks();
  int expected = 0;
  for (int d : dec.block_dims)
    expected += d;

  Rng rng(tol.seed ^ 0x756e697473ULL);
  Functional tr = regular_trace(a);
  Mat ident = Mat::Identity(n, n);

  for (int attempt = 0; attempt < kRetries; ++attempt) {
    // the commutant of a generic self-adjoint element is a maximal abelian subalgebra
    Element h = random_self_adjoint(a, ident, rng);
    Mat masa = commutant(a, h, tol);
    if (masa.cols() != expected)
      continue;
    Mat p;
    try {
      p = minimal_projections(a, masa, Tolerance{tol.abs_tol, tol.rel_tol, rng.index(1u << 30)});
    } catch (const DecompositionError&) {
      continue;
    }

    std::vector<std::vector<Element>> per_block(nb);
    bool ok = true;
    for (Eigen::Index k = 0; k < p.cols() && ok; ++k) {
      int owner = -1;
      for (int i = 0; i < nb; ++i) {
        cplx t = (tr * a.multiply(dec.central_projections.col(i), p.col(k)))(0);
        if (std::abs(t - double(dec.block_dims[i])) < 1e-6) {
          owner = i;
          break;
        }
      }
      if (owner < 0)
        ok = false;
      else
        per_block[owner].push_back(p.col(k));
    }
    for (int i = 0; i < nb && ok; ++i)
      ok = int(per_block[i].size()) == dec.block_dims[i];
    if (!ok)
      continue;

    MatrixUnitSystem mu;
    mu.block_dims = dec.block_dims;
    for (int i = 0; i < nb && ok; ++i) {
      const int d = dec.block_dims[i];
      Mat units(n, Eigen::Index(d) * d);
      const Element& p1 = per_block[i][0];
      double tr_p1 = (tr * p1)(0).real();
      std::vector<Element> row(d), col(d);  // e_1k and e_k1
      row[0] = col[0] = p1;
      for (int k = 1; k < d && ok; ++k) {
        ok = false;
        for (int tries = 0; tries < 8; ++tries) {
          Element x = random_element(ident, rng);
          Element y = a.multiply(a.multiply(p1, x), per_block[i][k]);
          double alpha = (tr * a.multiply(y, a.star(y)))(0).real() / tr_p1;
          if (alpha > 1e-6) {
            row[k] = y / std::sqrt(alpha);
            col[k] = a.star(row[k]);
            ok = true;
            break;
          }
        }
      }
      if (!ok)
        break;
      for (int k = 0; k < d; ++k) {
        Mat lk = a.left_matrix(col[k]);
        for (int l = 0; l < d; ++l)
          units.col(Eigen::Index(k) * d + l) = lk * row[l];
      }
      mu.units.push_back(std::move(units));
    }
    if (!ok)
      continue;
    return mu;
  }
  throw DecompositionError("matrix_units: could not split blocks into rank-one projections (seed " +
                           std::to_string(tol.seed) + ")");
}

Report verify_matrix_units(const StarAlgebra& a, const MatrixUnitSystem& mu, const Tolerance& tol) {
  Report r("matrix units");
  const int n = a.dim();
  const int nb = int(mu.units.size());
  Mat all(n, 0);
  std::vector<std::pair<int, int>> owner;  // (block, index within block)
  for (int i = 0; i < nb; ++i) {
    Mat tmp(n, all.cols() + mu.units[i].cols());
    tmp << all, mu.units[i];
    all = std::move(tmp);
    for (Eigen::Index k = 0; k < mu.units[i].cols(); ++k)
      owner.emplace_back(i, int(k));
  }

  auto expected = [&](int u, int v) -> Element {
    auto [bi, ki] = owner[u];
    auto [bj, kj] = owner[v];
    const int d = mu.block_dims[bi];
    if (bi != bj)
      return Element::Zero(n);
    int k = ki / d, l = ki % d, p = kj / d, q = kj % d;
    if (l != p)
      return Element::Zero(n);
    return mu.unit(bi, k, q);
  };

  double rel = 0.0;
  const Eigen::Index m = all.cols();
  if (n <= 100) {
    for (Eigen::Index u = 0; u < m; ++u) {
      Mat prods = a.left_matrix(all.col(u)) * all;
      for (Eigen::Index v = 0; v < m; ++v)
        rel = std::max(rel, max_abs(Element(prods.col(v) - expected(int(u), int(v)))));
    }
  } else {
    Rng rng(tol.seed ^ 0x7665726966ULL);
    for (int s = 0; s < 400; ++s) {
      int u = int(rng.index(std::size_t(m))), v = int(rng.index(std::size_t(m)));
      rel = std::max(rel, max_abs(Element(a.multiply(all.col(u), all.col(v)) - expected(u, v))));
    }
  }
  r.check("relations", rel, tol.bound(std::max(1.0, max_abs(all))));

  double star = 0.0;
  Element sum = Element::Zero(n);
  for (int i = 0; i < nb; ++i) {
    const int d = mu.block_dims[i];
    for (int k = 0; k < d; ++k) {
      sum += mu.unit(i, k, k);
      for (int l = 0; l < d; ++l)
        star = std::max(star, max_abs(Element(a.star(mu.unit(i, k, l)) - mu.unit(i, l, k))));
    }
  }
  r.check("adjoint", star, tol.bound());
  r.check("sum_to_unit", max_abs(Element(sum - a.unit())), tol.bound());
  return r;
}

IntMat inclusion_matrix(const SubalgebraEmbedding& e, const MatrixUnitSystem& sub_units,
                        const BlockDecomposition& amb_dec, const Tolerance& tol) {
  const int nl = int(sub_units.units.size());
  const int nn = amb_dec.blocks();
  Functional tr = regular_trace(*e.amb);
  IntMat lambda(nl, nn);
  for (int alpha = 0; alpha < nl; ++alpha) {
    Element f = e.embed(sub_units.unit(alpha, 0, 0));
    Mat lf = e.amb->right_matrix(f);
    for (int i = 0; i < nn; ++i) {
      double t = (tr * (lf * amb_dec.central_projections.col(i)))(0).real();
      double v = t / amb_dec.block_dims[i];
      lambda(alpha, i) = int(checked_round(v, Tolerance{1e-6, 1e-6, tol.seed}, "inclusion matrix entry"));
      if (lambda(alpha, i) < 0)
        throw VerificationError("inclusion matrix entry is negative");
    }
  }
  std::vector<int> m = sub_units.block_dims;
  for (int i = 0; i < nn; ++i) {
    long long s = 0;
    for (int alpha = 0; alpha < nl; ++alpha)
      s += (long long)lambda(alpha, i) * m[alpha];
    if (s != amb_dec.block_dims[i])
      throw VerificationError("inclusion matrix: Lambda^t m != d at block " + std::to_string(i) +
                              " (embedding not unital?)");
  }
  return lambda;
}

IntMat inclusion_matrix(const SubalgebraEmbedding& e, const Tolerance& tol) {
  BlockDecomposition sub_dec = block_decompose(*e.sub, tol);
  MatrixUnitSystem sub_units = matrix_units(*e.sub, sub_dec, tol);
  BlockDecomposition amb_dec = block_decompose(*e.amb, tol);
  return inclusion_matrix(e, sub_units, amb_dec, tol);
}

PerronData perron_eigen(const RealMat& m, int max_iterations) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n)
    throw StructureError("perron_eigen: matrix must be square and nonempty");
  if ((m.array() < 0).any())
    throw StructureError("perron_eigen: matrix has negative entries");

  PerronData out;
  // irreducible iff (I + adjacency)^(n-1) is entrywise positive
  Eigen::MatrixXi reach = (m.array() > 0).cast<int>().matrix();
  reach += Eigen::MatrixXi::Identity(n, n);
  for (Eigen::Index step = 1; step < n; step *= 2)
    reach = ((reach * reach).array() > 0).cast<int>().matrix();
  out.irreducible = (reach.array() > 0).all();

  RealMat shifted = m + RealMat::Identity(n, n);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = shifted * v;
    w /= w.norm();
    if ((w - v).lpNorm<Eigen::Infinity>() < 1e-13) {
      v = w;
      converged = true;
      break;
    }
    v = w;
  }
  if (!converged)
    throw VerificationError("perron_eigen: power iteration did not converge");
  out.value = v.dot(m * v) / v.squaredNorm();
  double smallest = INFINITY;
  for (Eigen::Index i = 0; i < n; ++i)
    if (v(i) > 1e-12)
      smallest = std::min(smallest, v(i));
  out.vector = v / smallest;
  for (Eigen::Index i = 0; i < n; ++i)
    if (out.vector(i) < 1e-10)
      out.vector(i) = 0.0;
  return out;
}

RealMat to_real(const IntMat& m) { return m.cast<double>(); }

Eigen::VectorXd to_real(const std::vector<int>& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out(Eigen::Index(i)) = v[i];
  return out;
}

} // namespace wka
