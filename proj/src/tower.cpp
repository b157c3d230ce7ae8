#include "wka/tower.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wka/linalg.hpp"

namespace wka {

namespace {

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

Mat random_elements(int n, int count, Rng& rng) {
  Mat m(n, count);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m(i) = rng.complex();
  return m;
}

// Basis of the algebra when small, otherwise enough random elements.
Mat spanning_probes(int n, int wanted, Rng& rng) {
  if (n <= wanted)
    return identity(n);
  return random_elements(n, wanted, rng);
}

Json int_matrix_json(const IntMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// Columns sorted lexicographically, so that two inclusion matrices can be
// compared up to a relabelling of the blocks of the larger algebra.
std::vector<std::vector<int>> sorted_columns(const IntMat& m) {
  std::vector<std::vector<int>> cols(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      cols[j].push_back(m(i, j));
  std::sort(cols.begin(), cols.end());
  return cols;
}

bool same_up_to_column_order(const IntMat& a, const IntMat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && sorted_columns(a) == sorted_columns(b);
}

// Rank of span{x m y} with x over the columns of xs and y over the columns of ys.
int product_span_rank(const StarAlgebra& c, const Mat& xs, const Element* middle, const Mat& ys,
                      const Tolerance& tol) {
  Mat cols(c.dim(), xs.cols() * ys.cols());
  for (Eigen::Index i = 0; i < xs.cols(); ++i) {
    Element x = xs.col(i);
    if (middle)
      x = c.multiply(x, *middle);
    cols.middleCols(i * ys.cols(), ys.cols()) = c.left_matrix(x) * ys;
  }
  return numerical_rank(cols, tol);
}

long long predicted_dim(const ActionSpec& spec) {
  const SubalgebraEmbedding& c = spec.side == Side::left ? spec.data->cartan.kt : spec.data->cartan.ks;
  return (long long)spec.dim_a() * spec.dim_k() / c.sub->dim();
}

struct ChainStep {
  CrossedProduct cp;
  Mat to_full, from_full;
};

// Crosses repeatedly with dual actions, starting from `first`, until `steps`
// products exist or the next one would exceed the cap.
std::vector<ChainStep> build_chain(const ActionSpec& first, int steps, const Mat& base_to_full,
                                   const Mat& base_from_full, int cap, const Tolerance& tol,
                                   std::vector<std::string>& warnings, const std::string& label) {
  std::vector<ChainStep> chain;
  for (int s = 0; s < steps; ++s) {
    ActionSpec spec = s == 0 ? first : dual_action_on_crossed(chain.back().cp, tol);
    long long next = predicted_dim(spec);
    if (next > cap) {
      warnings.push_back(label + ": stage " + std::to_string(s + 1) + " would have dimension " +
                         std::to_string(next) + ", above the cap " + std::to_string(cap) + "; stopped");
      break;
    }
    ChainStep st{crossed_product(spec, tol), {}, {}};
    const Mat& to = s == 0 ? base_to_full : chain.back().to_full;
    const Mat& from = s == 0 ? base_from_full : chain.back().from_full;
    const Mat ig = identity(spec.dim_k());
    if (spec.side == Side::left) {
      st.to_full = kron(to, ig) * st.cp.section;
      st.from_full = st.cp.projection * kron(from, ig);
    } else {
      st.to_full = kron(ig, to) * st.cp.section;
      st.from_full = st.cp.projection * kron(ig, from);
    }
    chain.push_back(std::move(st));
  }
  return chain;
}

// Basic-construction and Markov checks for stage j >= 1.
void check_stage(Tower& t, int j, const Tolerance& tol) {
  TowerStage& cur = t.upper[j];
  const TowerStage& prev = t.upper[j - 1];
  const StarAlgebra& C = *cur.algebra;
  const StarAlgebra& P = *prev.algebra;
  const int q = C.dim(), p = P.dim();
  const Mat& ip = cur.below.emb;                        // P -> C
  const Mat is = ip * prev.below.emb;                   // previous-but-one -> C
  const int ns = int(prev.below.emb.cols());
  const Element& e = cur.jones;
  const std::string pre = "stage" + std::to_string(j) + ".";
  Report& r = t.report;
  const double bound = 10.0 * tol.bound(q);

  r.check(pre + "jones_idempotent", max_abs(Element(C.multiply(e, e) - e)), bound);
  r.check(pre + "jones_self_adjoint", max_abs(Element(C.star(e) - e)), bound);

  Rng rng(tol.seed ^ (0x70e4ULL + std::uint64_t(j)));
  Mat xs = random_elements(p, 20, rng);
  Mat left_e = C.left_matrix(e);
  Mat right_e = C.right_matrix(e);
  double exe = 0.0;
  for (int s = 0; s < 20; ++s) {
    Element x = ip * xs.col(s);
    Element lhs = left_e * (right_e * x);
    Element rhs = right_e * (is * prev.expectation.apply(Element(xs.col(s))));
    exe = std::max(exe, max_abs(Element(lhs - rhs)) / std::max(1.0, max_abs(Element(xs.col(s)))));
  }
  r.check(pre + "exe.compression", exe, bound);
  int inj = numerical_rank(Mat(right_e * is), tol);
  r.require(pre + "exe.injective", inj == ns, "rank " + std::to_string(inj) + " of " + std::to_string(ns));

  Element ee = cur.expectation.apply(e);
  r.check(pre + "expectation_of_jones", max_abs(Element(ee - t.lambda * P.unit())), bound);

  Mat probes = spanning_probes(p, std::min(p, 2 * (q + p - 1) / p + 2), rng);
  int span = product_span_rank(C, Mat(ip * probes), &e, ip, tol);
  r.require(pre + "beb.spanning", span == q, "rank " + std::to_string(span) + " of " + std::to_string(q));
  r.require(pre + "dimension_growth", (long long)q == t.n * p,
            std::to_string(q) + " against " + std::to_string(t.n) + " * " + std::to_string(p));

  // tr_j = tr_{j-1} o E_j
  Mat g = unflatten(Element((cur.trace * C.structure()).transpose()), q, q);
  r.check(pre + "trace.tracial", max_abs(Mat(g - g.transpose())), bound);
  r.check(pre + "trace.extends", max_abs(Mat(cur.trace * ip - prev.trace)), bound);
  Functional markov = cur.trace * right_e * ip;
  r.check(pre + "trace.markov", max_abs(Mat(markov - t.lambda * prev.trace)), bound);
  r.check(pre + "trace.unit", std::abs((cur.trace * C.unit())(0) - cplx(1.0)), bound);

  // The inclusion matrix of a basic construction is the transpose of the
  // previous one.
  IntMat expected = prev.inclusion.transpose();
  bool reflected = same_up_to_column_order(cur.inclusion, expected);
  r.require(pre + "inclusion_reflects_previous", reflected);
}

} // namespace

std::vector<int> Tower::dims() const {
  std::vector<int> out;
  for (const TowerStage& s : upper)
    out.push_back(s.algebra->dim());
  return out;
}

Tower build_tower(const WeakKacAlgebra& k, int depth, const Tolerance& tol, int cap) {
  if (depth < 0)
    throw StructureError("build_tower: depth must be nonnegative");
  Tower t;
  t.report = Report("tower");
  t.requested_depth = depth;
  t.k = std::make_shared<const WeakKacAlgebra>(k);
  t.data = std::make_shared<const WkaData>(analyze(k, tol));
  const WkaData& d = *t.data;
  MarkovLambda ml = markov_lambda(k, d, tol);
  if (!ml.scalar)
    throw VerificationError("build_tower: K is not lambda-Markov");
  t.lambda = ml.lambda;
  t.n = checked_round(1.0 / ml.lambda, tol, "lambda^{-1}");
  Biconnectivity bc = biconnectivity(k, tol);
  if (!bc.biconnected())
    t.report.warnings().push_back("K is not biconnected");
  const int nk = k.dim();

  TowerStage base;
  base.algebra = k.algebra_ptr();
  base.below = d.cartan.kt;
  base.expectation = d.expectations.et;
  base.trace = d.tau / (d.tau * k.algebra().unit())(0);
  base.inclusion = inclusion_matrix(d.cartan.kt, tol);
  base.to_full = identity(nk);
  base.from_full = identity(nk);
  t.upper.push_back(base);
  {
    const StarAlgebra& K = k.algebra();
    Mat g = unflatten(Element((base.trace * K.structure()).transpose()), nk, nk);
    t.report.check("stage0.trace.tracial", max_abs(Mat(g - g.transpose())), tol.bound(nk));
    Mat et = d.cartan.kt.emb * d.expectations.et.map;
    t.report.check("stage0.trace.preserved_by_E_t", max_abs(Mat(base.trace * et - base.trace)),
                   tol.bound(nk));
  }

  ActionSpec first = dual_action(k, Side::left, tol);
  std::vector<ChainStep> upper =
      build_chain(first, depth, identity(nk), identity(nk), cap, tol, t.report.warnings(), "tower");
  for (std::size_t s = 0; s < upper.size(); ++s) {
    TowerStage st;
    st.index = int(s) + 1;
    st.cp = upper[s].cp;
    st.algebra = st.cp->algebra;
    st.below = st.cp->i_a;
    st.expectation = crossed_expectation(*st.cp, tol);
    st.jones = st.cp->i_k.embed(st.cp->spec.data->haar);
    st.trace = t.upper.back().trace * st.expectation.map;
    st.inclusion = inclusion_matrix(st.cp->i_a, tol);
    st.to_full = upper[s].to_full;
    st.from_full = upper[s].from_full;
    t.upper.push_back(std::move(st));
    check_stage(t, int(s) + 1, tol);
  }
  t.partial = t.depth() < depth;

  // lower row: K_s, then K*, K* >< K, ...
  LowerStage ls;
  ls.algebra = d.cartan.ks.sub;
  ls.into_upper = d.cartan.ks;
  t.lower.push_back(ls);
  if (t.depth() >= 1) {
    const WeakKacAlgebra& kd = *first.k;  // K*
    const int nd = kd.dim();
    LowerStage l0;
    l0.algebra = kd.algebra_ptr();
    l0.to_full = identity(nd);
    l0.from_full = identity(nd);
    std::vector<ChainStep> lower = build_chain(dual_action(kd, Side::left, tol), t.depth() - 1, identity(nd),
                                               identity(nd), cap, tol, t.report.warnings(), "lower row");
    std::vector<LowerStage> row{l0};
    for (ChainStep& c : lower) {
      LowerStage l;
      l.algebra = c.cp.algebra;
      l.cp = c.cp;
      l.to_full = c.to_full;
      l.from_full = c.from_full;
      row.push_back(std::move(l));
    }
    Mat unit_k = k.algebra().unit();
    for (std::size_t j = 1; j <= row.size() && j < t.upper.size(); ++j) {
      LowerStage& l = row[j - 1];
      l.into_upper = make_embedding(l.algebra, t.upper[j].algebra,
                                    t.upper[j].from_full * kron(unit_k, l.to_full));
      t.report.merge(verify_embedding(l.into_upper, tol), "lower" + std::to_string(j) + ".");
      t.lower.push_back(std::move(l));
    }
  }
  for (int j = 1; j < int(t.lower.size()); ++j)
    t.report.merge(commuting_square_report(t, j, tol), "square" + std::to_string(j) + ".");

  Json dims = Json::array(), lower_dims = Json::array(), incl = Json::array();
  for (const TowerStage& s : t.upper) {
    dims.push_back(s.algebra->dim());
    incl.push_back(int_matrix_json(s.inclusion));
  }
  for (const LowerStage& l : t.lower)
    lower_dims.push_back(l.algebra->dim());
  Json& v = t.report.values();
  v["lambda"] = t.lambda;
  v["lambda_inverse"] = t.n;
  v["requested_depth"] = depth;
  v["depth"] = t.depth();
  v["partial"] = t.partial;
  v["cap"] = cap;
  v["dims"] = dims;
  v["lower_dims"] = lower_dims;
  v["inclusion_matrices"] = incl;
  return t;
}

Report commuting_square_report(const Tower& t, int level, const Tolerance& tol) {
  if (level < 1 || level >= int(t.lower.size()))
    throw StructureError("commuting_square_report: level " + std::to_string(level) + " not built");
  Report r("commuting square " + std::to_string(level));
  const TowerStage& top = t.upper[level];
  const StarAlgebra& C = *top.algebra;
  const LowerStage& l = t.lower[level];
  const LowerStage& lb = t.lower[level - 1];
  const int q = C.dim();

  // E_j(L_{j-1}) lies in L_{j-2}
  Mat images = top.expectation.map * l.into_upper.emb;
  Mat target = range_basis(lb.into_upper.emb, tol);
  r.check("expectation_into_lower", distance_from_span(target, images), 10.0 * tol.bound(q));
  int image_rank = numerical_rank(images, tol);
  r.values()["image_dim"] = image_rank;
  r.values()["lower_dim"] = int(lb.into_upper.emb.cols());

  // the previous stage and the lower algebra generate the stage
  Rng rng(tol.seed ^ (0x5a0aULL + std::uint64_t(level)));
  const int p = int(top.below.emb.cols());
  const int nl = int(l.into_upper.emb.cols());
  Mat xs = top.below.emb * spanning_probes(p, std::min(p, 2 * (q + nl - 1) / nl + 2), rng);
  int span = product_span_rank(C, xs, nullptr, l.into_upper.emb, tol);
  r.require("symmetric", span == q, "rank " + std::to_string(span) + " of " + std::to_string(q));

  if (level == 1) {
    // E_K(i_{K*}(phi)) = E_t(phi) |> 1, an element of K_s
    const ActionSpec& s = top.cp->spec;
    double worst = 0.0;
    for (int phi = 0; phi < s.dim_k(); ++phi) {
      Element expected = s.op(Element(s.data->expectations.et_full.col(phi))) * s.a->unit();
      worst = std::max(worst, max_abs(Element(images.col(phi) - expected)));
    }
    r.check("dual_basis_images", worst, 10.0 * tol.bound(q));
  }
  return r;
}

Report commuting_square_check(const WeakKacAlgebra& k, const Tolerance& tol) {
  Tower t = build_tower(k, 1, tol);
  Report r = commuting_square_report(t, 1, tol);
  r.values()["dim_crossed"] = t.upper[1].algebra->dim();
  return r;
}

Report left_right_iso_check(const WeakKacAlgebra& k, int r, const Tolerance& tol, int cap) {
  if (r < 1 || r > 2)
    throw StructureError("left_right_iso_check: r must be 1 or 2");
  Report rep("left and right iterated crossed products, r = " + std::to_string(r));
  const int steps = 2 * r - 1;
  ActionSpec left = dual_action(k, Side::left, tol);
  const WeakKacAlgebra& kd = *left.k;
  ActionSpec right = dual_action(kd, Side::right, tol);
  const Mat in = identity(k.dim()), id = identity(kd.dim());
  std::vector<ChainStep> a = build_chain(left, steps, in, in, cap, tol, rep.warnings(), "left products");
  std::vector<ChainStep> b = build_chain(right, steps, id, id, cap, tol, rep.warnings(), "right products");
  rep.values()["r"] = r;
  if (int(a.size()) < steps || int(b.size()) < steps) {
    rep.values()["skipped"] = true;
    return rep;
  }
  rep.values()["skipped"] = false;
  const ChainStep& sa = a.back();
  const ChainStep& sb = b.back();
  const StarAlgebra& A = *sa.cp.algebra;
  const StarAlgebra& B = *sb.cp.algebra;
  rep.values()["dim_left"] = A.dim();
  rep.values()["dim_right"] = B.dim();
  if (sa.to_full.rows() != sb.from_full.cols()) {
    rep.require("same_tensor_space", false);
    return rep;
  }
  Mat theta = sb.from_full * sa.to_full;
  const double bound = 10.0 * tol.bound(std::max(A.dim(), B.dim()));
  rep.check("well_defined", max_abs(Mat(sb.from_full - theta * sa.from_full)), bound);
  int rank = numerical_rank(theta, tol);
  rep.require("bijective", A.dim() == B.dim() && rank == A.dim(),
              "rank " + std::to_string(rank) + ", dims " + std::to_string(A.dim()) + " and " + std::to_string(B.dim()));
  if (A.dim() != B.dim())
    return rep;
  rep.check("unital", max_abs(Element(theta * A.unit() - B.unit())), bound);
  rep.check("multiplicative", homomorphism_residual(A, B, theta), bound);
  rep.check("star_preserving", star_residual(A, B, theta), bound);
  rep.values()["coordinates_agree"] = max_abs(Mat(theta - identity(A.dim()))) <= bound;
  return rep;
}

Report relative_commutant_checks(const ActionSpec& spec, const Tolerance& tol) {
  if (spec.side != Side::left)
    throw StructureError("relative_commutant_checks: left actions only");
  Report r("commutant lemma");
  CrossedProduct cp = crossed_product(spec, tol);
  CrossedProduct cp2 = crossed_product(dual_action_on_crossed(cp, tol), tol);
  const StarAlgebra& C = *cp2.algebra;
  Mat comm = commutant(C, cp2.i_k.emb, tol);
  Mat triple = intersect(comm, cp2.i_a.emb, tol);
  Mat ia = range_basis(Mat(cp2.i_a.emb * cp.i_a.emb), tol);
  const int dim_a = spec.dim_a();
  const int got = int(triple.cols());
  r.require("commutant_lemma.dimension", got == dim_a,
            "intersection has dimension " + std::to_string(got) + ", dim A = " + std::to_string(dim_a));
  const double bound = 10.0 * tol.bound(C.dim());
  r.check("commutant_lemma.image_of_A_inside", got ? distance_from_span(triple, ia) : max_abs(ia), bound);
  r.check("commutant_lemma.inside_image_of_A", got ? distance_from_span(ia, triple) : 0.0, bound);
  r.values()["intersection_dim"] = got;
  r.values()["dim_A"] = dim_a;
  r.values()["dim_double_crossed"] = C.dim();
  return r;
}

namespace {

Fraction reduced(long long num, long long den) {
  long long g = std::gcd(num, den);
  return {num / g, den / g};
}

Json fraction_json(const Fraction& f) {
  Json j = Json::object();
  j["num"] = f.num;
  j["den"] = f.den;
  j["integral"] = f.integral();
  return j;
}

} // namespace

ArithmeticReport arithmetic_report(const WeakKacAlgebra& k, const Tolerance& tol) {
  ArithmeticReport out;
  Report& r = out.report;
  r = Report("index arithmetic");
  WkaData d = analyze(k, tol);
  MarkovLambda ml = markov_lambda(k, d, tol);
  if (!ml.scalar)
    throw VerificationError("arithmetic_report: K is not lambda-Markov");
  out.lambda_inverse = checked_round(1.0 / ml.lambda, tol, "lambda^{-1}");
  InclusionData inc = source_inclusion(k, d, tol);
  out.m = inc.m;
  out.block_dims = inc.d;
  out.dim = k.dim();
  out.d = d.cartan.ks.sub->dim();
  out.biconnected = biconnectivity(k, tol).biconnected();
  const long long n = out.lambda_inverse, dd = out.d;

  out.first_kind_integral = true;
  for (int m : out.m) {
    out.first_kind.push_back(reduced((long long)m * m * n, dd * dd));
    out.first_kind_integral = out.first_kind_integral && out.first_kind.back().integral();
  }
  out.d_divides_blocks = true;
  for (int di : out.block_dims) {
    out.second_kind.push_back(reduced((long long)di * di, dd * dd));
    out.d_divides_blocks = out.d_divides_blocks && di % dd == 0;
  }
  out.d2_divides_dim = out.dim % (dd * dd) == 0;
  out.d_divides_index = n % dd == 0;
  out.dim_is_d_times_index = out.dim == dd * n;
  out.prime_index = is_prime(n);

  auto record = [&](const std::string& name, bool ok) {
    if (out.biconnected)
      r.require(name, ok);
    else
      r.flag(name, ok);
  };
  record("dim_is_d_times_index", out.dim_is_d_times_index);
  record("first_kind_integral", out.first_kind_integral);
  record("d_divides_block_dims", out.d_divides_blocks);
  record("d_squared_divides_dim", out.d2_divides_dim);
  record("d_divides_index", out.d_divides_index);
  if (out.prime_index) {
    record("prime_index_gives_group_algebra", dd == 1 && out.dim == n);
    if (out.biconnected && dd == 1 && out.dim == n)
      r.merge(prime_dimension_report(k, d, tol), "group_algebra.");
  }
  if (!out.biconnected)
    r.warnings().push_back("K is not biconnected: the divisibility statements are not predicted");
  r.values() = to_json(out);
  return out;
}

Json to_json(const ArithmeticReport& a) {
  Json j = Json::object();
  j["lambda_inverse"] = a.lambda_inverse;
  j["d"] = a.d;
  j["dim"] = a.dim;
  j["m"] = a.m;
  j["block_dims"] = a.block_dims;
  Json fk = Json::array(), sk = Json::array();
  for (const Fraction& f : a.first_kind)
    fk.push_back(fraction_json(f));
  for (const Fraction& f : a.second_kind)
    sk.push_back(fraction_json(f));
  j["first_kind_indices"] = fk;
  j["second_kind_indices"] = sk;
  j["biconnected"] = a.biconnected;
  j["first_kind_integral"] = a.first_kind_integral;
  j["d_divides_block_dims"] = a.d_divides_blocks;
  j["d_squared_divides_dim"] = a.d2_divides_dim;
  j["d_divides_index"] = a.d_divides_index;
  j["dim_is_d_times_index"] = a.dim_is_d_times_index;
  j["prime_index"] = a.prime_index;
  if (a.prime_index)
    j["note"] = "lambda^{-1} is prime, so K is the group algebra of Z_" + std::to_string(a.lambda_inverse);
  return j;
}

} // namespace wka
