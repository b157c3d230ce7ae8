// Command-line driver: generates examples, verifies objects and writes
// reports.  Exit status 0 when every hard check passes, 1 when a check
// fails, 2 on malformed input or usage errors.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "wka/io.hpp"
#include "wka/linalg.hpp"
#include "wka/tower.hpp"

using namespace wka;

namespace {

struct Options {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string report_path;
  std::string out = "-";
  bool json = false;
};

Tolerance make_tolerance(const Options& o) {
  Tolerance t = tolerance_from_env();
  if (o.tol) {
    if (!(*o.tol > 0.0))
      throw Error("--tol must be positive");
    t.abs_tol = t.rel_tol = *o.tol;
  }
  if (o.seed)
    t.seed = *o.seed;
  return t;
}

Json load(const std::string& path) {
  return parse_document(read_text(path), path == "-" ? "<stdin>" : path);
}

WeakKacAlgebra load_wka(const std::string& path) { return weak_kac_from_json(load(path)); }

void emit_object(const Json& doc, const Options& o) { write_text(o.out, serialize(doc)); }

// Text (or JSON with --json) on stdout, or on stderr when stdout carries an
// object; the JSON report goes to --report when given.
void emit_report(const Report& r, const Options& o, bool stdout_taken = false) {
  std::ostream& os = stdout_taken ? std::cerr : std::cout;
  if (o.json)
    os << r.to_json().dump(2) << '\n';
  else
    os << r.to_text();
  if (!o.report_path.empty())
    write_text(o.report_path, r.to_json().dump(2) + "\n");
}

IntMat group_table(int cyclic, int symmetric) {
  if ((cyclic > 0) == (symmetric > 0))
    throw Error("give exactly one of --cyclic N and --symmetric N");
  return cyclic > 0 ? cyclic_group_table(cyclic) : symmetric_group_table(symmetric);
}

Side parse_side(const std::string& s) { return s == "right" ? Side::right : Side::left; }

// The action file must act on the given weak Kac algebra.
void check_same_algebra(const WeakKacAlgebra& k, const ActionSpec& s, const Tolerance& tol) {
  const WeakKacAlgebra& ks = *s.k;
  bool same = k.dim() == ks.dim() && k.algebra().same_structure(ks.algebra(), tol.bound()) &&
              max_abs(Mat(k.comult() - ks.comult())) <= tol.bound() &&
              max_abs(Mat(k.antipode() - ks.antipode())) <= tol.bound();
  if (!same)
    throw Error("the action file acts by a different weak Kac algebra");
}

Report verify_document(const Json& doc, const Tolerance& tol) {
  std::string kind = kind_of(doc);
  if (kind == "star_algebra")
    return verify_star_algebra(star_algebra_from_json(doc), tol);
  if (kind == "weak_kac")
    return verify_wka(weak_kac_from_json(doc), tol);
  if (kind == "action")
    return validate_action(action_from_json(doc, tol), tol);
  return verify_crossed_product(crossed_product_from_json(doc, tol), tol);
}

Report haar_report(const WeakKacAlgebra& k, const Tolerance& tol) {
  Report r("Haar projection and trace");
  WkaData d = analyze(k, tol);
  r.merge(verify_haar_projection(k, d.counital, d.haar, tol), "projection.");
  r.merge(verify_haar_trace(k, d.tau, tol), "trace.");
  r.values()["haar_projection"] = vector_to_json(d.haar);
  r.values()["haar_trace"] = vector_to_json(d.tau.transpose());
  return r;
}

Report markov_report(const WeakKacAlgebra& k, const Tolerance& tol) {
  Report r("lambda-Markov condition");
  WkaData d = analyze(k, tol);
  MarkovLambda ml = markov_lambda(k, d, tol);
  r.values()["scalar"] = ml.scalar;
  r.values()["spectrum"] = ml.spectrum;
  r.require("lambda_markov", ml.scalar, ml.scalar ? "" : "E_s(p_eps) is not a scalar");
  if (!ml.scalar)
    return r;
  MarkovReport mr = verify_equivalences(k, d, ml.lambda, tol);
  r.merge(mr.report, "equivalences.");
  EsBasis xs = construct_es_basis(k, d, ml.lambda, tol);
  r.merge(xs.report, "es_basis.");
  r.merge(et_basis_from_es(k, d, xs.x, tol).report, "et_basis.");
  r.merge(markov_trace_check(k, d, mr.inclusion, ml.lambda, tol), "trace.");
  r.values()["lambda"] = ml.lambda;
  r.values()["lambda_inverse"] = mr.n;
  r.values()["lambda_inverse_from"] = {{"haar", mr.inv_from_haar},
                                       {"trace", mr.inv_from_trace},
                                       {"perron", mr.inv_from_perron},
                                       {"dimension", mr.inv_from_dimension},
                                       {"norm", mr.inv_from_norm}};
  r.values()["equivalences"] = mr.report.values();
  return r;
}

Report full_report(const WeakKacAlgebra& k, const Tolerance& tol) {
  Report r("weak Kac algebra");
  Report axioms = verify_wka(k, tol);
  r.merge(axioms, "axioms.");
  r.values()["dim"] = k.dim();
  if (!axioms.passed())
    return r;
  WkaData d = analyze(k, tol);
  r.values()["dim_source"] = d.cartan.ks.sub->dim();
  r.values()["kac_algebra"] = is_kac_algebra(k, tol);
  bool decomposable = is_decomposable(k, d, tol);
  r.values()["decomposable"] = decomposable;
  Biconnectivity bc = biconnectivity(k, tol);
  r.merge(bc.primal.report, "connectivity.");
  r.merge(bc.dual.report, "dual_connectivity.");
  r.values()["connected"] = bc.primal.connected;
  r.values()["biconnected"] = bc.biconnected();
  r.merge(trivial_crossed_isomorphism(k, Side::left, tol), "target_crossed.");
  r.merge(trivial_crossed_isomorphism(k, Side::right, tol), "source_crossed.");
  MarkovLambda ml = markov_lambda(k, d, tol);
  r.values()["lambda_spectrum"] = ml.spectrum;
  if (!ml.scalar) {
    r.warnings().push_back("E_s(p_eps) is not a scalar: K is not lambda-Markov");
    return r;
  }
  r.values()["lambda_inverse"] = 1.0 / ml.lambda;
  if (bc.primal.connected)
    r.merge(commuting_square_check(k, tol), "commuting_square.");
  ArithmeticReport ar = arithmetic_report(k, tol);
  r.merge(ar.report, "arithmetic.");
  r.values()["arithmetic"] = to_json(ar);
  Report prime = prime_dimension_report(k, d, tol);
  r.merge(prime, "prime_dimension.");
  r.values()["prime_dimension"] = prime.values();
  return r;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional weak Kac algebras: generation, verification and reports"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "absolute and relative tolerance (default 1e-9 or WKA_TOL)");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  app.add_option("--report", o.report_path, "write the JSON report to this file");
  app.add_flag("--json", o.json, "print the report as JSON instead of text");

  CLI::App* gen = app.add_subcommand("gen", "generate an example object (JSON on stdout or -o)");
  gen->require_subcommand(1);
  int cyclic = 0, symmetric = 0, n = 0, order = 0;
  std::string side = "left", file, file2, action_file, algebra_file;
  CLI::App* g_group = gen->add_subcommand("group", "group algebra C G");
  g_group->add_option("--cyclic", cyclic, "Z_N");
  g_group->add_option("--symmetric", symmetric, "S_N");
  CLI::App* g_dual = gen->add_subcommand("dualgroup", "function algebra (C G)*");
  g_dual->add_option("--cyclic", cyclic, "Z_N");
  g_dual->add_option("--symmetric", symmetric, "S_N");
  CLI::App* g_pg = gen->add_subcommand("pairgroupoid", "algebra of the pair groupoid on N points");
  g_pg->add_option("n", n, "number of points")->required();
  CLI::App* g_ts = gen->add_subcommand("twosided-example", "A >< H >< A for H = C Z_N, A = H*");
  g_ts->add_option("--order", order, "N")->required();
  CLI::App* g_triv = gen->add_subcommand("trivial-action", "action of K on K_t (left) or K_s (right)");
  g_triv->add_option("file", file, "weak Kac algebra")->default_val("-");
  g_triv->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
  CLI::App* g_da = gen->add_subcommand("dual-action", "action of K* on K");
  g_da->add_option("file", file, "weak Kac algebra")->default_val("-");
  g_da->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
  CLI::App* g_sum = gen->add_subcommand("directsum", "direct sum of two weak Kac algebras");
  g_sum->add_option("first", file)->required();
  g_sum->add_option("second", file2)->required();
  for (CLI::App* s : {g_group, g_dual, g_pg, g_ts, g_triv, g_da, g_sum})
    s->add_option("-o,--output", o.out, "output file");

  auto with_file = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("file", file, "input file, - for stdin")->default_val("-");
    return s;
  };
  CLI::App* c_verify = with_file("verify", "check every axiom of the object in FILE");
  CLI::App* c_dual = with_file("dual", "write the dual weak Kac algebra");
  c_dual->add_option("-o,--output", o.out, "output file");
  CLI::App* c_haar = with_file("haar", "Haar projection and normalized Haar trace");
  CLI::App* c_markov = with_file("markov", "lambda, the equivalent Markov criteria and bases");
  CLI::App* c_cross = with_file("cross", "crossed product by the action in --action");
  c_cross->add_option("--action", action_file, "action file")->required();
  c_cross->add_option("-o,--output", o.out, "output file");
  CLI::App* c_duality = with_file("duality", "duality (A >< K) >< K* = M_n(A)");
  c_duality->add_option("--algebra", algebra_file, "action of K on A (default: trivial action on K_t)");
  CLI::App* c_tower = with_file("tower", "stages of the tower of iterated crossed products");
  int depth = 1, cap = default_tower_cap, lr = 1;
  c_tower->add_option("--depth", depth, "number of crossed products")->required()->check(CLI::NonNegativeNumber);
  c_tower->add_option("--cap", cap, "largest stage dimension built")->check(CLI::PositiveNumber);
  c_tower->add_option("--left-right", lr, "r for the left/right product comparison (0 skips)")
      ->check(CLI::Range(0, 2));
  CLI::App* c_report = with_file("report", "summary: axioms, connectivity, lambda, arithmetic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const Tolerance tol = make_tolerance(o);
    std::optional<Report> report;
    bool stdout_taken = false;

    if (gen->parsed()) {
      if (g_group->parsed())
        emit_object(to_json(from_group(group_table(cyclic, symmetric))), o);
      else if (g_dual->parsed())
        emit_object(to_json(from_dual_group(group_table(cyclic, symmetric))), o);
      else if (g_pg->parsed())
        emit_object(to_json(from_pair_groupoid(n)), o);
      else if (g_ts->parsed()) {
        if (order < 1)
          throw Error("--order must be positive");
        WeakKacAlgebra h = from_group(cyclic_group_table(order));
        TwoSided ts = two_sided_crossed_product(kac_subalgebra_example(h, Mat::Identity(order, order), tol), tol);
        emit_object(to_json(*ts.k), o);
      } else if (g_triv->parsed())
        emit_object(to_json(trivial_action(load_wka(file), parse_side(side), tol)), o);
      else if (g_da->parsed())
        emit_object(to_json(dual_action(load_wka(file), parse_side(side), tol)), o);
      else if (g_sum->parsed())
        emit_object(to_json(direct_sum(load_wka(file), load_wka(file2))), o);
      return 0;
    }

    if (c_verify->parsed()) {
      report = verify_document(load(file), tol);
    } else if (c_dual->parsed()) {
      WeakKacAlgebra d = dual(load_wka(file));
      emit_object(to_json(d), o);
      stdout_taken = o.out == "-";
      report = verify_wka(d, tol);
    } else if (c_haar->parsed()) {
      report = haar_report(load_wka(file), tol);
    } else if (c_markov->parsed()) {
      report = markov_report(load_wka(file), tol);
    } else if (c_cross->parsed()) {
      WeakKacAlgebra k = load_wka(file);
      ActionSpec spec = action_from_json(load(action_file), tol);
      check_same_algebra(k, spec, tol);
      Report r("crossed product");
      r.merge(validate_action(spec, tol), "action.");
      CrossedProduct cp = crossed_product(spec, tol);
      r.merge(verify_crossed_product(cp, tol), "crossed.");
      emit_object(to_json(cp), o);
      stdout_taken = o.out == "-";
      report = r;
    } else if (c_duality->parsed()) {
      WeakKacAlgebra k = load_wka(file);
      ActionSpec spec = algebra_file.empty() ? trivial_action(k, Side::left, tol)
                                             : action_from_json(load(algebra_file), tol);
      check_same_algebra(k, spec, tol);
      Duality du = duality_isomorphism(spec, tol);
      Report r = du.report;
      r.merge(relative_commutant_checks(spec, tol), "");
      report = r;
    } else if (c_tower->parsed()) {
      WeakKacAlgebra k = load_wka(file);
      Tower t = build_tower(k, depth, tol, cap);
      Report r = t.report;
      if (lr > 0) {
        Report lrr = left_right_iso_check(k, lr, tol, cap);
        r.merge(lrr, "left_right.");
        for (const std::string& w : lrr.warnings())
          r.warnings().push_back(w);
        r.values()["left_right"] = lrr.values();
      }
      report = r;
    } else if (c_report->parsed()) {
      report = full_report(load_wka(file), tol);
    }

    emit_report(*report, o, stdout_taken);
    if (const Check* c = report->first_failure()) {
      std::cerr << "wka: check '" << c->name << "' failed";
      if (c->bound > 0.0)
        std::cerr << " (residual " << c->residual << ", bound " << c->bound << ")";
      if (!c->note.empty())
        std::cerr << ": " << c->note;
      std::cerr << '\n';
      return 1;
    }
    return 0;
  } catch (const VerificationError& e) {
    std::cerr << "wka: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wka: " << e.what() << '\n';
    return 2;
  }
}
