#include "cli.hpp"

#include "dieu/counting.hpp"
#include "dieu/harness.hpp"
#include "dieu/supersingular.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <ostream>
#include <sstream>

namespace dieu::cli {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    invalid(path + ": " + e.what());
  }
}

// A module file holds the matrix object itself or {"module": matrix}.
const Json& unwrap(const Json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return j;
}

FqElement fq_value(const Json& j, const FqField& k, const FieldSource& src) {
  if (j.is_number_integer()) return k.from_int(j.get<long long>());
  if (j.is_string()) return parse_fq(j.get<std::string>(), k);
  const FqElement x = fq_from_json(j, src);
  return x.field() == k ? x : embed(x, k);
}

struct Context {
  Config cfg;
  FieldSource src;

  int precision(int n) const { return n > 0 ? n : cfg.default_precision; }
};

// Shared option block for commands that build W_n(F_{p^m}) from flags.
struct RingFlags {
  int p = 0, m = 1, n = 0;
  void add(CLI::App* app) {
    app->add_option("-p,--prime", p, "residue characteristic");
    app->add_option("-m,--degree", m, "residue field degree")->check(CLI::PositiveNumber);
    app->add_option("-n", n, "Witt precision (default: --precision)");
  }
  WittRing ring(const Context& ctx) const {
    if (p == 0) invalid("-p is required");
    const int prec = ctx.precision(n);
    if (prec < 1) invalid("precision must be >= 1");
    return WittRing::make(ctx.src.field(p, m), prec);
  }
};

struct PolyFlags {
  std::string expr, file;
  RingFlags ring;
  void add(CLI::App* app) {
    auto* e = app->add_option("--poly", expr, "twisted polynomial, e.g. \"F^2 - (1+p)*F + p\"");
    auto* f = app->add_option("--poly-file", file, "polynomial JSON")->check(CLI::ExistingFile);
    e->excludes(f);
    ring.add(app);
  }
  bool given() const { return !expr.empty() || !file.empty(); }
  TwistedPoly get(const Context& ctx) const {
    if (!file.empty()) return poly_from_json(unwrap(read_json_file(file), "poly"), ctx.src);
    if (expr.empty()) invalid("--poly or --poly-file is required");
    return parse_twisted_poly(expr, ring.ring(ctx));
  }
};

DieudonneModule load_module(const std::string& path, const Context& ctx) {
  return DieudonneModule(matrix_from_json(unwrap(read_json_file(path), "module"), ctx.src));
}

Json factor_json(const FirstSlopeFactor& f) {
  return {{"Q", to_json(f.Q)}, {"s", f.s}, {"r", f.r}, {"u", to_json(f.u)},
          {"field_degree", f.field.m()}, {"precision", f.precision}};
}

Json parameter_json(const SurfaceParameter& t) {
  Json j = {{"text", t.to_string()}, {"generic", t.is_generic()}, {"degree", t.degree()}};
  if (!t.is_generic()) {
    j["a"] = to_json(t.a());
    j["b"] = to_json(t.b());
  }
  return j;
}

Json class_json(const SurfaceClass& c) { return {{"kind", to_string(c.kind)}, {"lambda_size", c.lambda_size}}; }

// "(a:b)", "inf", "generic", or an affine coordinate t meaning (1:t).
SurfaceParameter parse_parameter(const std::string& text, int p, const FqField& k) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s == "generic") return SurfaceParameter::generic(p);
  if (s == "inf" || s == "infinity") return SurfaceParameter::infinity(k);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    const auto colon = s.find(':');
    if (colon == std::string::npos) invalid("expected (a:b), got " + text);
    return SurfaceParameter(parse_fq(s.substr(1, colon - 1), k),
                            parse_fq(s.substr(colon + 1, s.size() - colon - 2), k));
  }
  return SurfaceParameter::affine(parse_fq(s, k));
}

void render(const Json& j, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  auto scalar_array = [](const Json& a) {
    return std::all_of(a.begin(), a.end(), [](const Json& x) {
      return x.is_primitive() || (x.is_array() && std::all_of(x.begin(), x.end(), [](const Json& y) { return y.is_primitive(); }));
    });
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    const std::string key = j.is_object() ? it.key() : "-";
    if (v.is_primitive() || (v.is_array() && scalar_array(v))) {
      os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    } else {
      os << pad << key << ":\n";
      render(v, indent + 2, os);
    }
  }
}

}  // namespace

std::string render_json(const Json& j) { return j.dump(); }

std::string render_table(const Json& j) {
  std::ostringstream os;
  if (j.is_primitive()) return j.dump() + "\n";
  render(j, 0, os);
  return os.str();
}

namespace {

using Handler = std::function<Json(const Context&)>;

Json self_check(const Context& ctx, int trials, std::uint64_t seed, int n) {
  Json witt = Json::array();
  bool ok = true;
  for (auto [p, wn] : {std::pair{2, 3}, {3, 2}, {5, 2}}) {
    const WittOracleReport r = witt_oracle_check(p, wn, 100, seed);
    ok = ok && r.pass;
    Json e = {{"p", p}, {"n", wn}, {"trials", r.trials}, {"pass", r.pass}};
    if (!r.pass) e["counterexample"] = r.counterexample;
    witt.push_back(e);
  }
  // Trials are split into independently seeded chunks, one per thread.
  const int chunks = std::max(1, std::min(ctx.cfg.threads, trials));
  std::vector<std::future<CrossCheckReport>> jobs;
  for (int c = 0; c < chunks; ++c) {
    const int t = trials / chunks + (c < trials % chunks ? 1 : 0);
    jobs.push_back(std::async(chunks > 1 ? std::launch::async : std::launch::deferred,
                              [t, s = seed + static_cast<std::uint64_t>(c), n] { return slope_crosscheck(t, s, n); }));
  }
  int total = 0, passed = 0;
  Json failures = Json::array();
  for (auto& f : jobs) {
    const CrossCheckReport r = f.get();
    total += r.trials;
    passed += r.passed;
    for (const auto& msg : r.failures) failures.push_back(msg);
  }
  ok = ok && passed == total;
  return {{"witt_oracle", witt},
          {"slope_crosscheck", {{"trials", total}, {"passed", passed}, {"n", n}, {"failures", failures}}},
          {"pass", ok}};
}

Json census_json(int p, bool compare) {
  const SupersingularCensus c = enumerate_supersingular(p);
  const MassReport m = mass_check(c);
  Json js = Json::array();
  for (const auto& j : c.j_invariants) js.push_back(to_string(j));
  Json out = {{"p", p},
              {"count", c.count},
              {"j_invariants", js},
              {"aut_orders", c.aut_orders},
              {"mass", to_json(c.mass)},
              {"mass_expected", to_json(m.expected)},
              {"mass_ok", m.ok},
              {"curves_checked", c.curves_checked},
              {"criteria_agree", c.criteria_agree}};
  if (compare) {
    Json f;
    if (p == 2) {
      f["printed"] = nullptr;
      f["classical"] = nullptr;
      f["note"] = "both formulas need p odd";
    } else {
      const FormulaComparison fc = compare_formulas(c);
      f["classical"] = to_json(fc.classical);
      f["printed"] = to_json(fc.printed);
      f["printed_matches"] = fc.printed_matches;
      f["classical_matches"] = fc.classical_matches;
      f["printed_integral"] = fc.printed_integral;
    }
    out["formulas"] = f;
  }
  return out;
}

DeformationMap load_deformation(const std::string& path, const FqField& k, const Context& ctx) {
  const Json j = read_json_file(path);
  if (j.contains("along")) {
    std::vector<std::vector<FqElement>> v;
    for (const auto& row : j.at("along")) {
      if (!row.is_array()) invalid("'along' must be a matrix");
      v.emplace_back();
      for (const auto& x : row) v.back().push_back(fq_value(x, k, ctx.src));
    }
    return DeformationMap::along(v);
  }
  if (!j.contains("vars") || !j.contains("entries")) invalid("deformation needs 'vars' and 'entries' or 'along'");
  const auto vars = j.at("vars").get<std::vector<std::string>>();
  std::vector<std::vector<std::vector<FqElement>>> e;
  for (const auto& row : j.at("entries")) {
    e.emplace_back();
    for (const auto& cell : row) {
      if (!cell.is_array() || cell.size() != vars.size()) invalid("each entry lists one coefficient per variable");
      e.back().emplace_back();
      for (const auto& x : cell) e.back().back().push_back(fq_value(x, k, ctx.src));
    }
  }
  return DeformationMap(vars, e);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dieudonne modules, slopes and supersingular loci", "dieu"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  std::string output = "json";
  app.add_option("--field-table", cfg.field_table, "Conway table JSON (overrides DIEU_FIELD_TABLE)");
  app.add_option("--precision", cfg.default_precision, "default Witt precision")->check(CLI::Range(2, 1 << 16));
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--output", output, "json or table")->check(CLI::IsMember({"json", "table"}));

  std::map<CLI::App*, Handler> handlers;

  {
    auto* c = app.add_subcommand("slopes", "slope sequence of a polynomial or F-lattice");
    auto poly = std::make_shared<PolyFlags>();
    auto matrix = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("newton");
    auto lift = std::make_shared<bool>(false);
    poly->add(c);
    c->add_option("--matrix", *matrix, "F-lattice JSON")->check(CLI::ExistingFile);
    c->add_option("--method", *method, "newton or matrix (for --poly)")->check(CLI::IsMember({"newton", "matrix"}));
    c->add_flag("--lift-exact", *lift, "treat stored digits as exact and lift as needed");
    handlers[c] = [=](const Context& ctx) -> Json {
      SlopeOptions opt;
      opt.lift_exact = *lift;
      if (!matrix->empty()) {
        if (poly->given()) invalid("--matrix excludes --poly");
        return {{"slopes", to_json(slopes_by_matrix(FLattice(matrix_from_json(unwrap(read_json_file(*matrix), "module"), ctx.src)), opt))}};
      }
      const TwistedPoly P = poly->get(ctx);
      if (*method == "matrix") return {{"slopes", to_json(slopes_by_matrix(companion_lattice(P), opt))}};
      return {{"slopes", to_json(slopes_by_newton_polygon(P))}};
    };
  }
  {
    auto* c = app.add_subcommand("decompose", "slope decomposition of a twisted polynomial");
    auto poly = std::make_shared<PolyFlags>();
    auto peel = std::make_shared<bool>(false);
    auto max_degree = std::make_shared<int>(8);
    poly->add(c);
    c->add_flag("--peel", *peel, "also split off linear factors F - p^lambda");
    c->add_option("--max-degree", *max_degree, "largest residue field degree")->check(CLI::Range(1, 64));
    handlers[c] = [=](const Context& ctx) -> Json {
      const IsocrystalDecomposition d = decompose(poly->get(ctx), {*peel, *max_degree});
      Json summands = Json::array();
      for (size_t i = 0; i < d.summands.size(); ++i) {
        Json s = {{"lambda", to_json(d.summands[i].first)}, {"multiplicity", d.summands[i].second}};
        if (i < d.factors.size()) s["factor"] = to_json(d.factors[i]);
        summands.push_back(s);
      }
      Json out = {{"slopes", to_json(d.slopes())}, {"summands", summands}};
      if (*peel) {
        Json peeled = Json::array();
        for (const auto& f : d.peeled) peeled.push_back(factor_json(f));
        out["peeled"] = peeled;
        out["peel_stopped"] = d.peel_stopped ? Json(*d.peel_stopped) : Json(nullptr);
      }
      return out;
    };
  }
  auto module_command = [&](const char* name, const char* help, std::function<Json(const DieudonneModule&)> f) {
    auto* c = app.add_subcommand(name, help);
    auto path = std::make_shared<std::string>();
    c->add_option("--module", *path, "Dieudonne module JSON")->required()->check(CLI::ExistingFile);
    handlers[c] = [=](const Context& ctx) { return f(load_module(*path, ctx)); };
  };
  module_command("a-number", "a-number dim M/(F,V)M", [](const DieudonneModule& M) -> Json { return {{"a", a_number(M)}}; });
  module_command("dual", "dual Dieudonne module", [](const DieudonneModule& M) -> Json { return {{"module", to_json(dual(M).A())}}; });
  module_command("classify-rank2", "M1 or M2 for rank 2", [](const DieudonneModule& M) -> Json {
    return {{"class", to_string(classify_rank2(M))}};
  });
  {
    auto* c = app.add_subcommand("deform", "first-order deformation of a Norman presentation");
    auto base = std::make_shared<std::string>();
    auto ss = std::make_shared<int>(0);
    auto dpath = std::make_shared<std::string>();
    auto ring = std::make_shared<RingFlags>();
    auto* b = c->add_option("--base", *base, "Norman datum JSON {g, h, a}")->check(CLI::ExistingFile);
    c->add_option("--superspecial", *ss, "use the superspecial datum of dimension g")->excludes(b)->check(CLI::Range(1, 16));
    c->add_option("--d", *dpath, "deformation map JSON (default: universal)")->check(CLI::ExistingFile);
    ring->add(c);
    handlers[c] = [=](const Context& ctx) -> Json {
      std::optional<NormanDatum> datum;
      if (!base->empty()) {
        const Json j = read_json_file(*base);
        if (!j.contains("g") || !j.contains("h") || !j.contains("a")) invalid("Norman datum needs 'g', 'h' and 'a'");
        datum.emplace(j.at("g").get<int>(), j.at("h").get<int>(), matrix_from_json(j.at("a"), ctx.src));
      } else if (*ss > 0) {
        datum.emplace(NormanDatum::superspecial(ring->ring(ctx), *ss));
      } else {
        invalid("--base or --superspecial is required");
      }
      const FqField& k = datum->ring().field();
      const DeformationMap d = dpath->empty() ? DeformationMap::universal(k, datum->g(), datum->h())
                                              : load_deformation(*dpath, k, ctx);
      Json out = {{"presentation", to_json(deform(*datum, d))}};
      if (datum->is_superspecial_shape()) {
        const TangentAction t = tangent_frobenius(*datum, d);
        out["tangent"] = to_json(t);
        out["tangent_linear_rank"] = t.linear_rank();
      }
      return out;
    };
  }
  {
    auto* c = app.add_subcommand("classify-surface", "class of the surface attached to t in P^1");
    auto p = std::make_shared<int>(0);
    auto m = std::make_shared<int>(4);
    auto t = std::make_shared<std::string>();
    auto n = std::make_shared<int>(0);
    c->add_option("-p,--prime", *p, "prime")->required();
    c->add_option("-m,--degree", *m, "field of definition of t")->check(CLI::PositiveNumber);
    c->add_option("-t", *t, "(a:b), an affine t, inf or generic")->required();
    c->add_option("-n", *n, "precision for M_t");
    handlers[c] = [=](const Context& ctx) -> Json {
      const SurfaceParameter tp = parse_parameter(*t, *p, ctx.src.field(*p, *m));
      Json out = {{"p", *p}, {"t", parameter_json(tp)}, {"class", class_json(classify_parameter(*p, tp))}};
      if (!tp.is_generic()) {
        const LatticeChainModule L = build_Mt(*p, tp, std::max(2, ctx.precision(*n)));
        out["a_number"] = a_number(L.Mt);
      }
      return out;
    };
  }
  {
    auto* c = app.add_subcommand("mobius-check", "GL2(F_p^2) orbits on P^1(F_p^4)");
    auto p = std::make_shared<int>(0);
    c->add_option("-p,--prime", *p, "prime")->required();
    handlers[c] = [=](const Context&) -> Json {
      const MobiusReport r = mobius_orbit_check(*p);
      Json orbits = Json::array();
      for (const auto& o : r.orbits)
        orbits.push_back({{"size", o.size}, {"representative", o.representative.to_string()},
                          {"in_p1_fp2", o.in_p1_fp2}, {"in_fp4_minus_fp2", o.in_fp4_minus_fp2},
                          {"class_constant", o.class_constant}});
      return {{"p", r.p}, {"group_order", r.group_order}, {"points", r.points}, {"orbits", orbits},
              {"p1_fp2_single_orbit", r.p1_fp2_single_orbit},
              {"fp4_minus_fp2_single_orbit", r.fp4_minus_fp2_single_orbit}};
    };
  }
  {
    auto* c = app.add_subcommand("y-locus", "locus where the class group quotient is trivial");
    auto p = std::make_shared<int>(0);
    auto entries = std::make_shared<bool>(false);
    c->add_option("-p,--prime", *p, "prime")->required();
    c->add_flag("--entries", *entries, "list every point");
    handlers[c] = [=](const Context&) -> Json {
      const YLocusReport r = y_locus(*p);
      int in = 0;
      Json list = Json::array();
      for (const auto& e : r.entries) {
        in += e.in_locus ? 1 : 0;
        if (*entries)
          list.push_back({{"t", e.t.to_string()}, {"class", class_json(e.cls)}, {"quotient_size", e.quotient_size},
                          {"in_locus", e.in_locus}, {"predicted", e.predicted}});
      }
      Json out = {{"p", r.p}, {"description", r.description}, {"verified", r.verified},
                  {"points_checked", r.entries.size()}, {"points_in_locus", in}};
      if (*entries) out["entries"] = list;
      return out;
    };
  }
  {
    auto* c = app.add_subcommand("count-ss", "supersingular census over F_p^2");
    auto p = std::make_shared<int>(0);
    auto compare = std::make_shared<bool>(false);
    c->add_option("-p,--prime", *p, "prime")->required();
    c->add_flag("--compare-formulas", *compare, "evaluate the class number formulas");
    handlers[c] = [=](const Context&) { return census_json(*p, *compare); };
  }
  {
    auto* c = app.add_subcommand("invariant", "Hasse invariant of End(E_lambda)");
    auto lambda = std::make_shared<std::string>();
    c->add_option("lambda", *lambda, "slope s/r")->required();
    handlers[c] = [=](const Context&) -> Json {
      const Rational q = parse_rational(*lambda);
      return {{"lambda", to_json(q)}, {"invariant", to_json(end_algebra_invariant(q))}};
    };
  }
  {
    auto* c = app.add_subcommand("self-check", "Witt oracle and slope cross-check");
    auto trials = std::make_shared<int>(200);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto n = std::make_shared<int>(24);
    c->add_option("--trials", *trials, "random polynomials")->check(CLI::Range(1, 100000));
    c->add_option("--seed", *seed, "RNG seed");
    c->add_option("-n", *n, "precision of the random polynomials")->check(CLI::Range(2, 4096));
    handlers[c] = [=](const Context& ctx) { return self_check(ctx, *trials, *seed, *n); };
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  cfg.output = output == "table" ? OutputFormat::Table : OutputFormat::Json;

  try {
    Context ctx{cfg, cfg.field_table.empty() ? FieldSource::from_environment() : FieldSource::from_file(cfg.field_table)};
    CLI::App* sub = app.get_subcommands().front();
    const Json result = handlers.at(sub)(ctx);
    out << (cfg.output == OutputFormat::Json ? render_json(result) + "\n" : render_table(result));
    if (result.is_object() && result.contains("pass") && !result.at("pass").get<bool>()) return kCheckFailed;
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.code() == ErrorCode::InsufficientPrecision) {
      if (e.detail()) err << " (required precision: " << *e.detail() << ")";
      err << "\n";
      return kNeedPrecision;
    }
    if (e.code() == ErrorCode::ExtensionExhausted && e.detail()) err << " (would need degree " << *e.detail() << ")";
    err << "\n";
    return kInvalidInput;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace dieu::cli
