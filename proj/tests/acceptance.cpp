// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 iff the failing criteria are exactly those named with
// --expect-fail (none by default), so a recorded, understood failure does not
// mask a regression elsewhere and a fix is noticed too.

#include "dieu/counting.hpp"
#include "dieu/deformation.hpp"
#include "dieu/harness.hpp"
#include "dieu/supersingular.hpp"

#include <array>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace dieu;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      note << " [" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ------------------------------------------------------------------ 1
void witt_oracle(Outcome& o) {
  const auto t0 = Clock::now();
  for (auto [p, n] : {std::pair{2, 3}, {3, 2}, {5, 2}}) {
    const WittOracleReport r = witt_oracle_check(p, n, 100, 2024);
    o.require(r.pass && r.trials == 100, "W_" + std::to_string(n) + "(F_" + std::to_string(p) + "): " + r.counterexample);
  }
  const double s = seconds_since(t0);
  o.require(s < 10, "runtime");
  o.note << " 300 trials in " << s << "s";
}

// ------------------------------------------------------------------ 2, 3
std::vector<TwistedPoly> g_polys;

void slope_crosscheck_200(Outcome& o) {
  const auto t0 = Clock::now();
  const CrossCheckReport r = slope_crosscheck(200, 7, 24, {2, 3, 5});
  g_polys = r.polys;
  const double s = seconds_since(t0);
  o.require(r.passed == r.trials && r.trials == 200, "mismatches: " + std::to_string(r.trials - r.passed));
  for (size_t i = 0; i < r.failures.size() && i < 3; ++i) o.note << " {" << r.failures[i] << "}";
  o.require(s < 120, "runtime");
  o.note << " " << r.passed << "/" << r.trials << " agree at n = 24 in " << s << "s";
}

void factor_certificates_200(Outcome& o) {
  // At n = 24 most linear factors need residue fields far beyond degree 8, so
  // each polynomial is retried at smaller working precision; the first factor
  // found is certified by re-expansion.
  const int precs[] = {24, 6, 4, 3, 2, 1};
  int certified = 0, exhausted_all = 0, failed = 0, maxdeg = 1;
  std::map<int, int> at_prec;
  for (const auto& P : g_polys) {
    bool done = false;
    for (int k : precs) {
      const FactorCertReport r = factor_certificates({P.with_prec(k)}, 8);
      if (r.failed) {
        ++failed;
        for (const auto& f : r.failures) o.note << " {" << f << "}";
        done = true;
        break;
      }
      if (r.certified) {
        ++certified;
        ++at_prec[k];
        maxdeg = std::max(maxdeg, r.max_field_degree);
        done = true;
        break;
      }
      if (r.insufficient) break;  // truncated past the constant term; lower precision is no better
    }
    if (!done) ++exhausted_all;
  }
  o.require(failed == 0, "re-expansion failures");
  o.require(certified > 0, "nothing certified");
  o.note << " certified " << certified << " (by precision:";
  for (auto it = at_prec.rbegin(); it != at_prec.rend(); ++it) o.note << " " << it->first << "->" << it->second;
  o.note << "), " << exhausted_all << " need degree > 8 at every precision keeping the constant term"
         << ", max field degree " << maxdeg;
}

// ------------------------------------------------------------------ 4
SlopeSequence module_slopes(const FLattice& M) { return slopes_by_matrix(M); }

void standard_modules(Outcome& o) {
  const WittRing W = WittRing::make(make_field(3, 1), 8);
  SlopeOptions exact;
  exact.lift_exact = true;
  o.require(a_number(std_module(StdKind::M1, W)) == 0, "a(M1)");
  o.require(a_number(std_module(StdKind::M2, W)) == 1, "a(M2)");
  o.require(slopes_by_matrix(std_module(StdKind::M1, W), exact) == SlopeSequence({Rational(0), Rational(1)}), "slopes(M1)");
  o.require(slopes_by_matrix(std_module(StdKind::M2, W), exact) == SlopeSequence({Rational(1, 2), Rational(1, 2)}), "slopes(M2)");
  int mab = 0;
  for (int p : {2, 3, 5})
    for (int a = 1; a <= 4; ++a)
      for (int b = 1; a + b <= 5; ++b) {
        if (std::gcd(a, b) != 1) continue;
        const WittRing Wp = WittRing::make(make_field(p, 1), 6);
        const auto M = std_module(StdKind::Mab, Wp, a, b);
        const SlopeSequence want(std::vector<Rational>(static_cast<size_t>(a + b), Rational(b, a + b)));
        o.require(slopes_by_matrix(M, exact) == want, "slopes(M_" + std::to_string(a) + "," + std::to_string(b) + ")");
        ++mab;
      }

  // Random modules: sums of standard pieces of total rank <= 4 in a random
  // basis, at a precision that covers the slope computation.
  std::mt19937_64 rng(44);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    const int p = std::array{2, 3, 5}[t % 3];
    const WittRing Wn = WittRing::make(make_field(p, 1), 300);
    std::vector<DieudonneModule> pieces;
    int rank = 0;
    const int target = 1 + static_cast<int>(rng() % 4);
    while (rank < target) {
      const int room = target - rank;
      std::vector<std::function<DieudonneModule()>> options = {
          [&] { return std_module_lambda(Rational(0), Wn); }, [&] { return std_module_lambda(Rational(1), Wn); }};
      if (room >= 2) options.push_back([&] { return std_module(StdKind::M2, Wn); });
      if (room >= 3) {
        options.push_back([&] { return std_module(StdKind::Mab, Wn, 1, 2); });
        options.push_back([&] { return std_module(StdKind::Mab, Wn, 2, 1); });
      }
      if (room >= 4) {
        options.push_back([&] { return std_module(StdKind::Mab, Wn, 1, 3); });
        options.push_back([&] { return std_module(StdKind::Mab, Wn, 3, 1); });
      }
      pieces.push_back(options[rng() % options.size()]());
      rank += pieces.back().rank();
    }
    DieudonneModule S = pieces[0];
    for (size_t i = 1; i < pieces.size(); ++i) S = direct_sum(S, pieces[i]);
    const DieudonneModule M = change_basis(S, random_invertible(Wn, S.rank(), rng));
    try {
      const int a = a_number(M);
      const SlopeSequence sl = module_slopes(M);
      o.require(sl == slopes_by_matrix(S, exact), "random basis changed slopes");
      const DieudonneModule D = dual(M);
      o.require(a_number(D) == a, "a(dual)");
      o.require(module_slopes(D) == sl.dual(), "slopes(dual)");
      const DieudonneModule E = base_change(M, make_field(p, 2));
      o.require(a_number(E) == a, "a(base change)");
      o.require(module_slopes(E) == sl, "slopes(base change)");
      ++checked;
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  o.note << " M1, M2, " << mab << " M_ab over p = 2, 3, 5; " << checked << "/50 random modules invariant";
}

// ------------------------------------------------------------------ 5
void deformation(Outcome& o) {
  const auto t0 = Clock::now();
  for (int g = 1; g <= 3; ++g) {
    const WittRing W = WittRing::make(make_field(3, 1), 4);
    const NormanDatum base = NormanDatum::superspecial(W, g);
    const DeformationMap d = DeformationMap::universal(W.field(), g, g);
    const TangentAction T = tangent_frobenius(base, d);
    o.require(T.constant_is_zero(), "constant part, g = " + std::to_string(g));
    bool indeterminate = true;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const std::string name = "t" + std::to_string(i + 1) + std::to_string(j + 1);
        const auto& lin = T.linear[static_cast<size_t>(i)][static_cast<size_t>(j)];
        for (size_t v = 0; v < lin.size(); ++v)
          indeterminate = indeterminate && (T.vars[v] == name ? lin[v].is_one() : lin[v].is_zero());
      }
    o.require(indeterminate, "T != (t_ij), g = " + std::to_string(g));
    // The g^2 entries are independent linear forms in g^2 variables, so they
    // generate the whole maximal ideal (t_ij).
    o.require(T.linear_rank() == g * g && static_cast<int>(T.vars.size()) == g * g, "ideal, g = " + std::to_string(g));
  }
  const double s = seconds_since(t0);
  o.require(s < 1, "runtime");
  o.note << " g = 1, 2, 3 in " << s << "s";
}

// ------------------------------------------------------------------ 6
void surfaces(Outcome& o) {
  const auto t0 = Clock::now();
  for (int p : {2, 3}) {
    const FqField k4 = make_field(p, 4), k2 = make_field(p, 2);
    std::vector<SurfaceParameter> pts = {SurfaceParameter::infinity(k4)};
    for (const auto& x : k4.elements()) pts.push_back(SurfaceParameter::affine(x));
    int bad = 0;
    for (const auto& t : pts) {
      const bool rational = t.is_generic() ? false : (t.degree() <= 2);
      const LatticeChainModule L = build_Mt(p, t, 3);
      if ((a_number(L.Mt) == 2) != rational) ++bad;
    }
    o.require(bad == 0, "a(M_t) = 2 <=> t in P1(F_p^2) fails at " + std::to_string(bad) + " points, p = " + std::to_string(p));

    const MobiusReport m = mobius_orbit_check(p);
    bool constant = true;
    for (const auto& orb : m.orbits) constant = constant && orb.class_constant;
    o.require(m.orbits.size() == 2 && m.p1_fp2_single_orbit && m.fp4_minus_fp2_single_orbit && constant,
              "orbits, p = " + std::to_string(p));
    // The rest: points of P^1 outside P^1(F_p^4) are Case I.
    const FqField k8 = make_field(p, 8);
    int rest = 0;
    for (std::uint64_t i = 0; i < k8.size() && rest < 20; ++i) {
      const FqElement x = k8.element(i);
      if (x.degree() != 8) continue;
      ++rest;
      o.require(classify_parameter(p, SurfaceParameter::affine(x)).kind == SurfaceKind::CaseI, "rest not Case I");
    }
    o.require(classify_parameter(p, SurfaceParameter::generic(p)).kind == SurfaceKind::CaseI, "generic point");
    o.require(classify_parameter(p, SurfaceParameter::affine(k2.gen())).kind == SurfaceKind::Superspecial, "F_p^2 point");

    const int want_I = p == 2 ? 1 : 2;
    o.require(norm_quotient(p, SurfaceKind::CaseI).quotient_size == want_I, "|Lambda| Case I, p = " + std::to_string(p));
    o.require(norm_quotient(p, SurfaceKind::CaseII).quotient_size == 1, "|Lambda| Case II, p = " + std::to_string(p));
    o.require(classify_parameter(p, SurfaceParameter::generic(p)).lambda_size == want_I, "class lambda_size");

    const YLocusReport y = y_locus(p);
    o.require(y.verified, "Y locus not verified, p = " + std::to_string(p));
    o.require(y.description == (p == 2 ? "P1" : "P1(F_" + std::to_string(p) + "^4)"), "Y description " + y.description);
  }
  const double s = seconds_since(t0);
  o.require(s < 60, "runtime");
  o.note << " p = 2, 3 exhaustive over P1(F_p^4) in " << s << "s";
}

// ------------------------------------------------------------------ 7
void counting(Outcome& o) {
  const auto t0 = Clock::now();
  const std::map<int, int> table = {{2, 1},  {3, 1},  {5, 1},  {7, 1},  {11, 2}, {13, 1},
                                    {17, 2}, {19, 2}, {23, 3}, {29, 3}, {31, 2}};
  for (const auto& [p, want] : table) {
    const SupersingularCensus c = enumerate_supersingular(p);
    o.require(c.criteria_agree, "criteria disagree at p = " + std::to_string(p));
    o.require(mass_check(c).ok && c.mass == Rational(p - 1, 24), "mass at p = " + std::to_string(p));
    if (c.count != want) {
      o.require(false, "p = " + std::to_string(p) + ": census " + std::to_string(c.count) + ", table " +
                           std::to_string(want) + ", mass " + to_string(c.mass) + ", classical " +
                           (p == 2 ? std::string("-") : to_string(eichler_formula_classical(p))));
    }
    if (p == 5) {
      const FormulaComparison f = compare_formulas(c);
      o.require(!f.printed_integral && !f.printed_matches, "printed formula discrepancy not flagged at p = 5");
      o.note << " printed(5) = " << to_string(f.printed) << " vs " << f.count << ";";
    }
  }
  const double s = seconds_since(t0);
  o.require(s < 30, "runtime");
  o.note << " " << s << "s";
}

// ------------------------------------------------------------------ 8
// Independent solvability test for sigma^a(x) - x = b over W_n(F_{p^M}):
// the sum of b over the group generated by sigma^a must vanish.
bool trace_solvable(int alpha, const WittElement& b, int M) {
  const WittRing WM = b.ring().with_field(b.ring().field().with_degree(M));
  const WittElement bm = b.embed(WM);
  const int a = std::abs(alpha);
  const int order = M / std::gcd(a, M);
  WittElement sum = WM.zero(), term = bm;
  for (int i = 0; i < order; ++i) {
    sum += term;
    term = term.sigma(a);
  }
  return sum.is_zero();
}

void sigma_solver(Outcome& o) {
  const WittRing W = WittRing::make(make_field(2, 2), 4);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(-2, 2);
  int solved = 0, impossible = 0, maxdeg = 2;
  std::map<int, int> degrees;
  for (int t = 0; t < 100; ++t) {
    const int beta = d(rng), alpha = d(rng);
    const WittElement b = W.random(rng);
    try {
      const SigmaSolution s = sigma_linear_solve(beta, alpha, b, 8);
      const int n = s.precision;
      const WittRing Wx = s.x.ring();
      const WittElement bx = b.embed(Wx);
      bool ok;
      if (beta >= 0) {
        mpz_class pb = 1;
        for (int i = 0; i < beta; ++i) pb *= W.p();
        ok = (s.x.sigma(alpha).scale(pb) - s.x).with_precision(n) == bx.with_precision(n);
      } else {
        // p^beta sigma^alpha(x) needs x divisible by p^-beta.
        const WittElement lhs = s.x.sigma(alpha).exact_div_p(-beta) - s.x.with_precision(Wx.n() + beta);
        ok = lhs.with_precision(n) == bx.with_precision(n);
      }
      o.require(ok, "substitution failed: beta " + std::to_string(beta) + ", alpha " + std::to_string(alpha));
      o.require(s.field.m() <= 8, "field degree > 8");
      maxdeg = std::max(maxdeg, s.field.m());
      ++degrees[s.field.m()];
      ++solved;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ExtensionExhausted && beta == 0) {
        bool none = true;
        for (int M = 2; M <= 8; M += 2) none = none && !trace_solvable(alpha, b, M);
        o.require(none, "exhausted but trace test finds a field");
        ++impossible;
      } else if (e.code() == ErrorCode::OutOfRange && beta == 0 && alpha == 0 && !b.is_zero()) {
        ++impossible;  // 0 = b
      } else {
        o.require(false, e.what());
      }
    }
  }
  o.note << " solved " << solved << " (field degrees:";
  for (const auto& [m, c] : degrees) o.note << " " << m << "x" << c;
  o.note << "), " << impossible << " certified unsolvable within degree 8, max degree " << maxdeg;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expect_fail.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N]...\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Witt oracle", witt_oracle},
      {"slope cross-check", slope_crosscheck_200},
      {"factorization certificates", factor_certificates_200},
      {"standard modules", standard_modules},
      {"deformation", deformation},
      {"surface classification", surfaces},
      {"counting", counting},
      {"sigma-linear solver", sigma_solver},
  };
  std::set<int> failed;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const int id = static_cast<int>(i) + 1;
    if (!o.pass) failed.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ":" << o.note.str() << std::endl;
  }
  std::cout << "summary: " << criteria.size() - failed.size() << "/" << criteria.size() << " pass";
  if (!expect_fail.empty()) {
    std::cout << "; expected failures:";
    for (int k : expect_fail) std::cout << " " << k;
  }
  std::cout << std::endl;
  return failed == expect_fail ? 0 : 1;
}
