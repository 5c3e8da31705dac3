#include "doctest.h"

#include "dieu/isocrystal.hpp"

#include <optional>
#include <random>

using namespace dieu;

namespace {

WittRing ring(int p, int m, int n) { return WittRing::make(make_field(p, m), n); }

SlopeSequence slopes(std::initializer_list<Rational> q) { return SlopeSequence(std::vector<Rational>(q)); }

SlopeSequence exact_slopes(const FLattice& M) {
  SlopeOptions o;
  o.lift_exact = true;
  return slopes_by_matrix(M, o);
}

// Additive trace sum_{i<M} sigma^i(b) over W(F_{p^M}).
WittElement trace(const WittElement& b, int M) {
  WittElement t = b.ring().zero();
  for (int i = 0; i < M; ++i) t += b.sigma(i);
  return t;
}

TwistedPoly product(const std::vector<TwistedPoly>& fs) {
  TwistedPoly acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = acc * fs[i];
  return acc;
}

}  // namespace

TEST_CASE("Newton polygon agrees with the matrix method on companions") {
  const WittRing W = ring(3, 1, 8);
  CHECK(slopes_by_newton_polygon(TwistedPoly::from_ints(W, {1, -4, 3})) == slopes({0, 1}));
  CHECK(slopes_by_newton_polygon(TwistedPoly::from_ints(W, {1, 0, -3})) == slopes({Rational(1, 2), Rational(1, 2)}));
  CHECK(slopes_by_newton_polygon(TwistedPoly::from_ints(W, {1, -6, 9})) == slopes({1, 1}));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> exp(0, 3), unit(1, 2), sign(0, 1);
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + t % 3;
    std::vector<long> c{1};
    for (int i = 1; i <= n; ++i) {
      long v = unit(rng);
      for (int k = exp(rng); k > 0; --k) v *= 3;
      if (i < n && exp(rng) == 0) v = 0;
      c.push_back(sign(rng) ? v : -v);
    }
    const TwistedPoly P = TwistedPoly::from_ints(W, c);
    const auto np = slopes_by_newton_polygon(P);
    CHECK(np.total() == n);
    CHECK(exact_slopes(companion_lattice(P)) == np);
    CHECK(decompose(P).slopes() == np);
  }
}

TEST_CASE("Newton polygon with partly unknown coefficients") {
  const WittRing W = ring(3, 1, 2);
  CHECK(slopes_by_newton_polygon(TwistedPoly::from_ints(W, {1, 9, 3})) == slopes({Rational(1, 2), Rational(1, 2)}));
  try {
    slopes_by_newton_polygon(TwistedPoly::from_ints(W, {1, 1, 27}));
    FAIL("expected InsufficientPrecision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPrecision);
  }
  const RamifiedRing R(W, 2);
  const TwistedPoly P(R, {RamifiedElement::one(R), -RamifiedElement::pi_pow(R, 1)});
  CHECK(slopes_by_newton_polygon(P) == slopes({Rational(1, 2)}));
}

TEST_CASE("slopes_by_matrix reports the precision it needs") {
  const auto M = std_module(StdKind::M2, ring(3, 1, 4));
  try {
    slopes_by_matrix(M);
    FAIL("expected InsufficientPrecision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPrecision);
    CHECK(e.detail() == 7);
  }
  CHECK(slopes_by_matrix(M.with_precision(7)) == slopes({Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("segment factorisation re-expands") {
  const WittRing W = ring(2, 1, 6);
  for (const auto& c : std::vector<std::vector<long>>{{1, -3, 2}, {1, 1, 2, 4}, {1, 2, 1, 8, 16}, {1, 0, 0, 2}}) {
    const TwistedPoly P = TwistedPoly::from_ints(W, c);
    const auto D = decompose(P);
    CHECK(product(D.factors).equals(P));
    for (size_t i = 0; i < D.factors.size(); ++i) {
      CHECK(D.factors[i].is_monic());
      const auto s = slopes_by_newton_polygon(D.factors[i]);
      REQUIRE(s.entries().size() == 1);
      CHECK(s.entries()[0].first == D.summands[i].first);
    }
    CHECK(D.slopes() == slopes_by_newton_polygon(P));
  }
  const auto f = slope_factor(TwistedPoly::from_ints(W, {1, 0, 0, 2}));
  CHECK(f.lambda == Rational(1, 3));
  CHECK(f.Q.degree() == 0);
}

TEST_CASE("linear factors") {
  SUBCASE("F^2 - p splits over the ramified ring") {
    const WittRing W = ring(3, 1, 4);
    const TwistedPoly P = TwistedPoly::from_ints(W, {1, 0, -3});
    const auto f = first_slope_factor(P);
    CHECK(f.s == 1);
    CHECK(f.r == 2);
    const RamifiedRing& R = f.Q.ring();
    CHECK(R.r() == 2);
    const TwistedPoly lin(R, {RamifiedElement::one(R), -RamifiedElement::pi_pow(R, 1)});
    CHECK((f.Q * lin * TwistedPoly(R, {f.u})).equals(P.extend_ramification(2).embed(R.base())));
  }
  SUBCASE("F^2 + F + 1 over Z_2 needs F_8") {
    const WittRing W = ring(2, 1, 4);
    const TwistedPoly P = TwistedPoly::from_ints(W, {1, 1, 1});
    const auto f = first_slope_factor(P);
    CHECK(f.field.m() % 3 == 0);
    const RamifiedRing& R = f.Q.ring();
    const TwistedPoly lin(R, {RamifiedElement::one(R), -RamifiedElement::one(R)});
    CHECK((f.Q * lin * TwistedPoly(R, {f.u})).equals(P.embed(R.base())));
    const auto D = decompose(P, {true, 8});
    CHECK(D.peeled.size() + (D.peel_stopped ? 1 : 0) >= 1);
  }
}

TEST_CASE("sigma-linear equations") {
  std::mt19937_64 rng(7);
  const WittRing W = ring(3, 2, 5);
  for (int t = 0; t < 10; ++t) {
    const WittElement b = W.random(rng);
    for (int alpha : {-2, -1, 1, 3}) {
      const auto s1 = sigma_linear_solve(2, alpha, b);
      CHECK(s1.precision == 5);
      CHECK(s1.x.scale(9).sigma(alpha) - s1.x == b);
      const auto s2 = sigma_linear_solve(-1, alpha, b);
      CHECK(s2.precision == 4);
      // p^-1 sigma^alpha(x) - x = b  <=>  sigma^alpha(x) - p x = p b
      CHECK((s2.x.sigma(alpha) - s2.x.scale(3)).with_precision(4) == b.scale(3).with_precision(4));
    }
  }
  // sigma(x) - x = 1 over W_3: the trace of 1 from F_{2^M} is M, zero mod 8 first at M = 8.
  const auto s = sigma_linear_solve(0, 1, ring(2, 1, 3).one());
  CHECK(s.field.m() == 8);
  CHECK(sigma_linear_solve(0, 1, ring(2, 1, 1).one()).field.m() == 2);
  CHECK_THROWS_AS(sigma_linear_solve(0, 0, W.one()), Error);
}

TEST_CASE("sigma(x) - x = b over F_16 matches the trace criterion") {
  const WittRing W = ring(2, 4, 3);
  const WittRing W8 = ring(2, 8, 3);
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const WittElement b = W.teichmuller(W.field().element(idx));
    const bool in16 = trace(b, 4).is_zero();
    const bool in256 = trace(b.embed(W8), 8).is_zero();
    try {
      const auto s = sigma_linear_solve(0, 1, b, 8);
      CHECK(s.field.m() == (in16 ? 4 : 8));
      CHECK(in256);
      const WittElement bb = b.embed(WittRing::make(s.field, 3));
      CHECK(s.x.sigma(1) - s.x == bb);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ExtensionExhausted);
      CHECK_FALSE(in256);
      CHECK(e.detail() == 12);
    }
  }
}

TEST_CASE("endomorphism algebra invariant") {
  CHECK(end_algebra_invariant(Rational(2, 5)) == Rational(3, 5));
  CHECK(end_algebra_invariant(Rational(1, 2)) == Rational(1, 2));
  CHECK(end_algebra_invariant(Rational(0)) == Rational(0));
  CHECK(end_algebra_invariant(Rational(4, 3)) == Rational(2, 3));
}

TEST_CASE("no intertwiners between distinct slopes") {
  std::optional<int> defect;
  for (int n : {3, 6, 9}) {
    const WittRing W = ring(3, 1, n);
    const auto A0 = std_lattice(Rational(0), W).A();
    const auto Ahalf = std_module(StdKind::M2, W).A();
    const auto Athird = std_module(StdKind::Mab, W, 2, 1).A();
    CHECK(intertwiner_min_valuation(A0, Ahalf) == n);
    const int v = intertwiner_min_valuation(Ahalf, Athird);
    if (defect) CHECK(n - v == *defect);
    defect = n - v;
    CHECK(intertwiner_min_valuation(Ahalf, Ahalf) == 0);
  }
  const WittRing W = ring(2, 2, 4);
  CHECK(intertwiner_min_valuation(std_module(StdKind::M2, W).A(), std_module(StdKind::M2, W).A()) == 0);
}

TEST_CASE("superspecial modules") {
  std::mt19937_64 rng(2);
  const WittRing W = ring(2, 1, 4);
  const auto M2 = std_module(StdKind::M2, W), M1 = std_module(StdKind::M1, W);
  CHECK(is_superspecial(M2));
  CHECK(is_superspecial(direct_sum(M2, M2)));
  CHECK(is_superspecial(change_basis(direct_sum(M2, M2), random_invertible(W, 4, rng))));
  CHECK_FALSE(is_superspecial(direct_sum(M2, M1)));
  CHECK_FALSE(is_superspecial(std_module(StdKind::Mab, W, 2, 2 + 1)));
}
