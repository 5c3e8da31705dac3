#include "doctest.h"

#include "dieu/witt.hpp"

#include <random>

using namespace dieu;

TEST_CASE("ring operations agree with Witt polynomials") {
  for (int p : {2, 3, 5, 7})
    for (int n = 1; n <= 4; ++n) {
      const auto rep = witt_oracle_check(p, n, 40, static_cast<std::uint64_t>(p * 10 + n));
      CHECK_MESSAGE(rep.pass, rep.counterexample);
      CHECK(rep.trials == 40);
    }
}

TEST_CASE("Teichmueller modulus reduces to the Conway polynomial") {
  for (auto [p, m, n] : {std::tuple{2, 3, 6}, {3, 4, 5}, {5, 2, 8}, {31, 8, 4}}) {
    const WittRing W = WittRing::make(make_field(p, m), n);
    const auto& g = W.modulus();
    for (int i = 0; i <= m; ++i) CHECK(mod_pn(g[static_cast<size_t>(i)], p) == W.field().modulus()[static_cast<size_t>(i)]);
    // The generator is its own Teichmueller representative.
    CHECK(W.gen().pow(mpz_class(std::to_string(W.field().size()))) == W.gen());
  }
}

TEST_CASE("Frobenius is a ring automorphism lifting x -> x^p") {
  std::mt19937_64 rng(5);
  for (auto [p, m, n] : {std::tuple{2, 4, 5}, {3, 3, 4}, {7, 2, 6}}) {
    const WittRing W = WittRing::make(make_field(p, m), n);
    for (int t = 0; t < 15; ++t) {
      const WittElement a = W.random(rng), b = W.random(rng);
      CHECK((a * b).sigma() == a.sigma() * b.sigma());
      CHECK((a + b).sigma() == a.sigma() + b.sigma());
      CHECK(a.sigma(m) == a);
      CHECK(a.sigma(-1).sigma() == a);
      CHECK(a.sigma().residue() == a.residue().frobenius());
      CHECK(W.teichmuller(a.residue()).sigma() == W.teichmuller(a.residue().frobenius()));
    }
  }
}

TEST_CASE("units, valuations and exact division") {
  std::mt19937_64 rng(9);
  const WittRing W = WittRing::make(make_field(3, 2), 6);
  for (int t = 0; t < 20; ++t) {
    WittElement a = W.random(rng);
    if (a.is_unit()) CHECK(a * a.inverse() == W.one());
    const WittElement b = a.scale(27);
    CHECK(b.valuation() == std::min(6, a.valuation() + 3));
    if (a.valuation() < 3) {
      const WittElement c = b.exact_div_p(3);
      CHECK(c.ring().n() == 3);
      CHECK(c == a.with_precision(3));
    }
  }
  CHECK(W.zero().valuation() == 6);
  CHECK_THROWS_AS(W.from_int(3).inverse(), Error);
  CHECK_THROWS_AS(W.from_int(3).exact_div_p(2), Error);
}

TEST_CASE("Teichmueller representatives are multiplicative") {
  std::mt19937_64 rng(13);
  const WittRing W = WittRing::make(make_field(5, 3), 5);
  const auto& F = W.field();
  std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
  for (int t = 0; t < 20; ++t) {
    const FqElement a = F.element(d(rng)), b = F.element(d(rng));
    CHECK(W.teichmuller(a * b) == W.teichmuller(a) * W.teichmuller(b));
    CHECK(W.teichmuller(a).residue() == a);
  }
}

TEST_CASE("embedding along the tower commutes with ring ops and Frobenius") {
  std::mt19937_64 rng(17);
  for (int p : {2, 3}) {
    const WittRing W2 = WittRing::make(make_field(p, 2), 4);
    const WittRing W4 = WittRing::make(make_field(p, 4), 4);
    const WittRing W8 = WittRing::make(make_field(p, 8), 4);
    for (int t = 0; t < 10; ++t) {
      const WittElement a = W2.random(rng), b = W2.random(rng);
      CHECK((a * b).embed(W4) == a.embed(W4) * b.embed(W4));
      CHECK((a + b).embed(W8) == a.embed(W8) + b.embed(W8));
      CHECK(a.sigma().embed(W8) == a.embed(W8).sigma());
      CHECK(a.embed(W4).embed(W8) == a.embed(W8));
      CHECK(a.embed(W8).residue() == embed(a.residue(), W8.field()));
    }
  }
}

TEST_CASE("precision change keeps the canonical digits") {
  std::mt19937_64 rng(19);
  const WittRing W = WittRing::make(make_field(2, 3), 4);
  const WittRing W8 = W.with_precision(8);
  for (int t = 0; t < 10; ++t) {
    const WittElement a = W.random(rng), b = W.random(rng);
    CHECK((a.with_precision(8) * b.with_precision(8)).with_precision(4) == a * b);
    CHECK(a.with_precision(8).with_precision(4) == a);
  }
  CHECK((W8.gen().with_precision(4)) == W.gen());
}

TEST_CASE("ramified extension") {
  std::mt19937_64 rng(23);
  const WittRing W = WittRing::make(make_field(3, 2), 4);
  const RamifiedRing R(W, 3);
  const auto pi = RamifiedElement::pi_pow(R, 1);
  CHECK((pi * pi * pi).equals(RamifiedElement::from_witt(R, W.from_int(3))));
  CHECK(pi.valuation() == 1);
  CHECK(RamifiedElement::pi_pow(R, 7).valuation() == 7);

  for (int t = 0; t < 10; ++t) {
    std::vector<WittElement> d;
    for (int i = 0; i < 3; ++i) d.push_back(W.random(rng));
    d[0] = d[0] + W.teichmuller(make_field(3, 2).gen());
    const RamifiedElement u(R, d);
    if (!u.is_unit()) continue;
    CHECK((u * u.inverse()).equals(RamifiedElement::one(R)));
    const RamifiedElement s = u.mul_pi_pow(5);
    CHECK(s.valuation() == 5);
    CHECK(s.div_pi_pow(5).equals(u));
    CHECK(s.div_pi_pow(5).prec() == R.cap() - 5);
    CHECK((u.sigma() * s.sigma()).equals((u * s).sigma()));
    const RamifiedElement e = u.extend_ramification(6);
    CHECK(e.prec() == 2 * R.cap());
    CHECK((e * e).equals((u * u).extend_ramification(6)));
  }
  CHECK_THROWS_AS(pi.inverse(), Error);
}
