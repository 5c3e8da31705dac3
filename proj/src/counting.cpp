#include "dieu/counting.hpp"

#include "dieu/error.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace dieu {

namespace {

// F_{p^2} on plain integers: index c0 + c1 p, generator g with g^2 = -(m1 g + m0).
struct Fp2 {
  int p, m0, m1, q;
  explicit Fp2(const FqField& k) : p(k.p()), m0(k.modulus()[0]), m1(k.modulus()[1]), q(p * p) {}
  int add(int a, int b) const { return (a % p + b % p) % p + ((a / p + b / p) % p) * p; }
  int neg(int a) const { return (p - a % p) % p + ((p - a / p) % p) * p; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int mul(int a, int b) const {
    const long a0 = a % p, a1 = a / p, b0 = b % p, b1 = b / p;
    long c0 = a0 * b0, c1 = a0 * b1 + a1 * b0;
    const long c2 = a1 * b1;
    c0 -= c2 * m0;
    c1 -= c2 * m1;
    c0 = ((c0 % p) + p) % p;
    c1 = ((c1 % p) + p) % p;
    return static_cast<int>(c0 + c1 * p);
  }
  int from_int(long v) const { return static_cast<int>(((v % p) + p) % p); }
  int pow(int a, long e) const {
    int r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  int inv(int a) const { return pow(a, q - 2); }
};

struct Curve {
  int a1, a2, a3, a4, a6;
};

struct CurveData {
  bool smooth;
  int j;
};

CurveData invariants(const Fp2& F, const Curve& E) {
  auto m = [&](int a, int b) { return F.mul(a, b); };
  auto c = [&](long v) { return F.from_int(v); };
  const int b2 = F.add(m(E.a1, E.a1), m(c(4), E.a2));
  const int b4 = F.add(m(c(2), E.a4), m(E.a1, E.a3));
  const int b6 = F.add(m(E.a3, E.a3), m(c(4), E.a6));
  const int b8 = F.sub(F.add(F.sub(F.add(m(m(E.a1, E.a1), E.a6), m(c(4), m(E.a2, E.a6))), m(E.a1, m(E.a3, E.a4))),
                             m(E.a2, m(E.a3, E.a3))),
                       m(E.a4, E.a4));
  const int c4 = F.sub(m(b2, b2), m(c(24), b4));
  int disc = F.neg(m(m(b2, b2), b8));
  disc = F.sub(disc, m(c(8), m(b4, m(b4, b4))));
  disc = F.sub(disc, m(c(27), m(b6, b6)));
  disc = F.add(disc, m(c(9), m(b2, m(b4, b6))));
  if (disc == 0) return {false, 0};
  return {true, m(m(c4, m(c4, c4)), F.inv(disc))};
}

// #E(F_q) - 1 by brute force over affine points.
long affine_points(const Fp2& F, const Curve& E, const std::vector<int>& sq_count) {
  long n = 0;
  for (int x = 0; x < F.q; ++x) {
    const int x2 = F.mul(x, x);
    const int rhs = F.add(F.add(F.add(F.mul(x2, x), F.mul(E.a2, x2)), F.mul(E.a4, x)), E.a6);
    const int lin = F.add(F.mul(E.a1, x), E.a3);
    if (F.p == 2) {
      for (int y = 0; y < F.q; ++y)
        if (F.add(F.mul(y, y), F.mul(lin, y)) == rhs) ++n;
    } else {
      // (2y + lin)^2 = 4 rhs + lin^2
      const int d = F.add(F.mul(F.from_int(4), rhs), F.mul(lin, lin));
      n += sq_count[static_cast<size_t>(d)];
    }
  }
  return n;
}

// Hasse invariant: a1 in characteristic 2; otherwise the coefficient of
// x^(p-1) in f^((p-1)/2) for y^2 = f(x) after completing the square.
int hasse_invariant(const Fp2& F, const Curve& E) {
  if (F.p == 2) return E.a1;
  const int i4 = F.inv(F.from_int(4));
  const int b2 = F.add(F.mul(E.a1, E.a1), F.mul(F.from_int(4), E.a2));
  const int b4 = F.add(F.mul(F.from_int(2), E.a4), F.mul(E.a1, E.a3));
  const int b6 = F.add(F.mul(E.a3, E.a3), F.mul(F.from_int(4), E.a6));
  const std::vector<int> f{F.mul(b6, i4), F.mul(b4, F.inv(F.from_int(2))), F.mul(b2, i4), 1};
  std::vector<int> acc{1};
  for (int e = 0; e < (F.p - 1) / 2; ++e) {
    std::vector<int> nxt(acc.size() + 3, 0);
    for (size_t i = 0; i < acc.size(); ++i)
      for (size_t k = 0; k < 4; ++k) nxt[i + k] = F.add(nxt[i + k], F.mul(acc[i], f[k]));
    acc = std::move(nxt);
  }
  return acc[static_cast<size_t>(F.p - 1)];
}

// F_{p^2} beyond the shipped table (31 < p <= 101) comes from a computed
// table covering degrees 1 and 2, built once.
FqField quadratic_field(int p) {
  if (FieldTable::builtin().contains(p, 2)) return make_field(p, 2);
  static const auto extended = std::make_shared<const FieldTable>(FieldTable::compute(101, 2));
  return make_field(p, 2, extended);
}

int aut_order(int p, int j) {
  if (j == 0 && p == 2) return 24;
  if (j == 0 && p == 3) return 12;
  if (j == 0) return 6;
  if (j == 1728 % p) return 4;
  return 2;
}

}  // namespace

SupersingularCensus enumerate_supersingular(int p) {
  if (p < 2 || p > 101 || !detail::is_prime(p))
    throw Error(ErrorCode::OutOfRange, "census needs a prime 2 <= p <= 101");
  const FqField k = quadratic_field(p);
  const Fp2 F(k);
  std::vector<int> sq_count(static_cast<size_t>(F.q), 0);
  for (int y = 0; y < F.q; ++y) ++sq_count[static_cast<size_t>(F.mul(y, y))];

  SupersingularCensus out;
  out.p = p;
  std::map<int, bool> found;
  auto test = [&](const Curve& E) {
    const CurveData d = invariants(F, E);
    if (!d.smooth) return;
    ++out.curves_checked;
    const bool by_hasse = hasse_invariant(F, E) == 0;
    // #E(F_q) = q + 1 - t, and supersingular iff p | t.
    const long t = static_cast<long>(F.q) + 1 - (affine_points(F, E, sq_count) + 1);
    const bool by_trace = t % p == 0;
    if (by_hasse != by_trace) out.criteria_agree = false;
    if (by_hasse && by_trace) found[d.j] = true;
    else found.try_emplace(d.j, false);
  };
  if (p <= 3) {
    for (int a1 = 0; a1 < F.q; ++a1)
      for (int a2 = 0; a2 < F.q; ++a2)
        for (int a3 = 0; a3 < F.q; ++a3)
          for (int a4 = 0; a4 < F.q; ++a4)
            for (int a6 = 0; a6 < F.q; ++a6) test({a1, a2, a3, a4, a6});
  } else {
    for (int j = 0; j < F.q; ++j) {
      if (j == 0) {
        test({0, 0, 0, 0, 1});
      } else if (j == 1728 % p) {
        test({0, 0, 0, 1, 0});
      } else {
        // y^2 = x^3 + 3c x + 2c with c = j / (1728 - j).
        const int c = F.mul(j, F.inv(F.sub(F.from_int(1728), j)));
        test({0, 0, 0, F.mul(F.from_int(3), c), F.mul(F.from_int(2), c)});
      }
    }
  }
  out.mass = 0;
  for (const auto& [j, ss] : found) {
    if (!ss) continue;
    out.j_invariants.push_back(k.element(static_cast<std::uint64_t>(j)));
    out.aut_orders.push_back(aut_order(p, j));
    out.mass += Rational(1, aut_order(p, j));
  }
  out.count = static_cast<int>(out.j_invariants.size());
  return out;
}

int legendre(long a, int p) {
  const long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long e = (p - 1) / 2, b = r, acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

Rational eichler_formula_as_printed(int p) {
  if (p == 2) throw Error(ErrorCode::EvenPrime, "the formula uses Legendre symbols mod an odd prime");
  return Rational(p - 1, 2) + Rational(1 - legendre(-3, p), 3) + Rational(1 - legendre(-4, p), 3);
}

Rational eichler_formula_classical(int p) {
  if (p == 2) throw Error(ErrorCode::EvenPrime, "the formula uses Legendre symbols mod an odd prime");
  return Rational(p - 1, 12) + Rational(1 - legendre(-4, p), 4) + Rational(1 - legendre(-3, p), 3);
}

MassReport mass_check(const SupersingularCensus& c) {
  MassReport r;
  r.mass = c.mass;
  r.expected = Rational(c.p - 1, 24);
  r.ok = r.mass == r.expected;
  return r;
}

FormulaComparison compare_formulas(const SupersingularCensus& c) {
  FormulaComparison f;
  f.p = c.p;
  f.count = c.count;
  if (c.p == 2) return f;
  f.printed = eichler_formula_as_printed(c.p);
  f.classical = eichler_formula_classical(c.p);
  f.printed_matches = f.printed == Rational(c.count);
  f.classical_matches = f.classical == Rational(c.count);
  f.printed_integral = f.printed.denominator() == 1;
  return f;
}

}  // namespace dieu
