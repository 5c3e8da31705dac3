#include "dieu/isocrystal.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>

namespace dieu {

namespace {

long lcm_upto(int h) {
  long L = 1;
  for (int i = 2; i <= h; ++i) L = std::lcm(L, static_cast<long>(i));
  return L;
}

long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

mpz_class ppow(int p, long e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return v;
}

std::string witt_to_string(const WittElement& x) {
  if (x.coeffs().size() == 1) return x.coeffs()[0].get_str();
  std::string s = "(";
  for (size_t i = 0; i < x.coeffs().size(); ++i) s += (i ? "," : "") + x.coeffs()[i].get_str();
  return s + ")";
}

std::string ramified_to_string(const RamifiedElement& x) {
  const RamifiedElement t = x.truncated();
  if (t.digits().size() == 1) return witt_to_string(t.digits()[0]);
  std::string s = "[";
  for (size_t i = 0; i < t.digits().size(); ++i) s += (i ? ";" : "") + witt_to_string(t.digits()[i]);
  return s + "]";
}

}  // namespace

// ------------------------------------------------------------- SlopeSequence

SlopeSequence::SlopeSequence(std::vector<Rational> slopes) {
  std::sort(slopes.begin(), slopes.end());
  for (const auto& q : slopes) {
    if (!entries_.empty() && entries_.back().first == q)
      ++entries_.back().second;
    else
      entries_.emplace_back(q, 1);
  }
}

std::vector<Rational> SlopeSequence::expanded() const {
  std::vector<Rational> out;
  for (const auto& [q, c] : entries_) out.insert(out.end(), static_cast<size_t>(c), q);
  return out;
}

int SlopeSequence::total() const {
  int t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

SlopeSequence SlopeSequence::dual() const {
  std::vector<Rational> out;
  for (const auto& q : expanded()) out.push_back(Rational(1) - q);
  return SlopeSequence(std::move(out));
}

std::string SlopeSequence::to_string() const {
  std::string s = "{";
  for (size_t i = 0; i < entries_.size(); ++i)
    s += (i ? ", " : "") + dieu::to_string(entries_[i].first) + " x" + std::to_string(entries_[i].second);
  return s + "}";
}

// --------------------------------------------------------------- TwistedPoly

TwistedPoly::TwistedPoly(RamifiedRing ring, std::vector<RamifiedElement> coeffs)
    : ring_(std::move(ring)), c_(std::move(coeffs)) {
  if (c_.empty()) throw Error(ErrorCode::DimensionMismatch, "twisted polynomial needs a coefficient");
  for (const auto& x : c_)
    if (!(x.ring() == ring_)) throw Error(ErrorCode::RingMismatch, "coefficient ring mismatch");
}

TwistedPoly TwistedPoly::from_witt(const std::vector<WittElement>& coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::DimensionMismatch, "twisted polynomial needs a coefficient");
  RamifiedRing R(coeffs[0].ring(), 1);
  std::vector<RamifiedElement> c;
  for (const auto& x : coeffs) c.push_back(RamifiedElement::from_witt(R, x));
  return TwistedPoly(R, std::move(c));
}

TwistedPoly TwistedPoly::from_ints(const WittRing& ring, const std::vector<long>& coeffs) {
  std::vector<WittElement> c;
  for (long v : coeffs) c.push_back(ring.from_int(v));
  return from_witt(c);
}

bool TwistedPoly::is_monic() const {
  return (c_[0] - RamifiedElement::one(ring_)).is_zero();
}

int TwistedPoly::prec() const {
  int p = ring_.cap();
  for (const auto& x : c_) p = std::min(p, x.prec());
  return p;
}

TwistedPoly TwistedPoly::operator*(const TwistedPoly& o) const {
  if (!(ring_ == o.ring_)) throw Error(ErrorCode::RingMismatch, "twisted product over different rings");
  const int n = degree();
  std::vector<RamifiedElement> r(static_cast<size_t>(n + o.degree() + 1), RamifiedElement::zero(ring_));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= o.degree(); ++j)
      r[static_cast<size_t>(i + j)] += c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)].sigma(n - i);
  return TwistedPoly(ring_, std::move(r));
}

TwistedPoly TwistedPoly::extend_ramification(int new_r) const {
  if (new_r == ring_.r()) return *this;
  std::vector<RamifiedElement> r;
  for (const auto& x : c_) r.push_back(x.extend_ramification(new_r));
  RamifiedRing R = r[0].ring();
  return TwistedPoly(std::move(R), std::move(r));
}

TwistedPoly TwistedPoly::embed(const WittRing& base) const {
  if (base == ring_.base()) return *this;
  std::vector<RamifiedElement> r;
  for (const auto& x : c_) r.push_back(x.embed(base));
  RamifiedRing R = r[0].ring();
  return TwistedPoly(std::move(R), std::move(r));
}

TwistedPoly TwistedPoly::with_prec(int prec) const {
  std::vector<RamifiedElement> r;
  for (const auto& x : c_) r.push_back(x.with_prec(std::min(prec, x.prec())));
  return TwistedPoly(ring_, std::move(r));
}

bool TwistedPoly::equals(const TwistedPoly& o) const {
  if (degree() != o.degree() || !(ring_ == o.ring_)) return false;
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].equals(o.c_[i])) return false;
  return true;
}

std::string TwistedPoly::to_string() const {
  std::string s;
  const int n = degree();
  for (int i = 0; i <= n; ++i) {
    if (i) s += " + ";
    s += ramified_to_string(c_[static_cast<size_t>(i)]);
    if (n - i >= 1) s += "*F";
    if (n - i >= 2) s += "^" + std::to_string(n - i);
  }
  return s;
}

// ------------------------------------------------------------ Newton polygon

std::vector<std::pair<int, int>> newton_polygon(const TwistedPoly& P) {
  const int n = P.degree();
  const auto& c = P.coeffs();
  if (!c[0].is_unit()) throw Error(ErrorCode::InvalidSlopeData, "leading coefficient is not a unit");
  std::vector<int> val(static_cast<size_t>(n + 1));
  std::vector<bool> known(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    val[static_cast<size_t>(i)] = c[static_cast<size_t>(i)].valuation();
    known[static_cast<size_t>(i)] = val[static_cast<size_t>(i)] < c[static_cast<size_t>(i)].prec();
  }
  if (!known[static_cast<size_t>(n)])
    throw Error(ErrorCode::InsufficientPrecision, "constant coefficient vanishes at working precision",
                P.ring().base().n() + 1);

  std::vector<std::pair<int, int>> hull;
  auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
    return static_cast<long>(a.first - o.first) * (b.second - o.second) -
           static_cast<long>(a.second - o.second) * (b.first - o.first);
  };
  for (int i = 0; i <= n; ++i) {
    if (!known[static_cast<size_t>(i)]) continue;
    const std::pair<int, int> pt{i, val[static_cast<size_t>(i)]};
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }
  // An unknown coefficient only matters if its lower bound lies below the hull.
  for (int i = 1; i < n; ++i) {
    if (known[static_cast<size_t>(i)]) continue;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
      const auto [i0, v0] = hull[k];
      const auto [i1, v1] = hull[k + 1];
      if (i < i0 || i > i1) continue;
      if (static_cast<long>(val[static_cast<size_t>(i)]) * (i1 - i0) <
          static_cast<long>(v0) * (i1 - i0) + static_cast<long>(v1 - v0) * (i - i0))
        throw Error(ErrorCode::InsufficientPrecision,
                    "coefficient " + std::to_string(i) + " is not known well enough to fix the Newton polygon",
                    P.ring().base().n() + 1);
      break;
    }
  }
  return hull;
}

SlopeSequence slopes_by_newton_polygon(const TwistedPoly& P) {
  const auto hull = newton_polygon(P);
  const int R = P.ring().r();
  std::vector<Rational> s;
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    const int len = hull[k + 1].first - hull[k].first;
    const Rational q(hull[k + 1].second - hull[k].second, static_cast<long>(len) * R);
    s.insert(s.end(), static_cast<size_t>(len), q);
  }
  return SlopeSequence(std::move(s));
}

// --------------------------------------------------------- slopes by matrix

// The partial sums S_k of the elementary-divisor valuations of F^K satisfy
// S_k <= K * nu_k, where nu_k are the partial sums of the Newton slopes, and
// S_k / K -> nu_k.  Since every nu_k lies in (1/L)Z, L = lcm(1..h), rounding
// S_k / K up to that grid is exact once K is large; K grows by factors of p
// until two consecutive rounds agree.
SlopeSequence slopes_by_matrix(const FLattice& M, const SlopeOptions& opt) {
  const int h = M.rank();
  const int m = M.ring().m();
  const int p = M.ring().p();
  long D = 0;
  for (int v : M.hodge()) D += v;
  if (D == 0) return SlopeSequence(std::vector<Rational>(static_cast<size_t>(h), Rational(0)));

  const long L = lcm_upto(h);
  std::optional<std::vector<Rational>> prev;
  long pe = 1;
  for (int e = 0; e <= opt.max_rounds; ++e, pe *= p) {
    const long K = L * m * pe;
    const long need = K * D + 1;
    if (need > INT_MAX / 4) break;
    WMatrix A = M.A();
    if (A.ring().n() < need) {
      if (!opt.lift_exact)
        throw Error(ErrorCode::InsufficientPrecision,
                    "slopes_by_matrix needs precision " + std::to_string(need), need);
      A = A.with_precision(static_cast<int>(need));
    }
    WMatrix Phi = A;
    for (int i = 1; i < m; ++i) Phi = Phi * A.sigma(i);
    const WMatrix FK = Phi.pow(static_cast<unsigned long>(K / m));
    const auto vals = snf_valuations(FK);
    long S = 0;
    for (int v : vals) S += v;
    if (S != K * D) throw Error(ErrorCode::OracleMismatch, "valuation of det(F^K) is not K v(det A)");

    std::vector<Rational> slopes;
    Rational last(0);
    S = 0;
    for (int k = 0; k < h; ++k) {
      S += vals[static_cast<size_t>(k)];
      const Rational nu(ceil_div(S * L, K), L);
      slopes.push_back(nu - last);
      last = nu;
    }
    const bool convex = std::is_sorted(slopes.begin(), slopes.end());
    if (convex && prev && *prev == slopes) return SlopeSequence(std::move(slopes));
    prev = convex ? std::optional(slopes) : std::nullopt;
  }
  throw Error(ErrorCode::InsufficientPrecision, "matrix slope estimates did not stabilise");
}

// ----------------------------------------------------------- sigma solver

SigmaSolution sigma_linear_solve(int beta, int alpha, const WittElement& b, int max_degree) {
  const WittRing& W = b.ring();
  const int n = W.n();
  const int p = W.p();
  if (beta > 0) {
    // x = -(b + p^beta sigma^alpha(b) + p^(2 beta) sigma^(2 alpha)(b) + ...)
    WittElement acc = W.zero(), term = b;
    for (long k = 0; k * beta < n; ++k) {
      acc += term.scale(ppow(p, k * beta));
      term = term.sigma(alpha);
    }
    return {-acc, W.field(), n};
  }
  if (beta < 0) {
    // x' = p^beta sigma^alpha(x) solves p^c sigma^-alpha(x') - x' = -b, c = -beta.
    const int c = -beta;
    if (c >= n)
      throw Error(ErrorCode::InsufficientPrecision, "p^beta with -beta >= n leaves no precision", c + 1);
    WittElement acc = W.zero(), term = b;
    for (long k = 0; k * c < n; ++k) {
      acc += term.scale(ppow(p, k * c));
      term = term.sigma(-alpha);
    }
    return {acc - b, W.field(), n - c};
  }
  if (alpha == 0) {
    if (b.is_zero()) return {W.zero(), W.field(), n};
    throw Error(ErrorCode::OutOfRange, "sigma^0(x) - x = b has no solution for b != 0");
  }
  int a = alpha;
  WittElement rhs = b;
  if (a < 0) {
    a = -a;
    rhs = -b.sigma(a);
  }
  // Any solution modulo p^k extends whenever a solution modulo p^n exists in
  // the same field (adjust by a sigma^a-invariant lift), so digit-by-digit
  // approximation decides each candidate field.
  const FqField& base = W.field();
  const int M = base.m();
  const int bound = std::min(max_degree, base.table().max_degree(p));
  for (int Mp = M; Mp <= bound; Mp += M) {
    if (!base.table().contains(p, Mp)) continue;
    const FqField F = base.with_degree(Mp);
    const WittRing W2 = W.with_field(F);
    const WittElement r2 = rhs.embed(W2);
    std::vector<FqElement> coeffs(static_cast<size_t>(a + 1), F.zero());
    coeffs[0] = F.one();
    coeffs[static_cast<size_t>(a)] = -F.one();
    WittElement x = W2.zero();
    bool ok = true;
    for (int k = 0; k < n; ++k) {
      const WittElement E = r2 - (x.sigma(a) - x);
      if (E.is_zero()) break;
      if (E.valuation() < k) throw Error(ErrorCode::OracleMismatch, "successive approximation lost a digit");
      const FqElement c = (k == 0 ? E : E.exact_div_p(k)).residue();
      try {
        const auto sol = solve_additive(coeffs, -c, Mp);
        x += W2.teichmuller(embed(sol.x, F)).scale(ppow(p, k));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::ExtensionExhausted) throw;
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!(x.sigma(a) - x == r2)) throw Error(ErrorCode::OracleMismatch, "sigma-linear solution failed substitution");
    return {x, F, n};
  }
  throw Error(ErrorCode::ExtensionExhausted,
              "sigma^" + std::to_string(a) + "(x) - x = b has no solution over tower fields of degree <= " +
                  std::to_string(bound),
              (bound / M + 1) * M);
}

// ------------------------------------------------------ slope factorisation

namespace {

struct Prepared {
  TwistedPoly P;        // lifted, exact digits, ramification R
  TwistedPoly original; // input embedded in ramification R, original precision
  int R = 1;            // ramification index of the working ring
  int s = 0;            // first slope is s / R
  Rational lambda;
  int ell = 0;          // length of the first Newton segment
  int target = 0;       // pi-adic precision to certify
  int base_n = 0;       // original Witt precision
};

Prepared prepare(const TwistedPoly& P) {
  if (P.degree() < 1) throw Error(ErrorCode::InvalidSlopeData, "polynomial must have degree >= 1");
  if (!P.is_monic()) throw Error(ErrorCode::InvalidSlopeData, "polynomial must be monic");
  const auto hull = newton_polygon(P);
  const int R0 = P.ring().r();
  const Rational lambda(hull[1].second - hull[0].second, static_cast<long>(hull[1].first) * R0);
  const int R = static_cast<int>(std::lcm(static_cast<long>(R0), lambda.denominator()));
  Prepared out{P, P, R, static_cast<int>(lambda.numerator() * (R / lambda.denominator())), lambda,
               hull[1].first, 0, P.ring().base().n()};
  out.original = P.extend_ramification(R);
  out.target = out.original.prec();
  // Dividing a_i by pi^(s i) costs up to s n pi-digits; lift the digits as
  // exact far enough that the rescaled coefficients keep full precision.
  const int extra = static_cast<int>(ceil_div(static_cast<long>(out.s) * P.degree(), R)) + 2;
  std::vector<RamifiedElement> lifted;
  for (const auto& c : P.coeffs()) lifted.push_back(c.with_base_precision(out.base_n + extra));
  RamifiedRing lifted_ring = lifted[0].ring();
  out.P = TwistedPoly(std::move(lifted_ring), std::move(lifted)).extend_ramification(R);
  return out;
}

RamifiedElement lift_digit(const RamifiedRing& R, const FqElement& x, int k) {
  return RamifiedElement::from_witt(R, R.base().lift(x)).mul_pi_pow(k);
}

TwistedPoly to_base_precision(const TwistedPoly& T, int n, int prec) {
  std::vector<RamifiedElement> c;
  for (const auto& x : T.coeffs()) c.push_back(x.with_prec(prec).with_base_precision(n));
  RamifiedRing R = c[0].ring();
  return TwistedPoly(std::move(R), std::move(c));
}

}  // namespace

SlopeFactor slope_factor(const TwistedPoly& P0) {
  Prepared pr = prepare(P0);
  const TwistedPoly& P = pr.P;
  const RamifiedRing& ring = P.ring();
  const int n = P.degree(), ell = pr.ell, s = pr.s, T = pr.target;
  if (ell == n) return {TwistedPoly(P0.ring(), {RamifiedElement::one(P0.ring())}), P0, pr.lambda};

  // Rescale F = pi^s G: P = pi^(s n) sum alpha_i G^(n-i).
  std::vector<RamifiedElement> alpha;
  for (int i = 0; i <= n; ++i) alpha.push_back(P.coeffs()[static_cast<size_t>(i)].div_pi_pow(s * i));
  const TwistedPoly Pt(ring, alpha);

  // Residually Pt = G^(n-ell) * sigma^-(n-ell)(sum_{i<=ell} alpha_i G^(ell-i)).
  const int d = n - ell;
  std::vector<RamifiedElement> q(static_cast<size_t>(d + 1), RamifiedElement::zero(ring));
  q[0] = RamifiedElement::one(ring);
  std::vector<RamifiedElement> r;
  for (int j = 0; j <= ell; ++j) r.push_back(alpha[static_cast<size_t>(j)].sigma(-d));
  std::vector<FqElement> rbar;
  for (const auto& x : r) rbar.push_back(x.residue());
  if (rbar[static_cast<size_t>(ell)].is_zero())
    throw Error(ErrorCode::OracleMismatch, "segment end has non-unit rescaled coefficient");

  for (int k = 1; k < T; ++k) {
    const TwistedPoly QR = TwistedPoly(ring, q) * TwistedPoly(ring, r);
    std::vector<FqElement> ebar;
    bool all_zero = true;
    for (int t = 0; t <= n; ++t) {
      const RamifiedElement diff = (alpha[static_cast<size_t>(t)] - QR.coeffs()[static_cast<size_t>(t)]).with_prec(T);
      if (diff.valuation() < k) throw Error(ErrorCode::OracleMismatch, "slope Hensel step lost a digit");
      if (diff.valuation() < T) all_zero = false;
      ebar.push_back(diff.div_pi_pow(k).residue());
    }
    if (all_zero) break;
    std::vector<FqElement> dq(static_cast<size_t>(d + 1), ebar[0].field().zero());
    std::vector<FqElement> dr(static_cast<size_t>(ell + 1), ebar[0].field().zero());
    auto term = [&](int i, int j) { return dq[static_cast<size_t>(i)] * rbar[static_cast<size_t>(j)].frobenius(d - i); };
    for (int t = n; t > ell; --t) {
      const int i0 = t - ell;
      FqElement acc = ebar[static_cast<size_t>(t)];
      for (int i = i0 + 1; i <= std::min(t, d); ++i) acc -= term(i, t - i);
      dq[static_cast<size_t>(i0)] = acc / rbar[static_cast<size_t>(ell)].frobenius(d - i0);
    }
    for (int t = 1; t <= ell; ++t) {
      FqElement acc = ebar[static_cast<size_t>(t)];
      for (int i = 1; i <= std::min(t, d); ++i) acc -= term(i, t - i);
      dr[static_cast<size_t>(t)] = acc.frobenius(-d);
    }
    for (int i = 1; i <= d; ++i) q[static_cast<size_t>(i)] += lift_digit(ring, dq[static_cast<size_t>(i)], k);
    for (int t = 1; t <= ell; ++t) r[static_cast<size_t>(t)] += lift_digit(ring, dr[static_cast<size_t>(t)], k);
  }

  for (int i = 0; i <= d; ++i) q[static_cast<size_t>(i)] = q[static_cast<size_t>(i)].mul_pi_pow(s * i).with_prec(T);
  for (int j = 0; j <= ell; ++j) r[static_cast<size_t>(j)] = r[static_cast<size_t>(j)].mul_pi_pow(s * j).with_prec(T);
  const TwistedPoly Q = to_base_precision(TwistedPoly(ring, q), pr.base_n, T);
  const TwistedPoly Rf = to_base_precision(TwistedPoly(ring, r), pr.base_n, T);
  if (!(Q * Rf).equals(pr.original))
    throw Error(ErrorCode::OracleMismatch, "slope factorisation failed re-expansion");
  return {Q, Rf, pr.lambda};
}

FirstSlopeFactor first_slope_factor(const TwistedPoly& P0, int max_degree) {
  Prepared pr = prepare(P0);
  const int n = P0.degree(), s = pr.s, T = pr.target;
  RamifiedRing ring = pr.P.ring();
  const WittRing& W0 = ring.base();

  // P v = Q (F - pi^s) iff sum_i alpha_i sigma^(n-i)(v) = 0, alpha_i = a_i / pi^(s i).
  std::vector<RamifiedElement> alpha;
  for (int i = 0; i <= n; ++i) alpha.push_back(pr.P.coeffs()[static_cast<size_t>(i)].div_pi_pow(s * i));
  auto residues = [&] {
    std::vector<FqElement> out;
    for (const auto& a : alpha) out.push_back(a.residue());
    return out;
  };
  auto move_to = [&](const FqField& F) {
    const RamifiedRing R2(W0.with_field(F), ring.r());
    for (auto& a : alpha) a = a.embed(R2.base());
    ring = R2;
  };

  auto k0 = additive_kernel_element(residues(), max_degree);
  FqField field = k0.field;
  if (field.m() != W0.m()) move_to(field);
  RamifiedElement v = RamifiedElement::from_witt(ring, ring.base().teichmuller(k0.x));
  auto evaluate = [&] {
    RamifiedElement E = RamifiedElement::zero(ring);
    for (int i = 0; i <= n; ++i) E += alpha[static_cast<size_t>(i)] * v.sigma(n - i);
    return E.with_prec(std::min(T, E.prec()));
  };
  for (int k = 1; k < T; ++k) {
    const RamifiedElement E = evaluate();
    if (E.is_zero()) break;
    if (E.valuation() < k) throw Error(ErrorCode::OracleMismatch, "linear factor approximation lost a digit");
    const auto sol = solve_additive(residues(), E.div_pi_pow(k).residue(), max_degree);
    if (sol.field.m() != field.m()) {
      field = sol.field;
      move_to(field);
      v = v.embed(ring.base());
    }
    v += lift_digit(ring, embed(sol.x, field), k);
  }
  if (!evaluate().is_zero()) throw Error(ErrorCode::OracleMismatch, "linear factor does not annihilate");

  // b_0 = c_0, b_j = c_j + pi^s b_(j-1), c_j = a_j sigma^(n-j)(v).
  std::vector<RamifiedElement> a;
  for (const auto& c : pr.P.coeffs()) a.push_back(c.embed(ring.base()));
  std::vector<RamifiedElement> b;
  for (int j = 0; j < n; ++j) {
    RamifiedElement c = a[static_cast<size_t>(j)] * v.sigma(n - j);
    if (j) c += b.back().mul_pi_pow(s);
    b.push_back(c);
  }
  const WittRing Wout = P0.ring().base().with_field(field);
  const TwistedPoly Q = to_base_precision(TwistedPoly(ring, b), pr.base_n, T);
  const RamifiedElement u = v.inverse().with_prec(T).with_base_precision(pr.base_n);
  const RamifiedRing& Rout = Q.ring();
  const TwistedPoly lin(Rout, {RamifiedElement::one(Rout), -RamifiedElement::pi_pow(Rout, s)});
  const TwistedPoly unit(Rout, {u});
  if (!(Q * lin * unit).equals(pr.original.embed(Wout)))
    throw Error(ErrorCode::OracleMismatch, "linear factorisation failed re-expansion");
  return {Q, static_cast<int>(pr.lambda.numerator()), static_cast<int>(pr.lambda.denominator()), u, field, T};
}

// ------------------------------------------------------------- decompose

namespace {

long simple_dimension(const Rational& lambda, int R0) {
  return (lambda * R0).denominator();
}

}  // namespace

IsocrystalDecomposition decompose(const TwistedPoly& P, const DecomposeOptions& opt) {
  IsocrystalDecomposition out;
  const int R0 = P.ring().r();
  TwistedPoly cur = P;
  while (cur.degree() > 0) {
    SlopeFactor f = slope_factor(cur);
    const long d = simple_dimension(f.lambda, R0);
    const int deg = f.R.degree();
    if (deg % d != 0) throw Error(ErrorCode::OracleMismatch, "slope part has degree prime to its denominator");
    out.summands.emplace_back(f.lambda, static_cast<int>(deg / d));
    out.factors.push_back(f.R);
    cur = f.Q;
  }
  if (opt.peel_linear) {
    TwistedPoly rest = P;
    try {
      while (rest.degree() > 0) {
        FirstSlopeFactor f = first_slope_factor(rest, opt.max_degree);
        const RamifiedElement lead = f.Q.coeffs()[0].inverse();
        std::vector<RamifiedElement> c;
        for (const auto& x : f.Q.coeffs()) c.push_back(lead * x);
        rest = TwistedPoly(f.Q.ring(), std::move(c));
        out.peeled.push_back(std::move(f));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExtensionExhausted) throw;
      out.peel_stopped = e.what();
    }
  }
  return out;
}

SlopeSequence IsocrystalDecomposition::slopes() const {
  std::vector<Rational> all;
  for (size_t i = 0; i < summands.size(); ++i)
    all.insert(all.end(), static_cast<size_t>(factors[i].degree()), summands[i].first);
  return SlopeSequence(std::move(all));
}

Rational end_algebra_invariant(const Rational& lambda) { return frac_part(-lambda); }

// ---------------------------------------------------------------- lattices

FLattice companion_lattice(const TwistedPoly& P) {
  if (P.ring().r() != 1) throw Error(ErrorCode::InvalidSlopeData, "companion lattice needs an unramified polynomial");
  if (!P.is_monic()) throw Error(ErrorCode::InvalidSlopeData, "companion lattice needs a monic polynomial");
  const int n = P.degree();
  const WittRing& W = P.ring().base();
  WMatrix A(W, n, n);
  for (int j = 0; j + 1 < n; ++j) A.at(j + 1, j) = W.one();
  for (int i = 1; i <= n; ++i) A.at(n - i, n - 1) = -P.coeffs()[static_cast<size_t>(i)].truncated().digits()[0];
  return FLattice(std::move(A));
}

int intertwiner_min_valuation(const WMatrix& A, const WMatrix& A2) {
  if (!(A.ring() == A2.ring())) throw Error(ErrorCode::RingMismatch, "intertwiners over different rings");
  const WittRing& W = A.ring();
  const int h = A.rows(), h2 = A2.rows(), m = W.m(), n = W.n();
  const int N = h * h2 * m;
  // X -> X A - A2 sigma(X) is only Z_p-linear; write it on the coordinates of
  // X in the basis x^i of W_n(F_q) over W_n(F_p).
  const WittRing Zp = WittRing::make(W.field().with_degree(1), n);
  WMatrix L(Zp, N, N);
  int col = 0;
  for (int a = 0; a < h2; ++a)
    for (int b = 0; b < h; ++b)
      for (int i = 0; i < m; ++i, ++col) {
        WMatrix X(W, h2, h);
        std::vector<mpz_class> c(static_cast<size_t>(m), 0);
        c[static_cast<size_t>(i)] = 1;
        X.at(a, b) = W.from_coeffs(c);
        const WMatrix Y = X * A - A2 * X.sigma(1);
        int row = 0;
        for (int a2 = 0; a2 < h2; ++a2)
          for (int b2 = 0; b2 < h; ++b2)
            for (int i2 = 0; i2 < m; ++i2, ++row)
              L.at(row, col) = Zp.from_int(Y.at(a2, b2).coeffs()[static_cast<size_t>(i2)]);
      }
  const auto vals = snf_valuations(L);
  if (vals.back() >= n) return 0;
  return n - vals.back();
}

bool is_superspecial(const DieudonneModule& M) {
  const int h = M.rank();
  if (h % 2 != 0 || a_number(M) != h / 2) return false;
  SlopeOptions opt;
  opt.lift_exact = true;
  for (const auto& q : slopes_by_matrix(M, opt).expanded())
    if (q != Rational(1, 2)) return false;
  return true;
}

}  // namespace dieu
