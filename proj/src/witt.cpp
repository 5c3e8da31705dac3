#include "dieu/witt.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace dieu {

namespace {

using Poly = std::vector<mpz_class>;

mpz_class pow_p(int p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

// a * b mod (g, pn); a, b of length m, g monic of length m + 1.
Poly mulmod(const Poly& a, const Poly& b, const Poly& g, const mpz_class& pn) {
  const size_t m = g.size() - 1;
  Poly t(2 * m - 1);
  for (size_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < m; ++j) t[i + j] += a[i] * b[j];
  }
  for (size_t k = t.size(); k-- > m;) {
    t[k] %= pn;
    if (t[k] == 0) continue;
    const mpz_class c = t[k];
    for (size_t i = 0; i < m; ++i) t[k - m + i] -= c * g[i];
    t[k] = 0;
  }
  t.resize(m);
  for (auto& c : t) c = mod_pn(c, pn);
  return t;
}

Poly powmod(Poly b, mpz_class e, const Poly& g, const mpz_class& pn) {
  Poly r(g.size() - 1);
  r[0] = mod_pn(1, pn);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, b, g, pn);
    e >>= 1;
    if (e > 0) b = mulmod(b, b, g, pn);
  }
  return r;
}

Poly x_poly(size_t m, const mpz_class& pn) {
  Poly x(m);
  if (m == 1) return x;  // caller handles m == 1 separately
  x[1] = mod_pn(1, pn);
  return x;
}

// Reduction of X (a polynomial in the variable) modulo a monic degree-1 g.
Poly gen_of(const Poly& g, const mpz_class& pn) {
  const size_t m = g.size() - 1;
  if (m == 1) return Poly{mod_pn(-g[0], pn)};
  return x_poly(m, pn);
}

using CacheKey = std::tuple<int, int, int, std::vector<int>>;

}  // namespace

mpz_class mod_pn(const mpz_class& v, const mpz_class& pn) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), pn.get_mpz_t());
  return r;
}

int padic_valuation(const mpz_class& v, int p, int cap) {
  if (v == 0) return cap;
  mpz_class t = v;
  int k = 0;
  while (k < cap && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    ++k;
  }
  return k;
}

// ------------------------------------------------------------------ WittRing

WittRing WittRing::make(const FqField& field, int n) {
  if (n < 1) throw Error(ErrorCode::OutOfRange, "Witt precision must be >= 1");
  static std::mutex mu;
  static std::map<CacheKey, std::shared_ptr<const Impl>> cache;
  CacheKey key{field.p(), field.m(), n, field.modulus()};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->field == field) return WittRing(it->second);
  }

  const int p = field.p();
  const size_t m = static_cast<size_t>(field.m());
  auto impl = std::make_shared<Impl>(Impl{field, n, pow_p(p, n), {}, {}});
  const mpz_class& pn = impl->pn;
  const mpz_class q = pow_p(p, static_cast<int>(m));

  Poly g0(m + 1);
  for (size_t i = 0; i <= m; ++i) g0[i] = field.modulus()[i];

  // Teichmueller lift of the root x of g0, in (Z/p^n)[x]/(g0).
  Poly tau = gen_of(g0, pn);
  for (int i = 1; i < n; ++i) tau = powmod(tau, q, g0, pn);

  // g(X) = prod_i (X - tau^(p^i)), coefficients in (Z/p^n)[x]/(g0).
  std::vector<Poly> acc{Poly(m)};
  acc[0][0] = mod_pn(1, pn);
  Poly conj = tau;
  for (size_t i = 0; i < m; ++i) {
    std::vector<Poly> next(acc.size() + 1, Poly(m));
    for (size_t k = 0; k < acc.size(); ++k) {
      for (size_t j = 0; j < m; ++j) next[k + 1][j] = mod_pn(next[k + 1][j] + acc[k][j], pn);
      Poly prod = mulmod(acc[k], conj, g0, pn);
      for (size_t j = 0; j < m; ++j) next[k][j] = mod_pn(next[k][j] - prod[j], pn);
    }
    acc = std::move(next);
    conj = powmod(conj, p, g0, pn);
  }
  impl->g.resize(m + 1);
  for (size_t k = 0; k <= m; ++k) {
    for (size_t j = 1; j < m; ++j)
      if (acc[k][j] != 0)
        throw Error(ErrorCode::OracleMismatch, "Teichmueller modulus is not defined over Z/p^n");
    impl->g[k] = acc[k][0];
  }

  // sigma(x) = x^p, and its powers.
  const Poly& g = impl->g;
  Poly sx = powmod(gen_of(g, pn), p, g, pn);
  Poly cur(m);
  cur[0] = mod_pn(1, pn);
  for (size_t i = 0; i < m; ++i) {
    impl->sigma_powers.push_back(cur);
    cur = mulmod(cur, sx, g, pn);
  }

  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(impl));
  (void)inserted;
  return WittRing(it->second);
}

WittElement WittRing::zero() const { return WittElement(*this, Poly(static_cast<size_t>(m()))); }

WittElement WittRing::one() const { return from_int(1); }

WittElement WittRing::gen() const {
  return WittElement(*this, gen_of(impl_->g, impl_->pn));
}

WittElement WittRing::from_int(const mpz_class& v) const {
  Poly c(static_cast<size_t>(m()));
  c[0] = mod_pn(v, impl_->pn);
  return WittElement(*this, std::move(c));
}

WittElement WittRing::from_coeffs(std::vector<mpz_class> c) const {
  if (c.size() != static_cast<size_t>(m()))
    throw Error(ErrorCode::DimensionMismatch, "Witt element needs m coefficients");
  for (auto& x : c) x = mod_pn(x, impl_->pn);
  return WittElement(*this, std::move(c));
}

WittElement WittRing::lift(const FqElement& a) const {
  if (!(a.field() == field())) throw Error(ErrorCode::RingMismatch, "residue field mismatch");
  if (m() == 1) {
    // The single coefficient is the residue itself (x is a constant here).
    return from_int(a.coeffs()[0]);
  }
  Poly c(static_cast<size_t>(m()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs()[i];
  return WittElement(*this, std::move(c));
}

WittElement WittRing::teichmuller(const FqElement& a) const {
  WittElement y = lift(a);
  const mpz_class q = pow_p(p(), m());
  for (int i = 1; i < n(); ++i) y = y.pow(q);
  return y;
}

WittElement WittRing::random(std::mt19937_64& rng) const {
  Poly c(static_cast<size_t>(m()));
  const size_t words = mpz_sizeinbase(impl_->pn.get_mpz_t(), 2) / 64 + 2;
  for (auto& x : c) {
    mpz_class v = 0;
    for (size_t w = 0; w < words; ++w) {
      v <<= 64;
      v += mpz_class(std::to_string(rng()));
    }
    x = mod_pn(v, impl_->pn);
  }
  return WittElement(*this, std::move(c));
}

// ---------------------------------------------------------------- WittElement

WittElement::WittElement(WittRing ring, std::vector<mpz_class> coeffs)
    : ring_(std::move(ring)), c_(std::move(coeffs)) {
  if (c_.size() != static_cast<size_t>(ring_.m()))
    throw Error(ErrorCode::DimensionMismatch, "Witt element needs m coefficients");
}

bool WittElement::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

int WittElement::valuation() const {
  int v = ring_.n();
  for (const auto& c : c_) v = std::min(v, padic_valuation(c, p(), ring_.n()));
  return v;
}

FqElement WittElement::residue() const {
  std::vector<int> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) {
    mpz_class t = mod_pn(c_[i], p());
    r[i] = static_cast<int>(t.get_si());
  }
  return ring_.field().from_coeffs(std::move(r));
}

static void check_same(const WittRing& a, const WittRing& b) {
  if (!(a == b)) throw Error(ErrorCode::RingMismatch, "Witt ring mismatch");
}

WittElement WittElement::operator+(const WittElement& o) const {
  check_same(ring_, o.ring_);
  Poly r(c_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = mod_pn(c_[i] + o.c_[i], ring_.modulus_pn());
  return WittElement(ring_, std::move(r));
}

WittElement WittElement::operator-(const WittElement& o) const {
  check_same(ring_, o.ring_);
  Poly r(c_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = mod_pn(c_[i] - o.c_[i], ring_.modulus_pn());
  return WittElement(ring_, std::move(r));
}

WittElement WittElement::operator-() const { return ring_.zero() - *this; }

WittElement WittElement::operator*(const WittElement& o) const {
  check_same(ring_, o.ring_);
  if (c_.size() == 1) return ring_.from_int(c_[0] * o.c_[0]);
  return WittElement(ring_, mulmod(c_, o.c_, ring_.modulus(), ring_.modulus_pn()));
}

WittElement WittElement::scale(const mpz_class& k) const {
  Poly r(c_.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = mod_pn(c_[i] * k, ring_.modulus_pn());
  return WittElement(ring_, std::move(r));
}

WittElement WittElement::pow(const mpz_class& e) const {
  if (e < 0) return inverse().pow(-e);
  if (c_.size() == 1) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), c_[0].get_mpz_t(), e.get_mpz_t(), ring_.modulus_pn().get_mpz_t());
    return ring_.from_int(r);
  }
  return WittElement(ring_, powmod(c_, e, ring_.modulus(), ring_.modulus_pn()));
}

WittElement WittElement::inverse() const {
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, "Witt element is not a unit");
  WittElement y = ring_.lift(residue().inverse());
  const WittElement two = ring_.from_int(2);
  for (int prec = 1; prec < ring_.n(); prec *= 2) y = y * (two - *this * y);
  if (!(*this * y).residue().is_one() || !((*this * y) == ring_.one()))
    throw Error(ErrorCode::OracleMismatch, "Newton inversion failed");
  return y;
}

WittElement WittElement::sigma(int k) const {
  const int m = ring_.m();
  k %= m;
  if (k < 0) k += m;
  if (m == 1) return *this;
  const auto& sp = ring_.impl_->sigma_powers;
  Poly cur = c_;
  for (int step = 0; step < k; ++step) {
    Poly next(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0) continue;
      for (size_t j = 0; j < next.size(); ++j) next[j] += cur[i] * sp[i][j];
    }
    for (auto& c : next) c = mod_pn(c, ring_.modulus_pn());
    cur = std::move(next);
  }
  return WittElement(ring_, std::move(cur));
}

WittElement WittElement::exact_div_p(int k) const {
  if (k == 0) return *this;
  if (k >= ring_.n())
    throw Error(ErrorCode::InsufficientPrecision, "division by p^k leaves no precision",
                static_cast<std::int64_t>(k + 1));
  if (valuation() < k) throw Error(ErrorCode::NotAUnit, "element is not divisible by p^k");
  const mpz_class pk = pow_p(p(), k);
  Poly r(c_.size());
  for (size_t i = 0; i < r.size(); ++i) mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), pk.get_mpz_t());
  return ring_.with_precision(ring_.n() - k).from_coeffs(std::move(r));
}

WittElement WittElement::with_precision(int n) const {
  if (n == ring_.n()) return *this;
  return ring_.with_precision(n).from_coeffs(c_);
}

WittElement WittElement::embed(const WittRing& target) const {
  if (target.p() != p() || target.n() != ring_.n())
    throw Error(ErrorCode::RingMismatch, "embedding needs equal p and precision");
  if (target.field() == ring_.field()) return *this;
  const int d = ring_.m();
  if (target.m() % d != 0)
    throw Error(ErrorCode::NoEmbedding, "no embedding of W(F_p^" + std::to_string(d) +
                                            ") into W(F_p^" + std::to_string(target.m()) + ")");
  const WittElement x_img = target.teichmuller(dieu::embed(ring_.field().gen(), target.field()));
  WittElement acc = target.zero();
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x_img + target.from_int(c_[i]);
  return acc;
}

// ------------------------------------------------------------- RamifiedRing

RamifiedRing::RamifiedRing(WittRing base, int r) : base_(std::move(base)), r_(r) {
  if (r < 1) throw Error(ErrorCode::OutOfRange, "ramification index must be >= 1");
}

RamifiedElement::RamifiedElement(RamifiedRing ring, std::vector<WittElement> digits, int prec)
    : ring_(std::move(ring)), d_(std::move(digits)), prec_(std::min(prec, ring_.cap())) {
  if (d_.size() != static_cast<size_t>(ring_.r()))
    throw Error(ErrorCode::DimensionMismatch, "ramified element needs r digits");
  for (const auto& x : d_) check_same(x.ring(), ring_.base());
  if (prec_ < 0) prec_ = 0;
}

RamifiedElement::RamifiedElement(RamifiedRing ring, std::vector<WittElement> digits)
    : RamifiedElement(ring, std::move(digits), ring.cap()) {}

RamifiedElement RamifiedElement::zero(const RamifiedRing& ring) {
  return RamifiedElement(ring, std::vector<WittElement>(static_cast<size_t>(ring.r()), ring.base().zero()));
}

RamifiedElement RamifiedElement::one(const RamifiedRing& ring) { return pi_pow(ring, 0); }

RamifiedElement RamifiedElement::pi_pow(const RamifiedRing& ring, int k) {
  auto z = zero(ring);
  if (k >= ring.cap()) return z;
  z.d_[static_cast<size_t>(k % ring.r())] = ring.base().from_int(pow_p(ring.p(), k / ring.r()));
  return z;
}

RamifiedElement RamifiedElement::from_witt(const RamifiedRing& ring, const WittElement& x) {
  auto z = zero(ring);
  z.d_[0] = x;
  return z;
}

int RamifiedElement::valuation() const {
  const int r = ring_.r();
  int v = prec_;
  for (int i = 0; i < r; ++i) v = std::min(v, r * d_[static_cast<size_t>(i)].valuation() + i);
  return v;
}

FqElement RamifiedElement::residue() const {
  if (prec_ < 1) throw Error(ErrorCode::InsufficientPrecision, "no residue at precision 0", 1);
  return d_[0].residue();
}

RamifiedElement RamifiedElement::operator+(const RamifiedElement& o) const {
  if (!(ring_ == o.ring_)) throw Error(ErrorCode::RingMismatch, "ramified ring mismatch");
  std::vector<WittElement> r;
  for (size_t i = 0; i < d_.size(); ++i) r.push_back(d_[i] + o.d_[i]);
  return RamifiedElement(ring_, std::move(r), std::min(prec_, o.prec_));
}

RamifiedElement RamifiedElement::operator-(const RamifiedElement& o) const { return *this + (-o); }

RamifiedElement RamifiedElement::operator-() const {
  std::vector<WittElement> r;
  for (const auto& x : d_) r.push_back(-x);
  return RamifiedElement(ring_, std::move(r), prec_);
}

RamifiedElement RamifiedElement::operator*(const RamifiedElement& o) const {
  if (!(ring_ == o.ring_)) throw Error(ErrorCode::RingMismatch, "ramified ring mismatch");
  const size_t r = d_.size();
  const WittRing& base = ring_.base();
  std::vector<WittElement> c(r, base.zero());
  for (size_t i = 0; i < r; ++i) {
    if (d_[i].is_zero()) continue;
    for (size_t j = 0; j < r; ++j) {
      WittElement t = d_[i] * o.d_[j];
      if (i + j < r)
        c[i + j] += t;
      else
        c[i + j - r] += t.scale(ring_.p());
    }
  }
  const int prec = std::min(prec_ + o.valuation(), o.prec_ + valuation());
  return RamifiedElement(ring_, std::move(c), prec);
}

RamifiedElement RamifiedElement::inverse() const {
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, "ramified element is not a unit");
  RamifiedElement x = with_prec(ring_.cap());
  RamifiedElement y = from_witt(ring_, d_[0].inverse());
  const RamifiedElement two = from_witt(ring_, ring_.base().from_int(2));
  for (int e = 1; e < ring_.cap(); e *= 2) y = y * (two - x * y);
  return y.with_prec(prec_);
}

RamifiedElement RamifiedElement::sigma(int k) const {
  std::vector<WittElement> r;
  for (const auto& x : d_) r.push_back(x.sigma(k));
  return RamifiedElement(ring_, std::move(r), prec_);
}

RamifiedElement RamifiedElement::with_prec(int prec) const {
  RamifiedElement e = *this;
  e.prec_ = std::max(0, std::min(prec, ring_.cap()));
  return e;
}

RamifiedElement RamifiedElement::truncated() const {
  const int r = ring_.r();
  std::vector<WittElement> cur;
  for (int i = 0; i < r; ++i) {
    const int keep = std::max(0, (prec_ - i + r - 1) / r);
    const mpz_class pk = pow_p(ring_.p(), keep);
    std::vector<mpz_class> c = d_[static_cast<size_t>(i)].coeffs();
    for (auto& x : c) x = mod_pn(x, pk);
    cur.push_back(ring_.base().from_coeffs(std::move(c)));
  }
  return RamifiedElement(ring_, std::move(cur), prec_);
}

RamifiedElement RamifiedElement::with_base_precision(int n) const {
  const RamifiedElement t = truncated();
  RamifiedRing target(ring_.base().with_precision(n), ring_.r());
  std::vector<WittElement> d;
  for (const auto& x : t.d_) d.push_back(x.with_precision(n));
  return RamifiedElement(target, std::move(d), n > ring_.base().n() ? target.cap() : prec_);
}

RamifiedElement RamifiedElement::div_pi_pow(int k) const {
  if (k <= 0) return mul_pi_pow(-k);
  if (valuation() < k) throw Error(ErrorCode::NotAUnit, "element is not divisible by pi^k");
  const int p = ring_.p();
  const WittRing& base = ring_.base();
  // Drop the terms beyond the precision so that the digit divisions are exact.
  std::vector<WittElement> cur = truncated().d_;
  for (int step = 0; step < k; ++step) {
    std::vector<mpz_class> c0 = cur[0].coeffs();
    for (auto& x : c0) mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
    std::vector<WittElement> next(cur.begin() + 1, cur.end());
    next.push_back(base.from_coeffs(std::move(c0)));
    cur = std::move(next);
  }
  return RamifiedElement(ring_, std::move(cur), prec_ - k);
}

RamifiedElement RamifiedElement::mul_pi_pow(int k) const {
  if (k < 0) return div_pi_pow(-k);
  RamifiedElement x = *this;
  for (int step = 0; step < k; ++step) {
    std::vector<WittElement> next;
    next.push_back(x.d_.back().scale(ring_.p()));
    next.insert(next.end(), x.d_.begin(), x.d_.end() - 1);
    x = RamifiedElement(ring_, std::move(next), x.prec_ + 1);
  }
  return x;
}

RamifiedElement RamifiedElement::extend_ramification(int new_r) const {
  const int r = ring_.r();
  if (new_r % r != 0) throw Error(ErrorCode::OutOfRange, "ramification index must be a multiple");
  const int k = new_r / r;
  RamifiedRing target(ring_.base(), new_r);
  auto z = zero(target);
  for (int i = 0; i < r; ++i) z.d_[static_cast<size_t>(i * k)] = d_[static_cast<size_t>(i)];
  return z.with_prec(prec_ * k);
}

RamifiedElement RamifiedElement::embed(const WittRing& target_base) const {
  RamifiedRing target(target_base, ring_.r());
  std::vector<WittElement> r;
  for (const auto& x : d_) r.push_back(x.embed(target_base));
  return RamifiedElement(target, std::move(r), prec_);
}

bool RamifiedElement::equals(const RamifiedElement& o) const {
  const int prec = std::min(prec_, o.prec_);
  return (with_prec(prec) - o.with_prec(prec)).is_zero();
}

// -------------------------------------------------------------- Witt oracle

namespace {

// Witt coordinates of the sum or product from ghost components over Z.
std::vector<int> witt_op_via_ghosts(const std::vector<int>& a, const std::vector<int>& b, int p,
                                    bool multiply) {
  const size_t n = a.size();
  auto ghost = [&](const std::vector<mpz_class>& x, size_t k) {
    mpz_class w = 0;
    for (size_t i = 0; i <= k; ++i) {
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), x[i].get_mpz_t(), static_cast<unsigned long>(detail::ipow(p, static_cast<int>(k - i))));
      w += pow_p(p, static_cast<int>(i)) * t;
    }
    return w;
  };
  std::vector<mpz_class> A(a.begin(), a.end()), B(b.begin(), b.end()), S;
  for (size_t k = 0; k < n; ++k) {
    mpz_class target = multiply ? mpz_class(ghost(A, k) * ghost(B, k)) : mpz_class(ghost(A, k) + ghost(B, k));
    S.push_back(0);
    mpz_class rest = target - ghost(S, k);
    const mpz_class pk = pow_p(p, static_cast<int>(k));
    if (!mpz_divisible_p(rest.get_mpz_t(), pk.get_mpz_t()))
      throw Error(ErrorCode::OracleMismatch, "ghost inversion is not integral");
    mpz_divexact(S[k].get_mpz_t(), rest.get_mpz_t(), pk.get_mpz_t());
  }
  std::vector<int> out;
  for (const auto& s : S) out.push_back(static_cast<int>(mod_pn(s, p).get_si()));
  return out;
}

}  // namespace

mpz_class witt_coordinates_to_int(const std::vector<int>& a, int p, int n) {
  WittRing ring = WittRing::make(make_field(p, 1), n);
  WittElement acc = ring.zero();
  for (size_t i = 0; i < a.size() && static_cast<int>(i) < n; ++i)
    acc += ring.teichmuller(ring.field().from_int(a[i])).scale(pow_p(p, static_cast<int>(i)));
  return acc.coeffs()[0];
}

WittOracleReport witt_oracle_check(int p, int n, int trials, std::uint64_t seed) {
  if (p > 7 || n > 4) throw Error(ErrorCode::OutOfRange, "Witt oracle supports p <= 7, n <= 4");
  WittRing ring = WittRing::make(make_field(p, 1), n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> digit(0, p - 1);
  WittOracleReport rep;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    for (auto& x : a) x = digit(rng);
    for (auto& x : b) x = digit(rng);
    const WittElement ea = ring.from_int(witt_coordinates_to_int(a, p, n));
    const WittElement eb = ring.from_int(witt_coordinates_to_int(b, p, n));
    for (bool mult : {false, true}) {
      const auto s = witt_op_via_ghosts(a, b, p, mult);
      const WittElement want = ring.from_int(witt_coordinates_to_int(s, p, n));
      const WittElement got = mult ? ea * eb : ea + eb;
      if (!(got == want)) {
        rep.pass = false;
        std::ostringstream os;
        os << (mult ? "product" : "sum") << " mismatch for p=" << p << " n=" << n;
        rep.counterexample = os.str();
        return rep;
      }
    }
    ++rep.trials;
  }
  return rep;
}

}  // namespace dieu
