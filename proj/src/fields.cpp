#include "dieu/fields.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dieu {

namespace detail {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace detail

namespace {

using Poly = std::vector<std::int64_t>;  // low to high, entries in [0, p)

int mod_p(std::int64_t v, int p) { return static_cast<int>(((v % p) + p) % p); }

std::int64_t inv_mod(std::int64_t a, int p) {
  std::int64_t t = 0, nt = 1, r = p, nr = mod_p(a, p);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return mod_p(t, p);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f for monic f, result has length deg f.
Poly reduce(Poly a, const Poly& f, int p) {
  const std::size_t m = f.size() - 1;
  for (std::size_t i = a.size(); i-- > m;) {
    std::int64_t c = a[i] % p;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= m; ++j) a[i - m + j] = (a[i - m + j] - c * f[j]) % p;
  }
  a.resize(m, 0);
  for (auto& c : a) c = mod_p(c, p);
  return a;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& f, int p) {
  Poly out(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return reduce(std::move(out), f, p);
}

Poly powmod(Poly base, std::uint64_t e, const Poly& f, int p) {
  Poly r(f.size() - 1, 0);
  r[0] = 1;
  r = reduce(r, f, p);
  base = reduce(std::move(base), f, p);
  while (e) {
    if (e & 1) r = mulmod(r, base, f, p);
    e >>= 1;
    if (e) base = mulmod(base, base, f, p);
  }
  return r;
}

Poly x_poly(const Poly& f, int p) {
  Poly x(std::max<std::size_t>(2, f.size() - 1), 0);
  x[1] = 1;
  return reduce(x, f, p);
}

bool is_one(const Poly& a) {
  if (a.empty() || a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](std::int64_t c) { return c == 0; });
}

// Evaluate g at the element `x` of F_p[t]/(f).
Poly eval_at(const std::vector<int>& g, const Poly& x, const Poly& f, int p) {
  Poly acc(f.size() - 1, 0);
  for (std::size_t i = g.size(); i-- > 0;) {
    acc = mulmod(acc, x, f, p);
    acc[0] = mod_p(acc[0] + g[i], p);
  }
  return acc;
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    std::int64_t inv = inv_mod(b.back(), p);
    while (a.size() >= b.size() && !a.empty()) {
      std::int64_t c = a.back() * inv % p;
      std::size_t shift = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = mod_p(a[shift + j] - c * b[j], p);
      trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

bool is_irreducible(const Poly& f, int p) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m == 1) return true;
  Poly x = x_poly(f, p);
  auto frob_pow = [&](int k) {
    Poly y = x;
    for (int i = 0; i < k; ++i) y = powmod(y, static_cast<std::uint64_t>(p), f, p);
    return y;
  };
  if (frob_pow(m) != x) return false;
  for (auto q : detail::prime_factors(static_cast<std::uint64_t>(m))) {
    Poly y = frob_pow(m / static_cast<int>(q));
    Poly diff = y;
    diff.resize(std::max(diff.size(), x.size()), 0);
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = mod_p(diff[i] - x[i], p);
    Poly g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

bool is_primitive(const Poly& f, int p) {
  const int m = static_cast<int>(f.size()) - 1;
  const std::uint64_t order = detail::ipow(p, m) - 1;
  Poly x = x_poly(f, p);
  if (!is_one(powmod(x, order, f, p))) return false;
  for (auto q : detail::prime_factors(order))
    if (is_one(powmod(x, order / q, f, p))) return false;
  return true;
}

bool is_compatible(const Poly& f, int p, int d, const std::vector<int>& sub) {
  const int m = static_cast<int>(f.size()) - 1;
  const std::uint64_t e = (detail::ipow(p, m) - 1) / (detail::ipow(p, d) - 1);
  Poly y = powmod(x_poly(f, p), e, f, p);
  Poly v = eval_at(sub, y, f, p);
  return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
}

std::vector<int> to_int_vec(const Poly& a) { return {a.begin(), a.end()}; }

}  // namespace

// ---------------------------------------------------------------- FieldTable

FieldTable::FieldTable(std::map<std::pair<int, int>, std::vector<int>> moduli)
    : moduli_(std::move(moduli)) {}

FieldTable FieldTable::compute(int max_p, int max_m) {
  std::map<std::pair<int, int>, std::vector<int>> out;
  for (int p = 2; p <= max_p; ++p) {
    if (!detail::is_prime(p)) continue;
    for (int m = 1; m <= max_m; ++m) {
      // Conway ordering: f = x^m + sum_i (-1)^(m-i) a_i x^i, minimal
      // (a_{m-1}, ..., a_0) lexicographically.  Norm compatibility with the
      // degree-one entry fixes a_0, so only a_{m-1..1} are enumerated.
      const std::uint64_t count = detail::ipow(p, m - 1);
      bool found = false;
      for (std::uint64_t idx = 0; idx < count * static_cast<std::uint64_t>(p) && !found; ++idx) {
        std::vector<int> a(m, 0);
        std::uint64_t t = idx;
        for (int i = 0; i < m; ++i) {  // a_0 is the least significant digit
          a[i] = static_cast<int>(t % p);
          t /= p;
        }
        if (a[0] == 0) continue;
        Poly f(m + 1, 0);
        f[m] = 1;
        for (int i = 0; i < m; ++i) f[i] = ((m - i) % 2 == 0) ? a[i] : mod_p(-a[i], p);
        bool ok = true;
        for (int d = 1; d < m && ok; ++d)
          if (m % d == 0) ok = is_compatible(f, p, d, out.at({p, d}));
        if (!ok || !is_primitive(f, p)) continue;
        out[{p, m}] = to_int_vec(f);
        found = true;
      }
      if (!found)
        throw Error(ErrorCode::UnsupportedField,
                    "no Conway polynomial found for p=" + std::to_string(p) +
                        " m=" + std::to_string(m));
    }
  }
  return FieldTable(std::move(out));
}

bool FieldTable::contains(int p, int m) const { return moduli_.count({p, m}) != 0; }

const std::vector<int>& FieldTable::modulus(int p, int m) const {
  auto it = moduli_.find({p, m});
  if (it == moduli_.end())
    throw Error(ErrorCode::UnsupportedField, "F_" + std::to_string(p) + "^" +
                                                 std::to_string(m) + " is not in the field table");
  return it->second;
}

int FieldTable::max_degree(int p) const {
  int best = 0;
  for (const auto& [key, f] : moduli_)
    if (key.first == p) best = std::max(best, key.second);
  return best;
}

void FieldTable::validate() const {
  for (const auto& [key, f] : moduli_) {
    auto [p, m] = key;
    auto where = " (p=" + std::to_string(p) + ", m=" + std::to_string(m) + ")";
    if (!detail::is_prime(p)) throw Error(ErrorCode::UnsupportedField, "non-prime p" + where);
    if (static_cast<int>(f.size()) != m + 1 || f.back() != 1)
      throw Error(ErrorCode::UnsupportedField, "modulus not monic of degree m" + where);
    for (int c : f)
      if (c < 0 || c >= p) throw Error(ErrorCode::UnsupportedField, "coefficient out of range" + where);
    Poly fp(f.begin(), f.end());
    if (!is_irreducible(fp, p)) throw Error(ErrorCode::UnsupportedField, "reducible modulus" + where);
    if (!is_primitive(fp, p)) throw Error(ErrorCode::UnsupportedField, "non-primitive modulus" + where);
    for (int d = 1; d < m; ++d) {
      if (m % d != 0) continue;
      auto it = moduli_.find({p, d});
      if (it == moduli_.end())
        throw Error(ErrorCode::UnsupportedField, "missing subfield modulus" + where);
      if (!is_compatible(fp, p, d, it->second))
        throw Error(ErrorCode::UnsupportedField, "not norm-compatible with degree " +
                                                     std::to_string(d) + where);
    }
  }
}

FieldTable FieldTable::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field table: ") + e.what());
  }
  if (!j.is_object() || j.value("version", -1) != kVersion || !j.contains("moduli") ||
      !j["moduli"].is_array())
    throw Error(ErrorCode::ParseError, "field table: expected {\"version\":1,\"moduli\":[...]}");
  std::map<std::pair<int, int>, std::vector<int>> moduli;
  for (const auto& e : j["moduli"]) {
    if (!e.is_object() || !e.contains("p") || !e.contains("m") || !e.contains("coeffs") ||
        !e["p"].is_number_integer() || !e["m"].is_number_integer() || !e["coeffs"].is_array())
      throw Error(ErrorCode::ParseError, "field table: malformed entry " + e.dump());
    std::vector<int> coeffs;
    for (const auto& c : e["coeffs"]) {
      if (!c.is_number_integer()) throw Error(ErrorCode::ParseError, "field table: bad coefficient");
      coeffs.push_back(c.get<int>());
    }
    moduli[{e["p"].get<int>(), e["m"].get<int>()}] = std::move(coeffs);
  }
  FieldTable table(std::move(moduli));
  table.validate();
  return table;
}

FieldTable FieldTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open field table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string FieldTable::to_json_text() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [key, f] : moduli_)
    arr.push_back({{"p", key.first}, {"m", key.second}, {"coeffs", f}});
  nlohmann::json j = {{"version", kVersion}, {"moduli", arr}};
  return j.dump(1) + "\n";
}

// ---------------------------------------------------------------- FqField

FqField make_field(int p, int m, const FieldTable& table) {
  if (!detail::is_prime(p) || m < 1 || !table.contains(p, m))
    throw Error(ErrorCode::UnsupportedField,
                "F_" + std::to_string(p) + "^" + std::to_string(m) + " is outside the field table");
  auto impl = std::make_shared<FqField::Impl>();
  impl->p = p;
  impl->m = m;
  impl->size = detail::ipow(p, m);
  impl->modulus = table.modulus(p, m);
  impl->table = &table;
  const Poly f(impl->modulus.begin(), impl->modulus.end());
  const Poly x = x_poly(f, p);
  for (int d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    const std::uint64_t e = (impl->size - 1) / (detail::ipow(p, d) - 1);
    impl->sub_generators[d] = to_int_vec(powmod(x, e, f, p));
  }
  return FqField(std::move(impl));
}

FqField make_field(int p, int m, std::shared_ptr<const FieldTable> table) {
  FqField f = make_field(p, m, *table);
  auto impl = std::make_shared<FqField::Impl>(*f.impl_);
  impl->owned_table = table;
  return FqField(std::move(impl));
}

FqField FqField::with_degree(int M) const {
  if (M == m()) return *this;
  FqField f = make_field(p(), M, table());
  if (!impl_->owned_table) return f;
  auto impl = std::make_shared<FqField::Impl>(*f.impl_);
  impl->owned_table = impl_->owned_table;
  return FqField(std::move(impl));
}

const std::vector<int>& FqField::subfield_generator(int d) const {
  auto it = impl_->sub_generators.find(d);
  if (it == impl_->sub_generators.end())
    throw Error(ErrorCode::NoEmbedding, "degree " + std::to_string(d) + " does not divide " +
                                            std::to_string(m()));
  return it->second;
}

FqElement FqField::zero() const { return FqElement(*this, std::vector<int>(m(), 0)); }
FqElement FqField::one() const { return from_int(1); }
FqElement FqField::gen() const {
  return FqElement(*this, to_int_vec(x_poly(Poly(modulus().begin(), modulus().end()), p())));
}
FqElement FqField::from_int(std::int64_t v) const {
  std::vector<int> c(m(), 0);
  c[0] = mod_p(v, p());
  return FqElement(*this, std::move(c));
}
FqElement FqField::from_coeffs(std::vector<int> coeffs) const {
  Poly a(coeffs.begin(), coeffs.end());
  for (auto& c : a) c = mod_p(c, p());
  if (a.size() < static_cast<std::size_t>(m())) a.resize(m(), 0);
  return FqElement(*this, to_int_vec(reduce(std::move(a), Poly(modulus().begin(), modulus().end()), p())));
}
FqElement FqField::element(std::uint64_t index) const {
  std::vector<int> c(m(), 0);
  for (int i = 0; i < m(); ++i) {
    c[i] = static_cast<int>(index % p());
    index /= p();
  }
  return FqElement(*this, std::move(c));
}
std::vector<FqElement> FqField::elements() const {
  std::vector<FqElement> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i < size(); ++i) out.push_back(element(i));
  return out;
}

// ---------------------------------------------------------------- FqElement

FqElement::FqElement(FqField field, std::vector<int> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != field_.m())
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length must equal m");
}

bool FqElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](int c) { return c == 0; });
}
bool FqElement::is_one() const {
  return coeffs_[0] == 1 && std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](int c) { return c == 0; });
}
std::uint64_t FqElement::index() const {
  std::uint64_t r = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * field_.p() + coeffs_[i];
  return r;
}

static void require_same(const FqElement& a, const FqElement& b) {
  if (!(a.field() == b.field()))
    throw Error(ErrorCode::RingMismatch, "elements of different fields");
}

FqElement FqElement::operator+(const FqElement& o) const {
  require_same(*this, o);
  std::vector<int> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (coeffs_[i] + o.coeffs_[i]) % p();
  return FqElement(field_, std::move(c));
}
FqElement FqElement::operator-(const FqElement& o) const {
  require_same(*this, o);
  std::vector<int> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_p(coeffs_[i] - o.coeffs_[i], p());
  return FqElement(field_, std::move(c));
}
FqElement FqElement::operator-() const { return field_.zero() - *this; }
FqElement FqElement::operator*(const FqElement& o) const {
  require_same(*this, o);
  const auto& md = field_.modulus();
  Poly r = mulmod(Poly(coeffs_.begin(), coeffs_.end()), Poly(o.coeffs_.begin(), o.coeffs_.end()),
                  Poly(md.begin(), md.end()), p());
  return FqElement(field_, to_int_vec(r));
}
FqElement FqElement::pow(std::uint64_t e) const {
  const auto& md = field_.modulus();
  return FqElement(field_, to_int_vec(powmod(Poly(coeffs_.begin(), coeffs_.end()), e,
                                             Poly(md.begin(), md.end()), p())));
}
FqElement FqElement::inverse() const {
  if (is_zero()) throw Error(ErrorCode::NotAUnit, "inverse of zero in F_q");
  return pow(field_.size() - 2);
}
FqElement FqElement::frobenius(int k) const {
  const int m = field_.m();
  k = ((k % m) + m) % m;
  FqElement r = *this;
  for (int i = 0; i < k; ++i) r = r.pow(static_cast<std::uint64_t>(p()));
  return r;
}
int FqElement::degree() const {
  for (int d = 1; d <= field_.m(); ++d)
    if (field_.m() % d == 0 && frobenius(d) == *this) return d;
  return field_.m();
}

std::uint64_t multiplicative_order(const FqElement& x) {
  if (x.is_zero()) throw Error(ErrorCode::NotAUnit, "order of zero");
  std::uint64_t order = x.field().size() - 1;
  for (auto q : detail::prime_factors(order))
    while (order % q == 0 && x.pow(order / q).is_one()) order /= q;
  return order;
}

FqElement embed(const FqElement& x, const FqField& target) {
  const int d = x.field().m();
  if (x.p() != target.p() || target.m() % d != 0)
    throw Error(ErrorCode::NoEmbedding, "cannot embed F_" + std::to_string(x.p()) + "^" +
                                            std::to_string(d) + " into F_" +
                                            std::to_string(target.p()) + "^" +
                                            std::to_string(target.m()));
  if (x.field() == target) return x;
  const auto& md = target.modulus();
  const Poly f(md.begin(), md.end());
  const auto& g = target.subfield_generator(d);
  Poly img = eval_at(x.coeffs(), Poly(g.begin(), g.end()), f, target.p());
  return FqElement(target, to_int_vec(img));
}

FqElement restrict_to(const FqElement& x, const FqField& sub) {
  if (x.field().m() % sub.m() != 0 || x.p() != sub.p())
    throw Error(ErrorCode::NoEmbedding, "not a subfield");
  for (std::uint64_t i = 0; i < sub.size(); ++i) {
    FqElement c = sub.element(i);
    if (embed(c, x.field()) == x) return c;
  }
  throw Error(ErrorCode::NoEmbedding, "element does not lie in the subfield");
}

FqField common_field(const FqField& a, const FqField& b) {
  if (a.p() != b.p()) throw Error(ErrorCode::RingMismatch, "different characteristics");
  const int m = std::lcm(a.m(), b.m());
  if (m == a.m()) return a;
  if (m == b.m()) return b;
  return a.with_degree(m);
}

// ---------------------------------------------------------------- additive

FqElement eval_additive(std::span<const FqElement> coeffs, const FqElement& x) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  FqElement acc = x.field().zero();
  FqElement xp = x;  // x^(p^(n-i)) built from i = n downwards
  for (int i = n; i >= 0; --i) {
    acc += embed(coeffs[i], x.field()) * xp;
    xp = xp.pow(static_cast<std::uint64_t>(x.p()));
  }
  return acc;
}

namespace {

// Row-reduce [A | b] over F_p; returns a solution or nullopt.
std::optional<std::vector<int>> solve_mod_p(std::vector<std::vector<int>> a, std::vector<int> b, int p) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    const std::int64_t inv = inv_mod(a[r][c], p);
    for (auto& v : a[r]) v = static_cast<int>(v * inv % p);
    b[r] = static_cast<int>(b[r] * inv % p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::int64_t f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = mod_p(a[i][j] - f * a[r][j], p);
      b[i] = mod_p(b[i] - f * b[r], p);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<int> x(cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

// Nonzero vector in the kernel of A over F_p, if any.
std::optional<std::vector<int>> kernel_mod_p(std::vector<std::vector<int>> a, int p) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_of_col(cols, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const std::int64_t inv = inv_mod(a[r][c], p);
    for (auto& v : a[r]) v = static_cast<int>(v * inv % p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::int64_t f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = mod_p(a[i][j] - f * a[r][j], p);
    }
    pivot_of_col[c] = static_cast<int>(r);
    ++r;
  }
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    std::vector<int> x(cols, 0);
    x[free] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) x[c] = mod_p(-a[pivot_of_col[c]][free], p);
    return x;
  }
  return std::nullopt;
}

// Matrix (rows = output coordinates) of x -> L(x) on F_{p^M} over F_p.
std::vector<std::vector<int>> additive_matrix(std::span<const FqElement> coeffs, const FqField& field) {
  const int M = field.m();
  std::vector<std::vector<int>> a(M, std::vector<int>(M, 0));
  for (int j = 0; j < M; ++j) {
    std::vector<int> e(M, 0);
    e[j] = 1;
    FqElement img = eval_additive(coeffs, FqElement(field, e));
    for (int i = 0; i < M; ++i) a[i][j] = img.coeffs()[i];
  }
  return a;
}

int base_degree(std::span<const FqElement> coeffs, const FqField* extra) {
  int m = extra ? extra->m() : 1;
  for (const auto& c : coeffs) m = std::lcm(m, c.field().m());
  return m;
}

}  // namespace

AdditiveSolution solve_additive(std::span<const FqElement> coeffs, const FqElement& rhs, int max_degree) {
  if (coeffs.empty() || std::all_of(coeffs.begin(), coeffs.end(), [](const FqElement& c) { return c.is_zero(); }))
    throw Error(ErrorCode::InvalidSlopeData, "additive polynomial with no nonzero coefficient");
  const int p = rhs.p();
  const int m0 = base_degree(coeffs, &rhs.field());
  const FieldTable& table = rhs.field().table();
  const int bound = std::min(max_degree, table.max_degree(p));
  for (int M = m0; M <= bound; M += m0) {
    if (!table.contains(p, M)) continue;
    FqField field = rhs.field().with_degree(M);
    auto a = additive_matrix(coeffs, field);
    FqElement target = -embed(rhs, field);
    auto x = solve_mod_p(std::move(a), target.coeffs(), p);
    if (x) {
      FqElement sol(field, *x);
      if (!(eval_additive(coeffs, sol) + embed(rhs, field)).is_zero())
        throw Error(ErrorCode::OracleMismatch, "additive solution failed substitution");
      return {sol, field};
    }
  }
  throw Error(ErrorCode::ExtensionExhausted,
              "additive equation not solvable in any tower field of degree <= " + std::to_string(bound),
              (bound / m0 + 1) * m0);
}

AdditiveSolution additive_kernel_element(std::span<const FqElement> coeffs, int max_degree) {
  if (coeffs.size() < 2 ||
      std::all_of(coeffs.begin() + 1, coeffs.end(), [](const FqElement& c) { return c.is_zero(); }))
    throw Error(ErrorCode::InvalidSlopeData, "additive polynomial is a monomial; no nonzero root");
  const int p = coeffs[0].p();
  const int m0 = base_degree(coeffs, nullptr);
  const FieldTable& table = coeffs[0].field().table();
  const int bound = std::min(max_degree, table.max_degree(p));
  for (int M = m0; M <= bound; M += m0) {
    if (!table.contains(p, M)) continue;
    FqField field = coeffs[0].field().with_degree(M);
    auto x = kernel_mod_p(additive_matrix(coeffs, field), p);
    if (x) {
      FqElement sol(field, *x);
      if (!eval_additive(coeffs, sol).is_zero())
        throw Error(ErrorCode::OracleMismatch, "additive kernel element failed substitution");
      return {sol, field};
    }
  }
  throw Error(ErrorCode::ExtensionExhausted,
              "additive polynomial has no nonzero root in tower fields of degree <= " +
                  std::to_string(bound),
              (bound / m0 + 1) * m0);
}

}  // namespace dieu

namespace dieu {

std::string to_string(const FqElement& x) {
  const auto& c = x.coeffs();
  std::string s;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
    if (i > 0) s += (c[i] != 1 ? "*g" : "g") + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return s.empty() ? "0" : s;
}

FqElement parse_fq(const std::string& text, const FqField& k) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty field element");
  FqElement acc = k.zero();
  size_t i = 0;
  auto number = [&](long& out) {
    const size_t j = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == j) return false;
    out = std::stol(t.substr(j, i - j));
    return true;
  };
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') sign = t[i++] == '-' ? -1 : 1;
    long coef = 1;
    const bool had = number(coef);
    if (had && i < t.size() && t[i] == '*') ++i;
    long e = 0;
    if (i < t.size() && t[i] == 'g') {
      ++i;
      e = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        if (!number(e)) throw Error(ErrorCode::ParseError, "missing exponent in '" + text + "'");
      }
    } else if (!had) {
      throw Error(ErrorCode::ParseError, "unexpected character in '" + text + "'");
    }
    acc += k.from_int(sign * coef) * k.gen().pow(static_cast<std::uint64_t>(e));
  }
  return acc;
}

}  // namespace dieu
