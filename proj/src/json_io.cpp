#include "dieu/json_io.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

namespace dieu {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

int get_int(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer())
    bad(std::string("expected integer field '") + key + "'");
  return j.at(key).get<int>();
}

Json mpz_json(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

mpz_class mpz_from(const Json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) bad("not an integer: " + j.get<std::string>());
    return v;
  }
  bad("expected an integer, got " + j.dump());
}

}  // namespace

// ------------------------------------------------------------ fields

FqField FieldSource::field(int p, int m) const {
  if (table) return make_field(p, m, table);
  return make_field(p, m);
}

FieldSource FieldSource::from_environment() {
  if (const char* path = std::getenv("DIEU_FIELD_TABLE"); path && *path) return from_file(path);
  return {};
}

FieldSource FieldSource::from_file(const std::string& path) {
  return {std::make_shared<const FieldTable>(FieldTable::load(path))};
}

Json to_json(const FqElement& x) {
  return {{"p", x.field().p()}, {"m", x.field().m()}, {"coeffs", x.coeffs()}};
}

FqElement fq_from_json(const Json& j, const FieldSource& src) {
  const FqField k = src.field(get_int(j, "p"), get_int(j, "m"));
  if (!j.contains("coeffs") || !j.at("coeffs").is_array()) bad("FqElement needs 'coeffs'");
  auto c = j.at("coeffs").get<std::vector<int>>();
  if (c.size() > static_cast<size_t>(k.m())) bad("too many coefficients for F_q");
  c.resize(static_cast<size_t>(k.m()), 0);
  for (int& v : c) v = ((v % k.p()) + k.p()) % k.p();
  return k.from_coeffs(c);
}

// ------------------------------------------------------------ Witt vectors

Json ring_to_json(const WittRing& W) { return {{"p", W.p()}, {"m", W.m()}, {"n", W.n()}}; }

WittRing ring_from_json(const Json& j, const FieldSource& src) {
  const int n = get_int(j, "n");
  if (n < 1) bad("precision n must be >= 1");
  const int m = j.contains("m") ? get_int(j, "m") : 1;
  return WittRing::make(src.field(get_int(j, "p"), m), n);
}

Json to_json(const WittElement& x) {
  Json c = Json::array();
  for (const auto& v : x.coeffs()) c.push_back(mpz_json(v));
  Json j = ring_to_json(x.ring());
  j["coeffs"] = c;
  return j;
}

WittElement witt_from_json(const Json& j, const WittRing& W) {
  if (j.is_number_integer() || j.is_string()) return W.from_int(mpz_from(j));
  const Json* coeffs = &j;
  if (j.is_object()) {
    if (get_int(j, "p") != W.p() || (j.contains("m") && get_int(j, "m") != W.m()) || get_int(j, "n") != W.n())
      bad("Witt element ring does not match");
    if (!j.contains("coeffs")) bad("Witt element needs 'coeffs'");
    coeffs = &j.at("coeffs");
  }
  if (!coeffs->is_array()) bad("Witt element coefficients must be an array");
  std::vector<mpz_class> c;
  for (const auto& v : *coeffs) c.push_back(mpz_from(v));
  if (c.size() > static_cast<size_t>(W.m())) bad("too many coefficients for W_n(F_q)");
  c.resize(static_cast<size_t>(W.m()), 0);
  return W.from_coeffs(std::move(c));
}

Json to_json(const RamifiedElement& x) {
  Json j = ring_to_json(x.ring().base());
  j["r"] = x.ring().r();
  j["prec"] = x.prec();
  Json d = Json::array();
  const RamifiedElement t = x.truncated();
  for (const auto& w : t.digits()) d.push_back(to_json(w)["coeffs"]);
  j["digits"] = d;
  return j;
}

RamifiedElement ramified_from_json(const Json& j, const RamifiedRing& R) {
  if (!j.is_object()) return RamifiedElement::from_witt(R, witt_from_json(j, R.base()));
  if (!j.contains("digits")) {
    if (j.contains("coeffs")) return RamifiedElement::from_witt(R, witt_from_json(j, R.base()));
    bad("ramified element needs 'digits'");
  }
  if (j.contains("r") && get_int(j, "r") != R.r()) bad("ramification index does not match");
  const auto& d = j.at("digits");
  if (!d.is_array() || d.size() > static_cast<size_t>(R.r())) bad("'digits' must have at most r entries");
  std::vector<WittElement> digits;
  for (const auto& x : d) digits.push_back(witt_from_json(x, R.base()));
  while (digits.size() < static_cast<size_t>(R.r())) digits.push_back(R.base().zero());
  const int prec = j.contains("prec") ? get_int(j, "prec") : R.cap();
  if (prec < 0 || prec > R.cap()) bad("'prec' out of range");
  return RamifiedElement(R, std::move(digits), prec);
}

// ------------------------------------------------------------ matrices and polynomials

Json to_json(const WMatrix& A) {
  Json rows = Json::array();
  for (int i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < A.cols(); ++k) row.push_back(to_json(A.at(i, k)));
    rows.push_back(row);
  }
  return {{"ring", ring_to_json(A.ring())}, {"h", A.rows()}, {"A", rows}};
}

WMatrix matrix_from_json(const Json& j, const FieldSource& src) {
  if (!j.is_object() || !j.contains("ring") || !j.contains("A")) bad("module needs 'ring' and 'A'");
  const WittRing W = ring_from_json(j.at("ring"), src);
  const auto& rows = j.at("A");
  if (!rows.is_array() || rows.empty()) bad("'A' must be a nonempty array of rows");
  const int h = static_cast<int>(rows.size());
  if (j.contains("h") && get_int(j, "h") != h) bad("'h' does not match the number of rows");
  WMatrix A(W, h, h);
  for (int i = 0; i < h; ++i) {
    const auto& row = rows.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != h) bad("'A' must be square");
    for (int k = 0; k < h; ++k) A.at(i, k) = witt_from_json(row.at(static_cast<size_t>(k)), W);
  }
  return A;
}

Json to_json(const TwistedPoly& P) {
  Json ring = ring_to_json(P.ring().base());
  ring["r"] = P.ring().r();
  Json c = Json::array();
  for (const auto& x : P.coeffs()) c.push_back(to_json(x));
  return {{"ring", ring}, {"coeffs", c}};
}

TwistedPoly poly_from_json(const Json& j, const FieldSource& src) {
  if (!j.is_object() || !j.contains("ring") || !j.contains("coeffs")) bad("polynomial needs 'ring' and 'coeffs'");
  const WittRing W = ring_from_json(j.at("ring"), src);
  const int r = j.at("ring").contains("r") ? get_int(j.at("ring"), "r") : 1;
  if (r < 1) bad("ramification index must be >= 1");
  const RamifiedRing R(W, r);
  const auto& c = j.at("coeffs");
  if (!c.is_array() || c.empty()) bad("'coeffs' must be a nonempty array");
  std::vector<RamifiedElement> out;
  for (const auto& x : c) out.push_back(ramified_from_json(x, R));
  return TwistedPoly(R, std::move(out));
}

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) bad("rational must be a string \"s/r\"");
  return parse_rational(j.get<std::string>());
}

Json to_json(const SlopeSequence& s) {
  Json out = Json::array();
  for (const auto& [q, c] : s.entries()) out.push_back({to_string(q), c});
  return out;
}

Json to_json(const DeformedPresentation& d) {
  Json rel = Json::array();
  for (const auto& row : d.relations) {
    Json r = Json::array();
    for (const auto& e : row) {
      Json lin = Json::array();
      for (const auto& x : e.linear) lin.push_back(to_json(x));
      r.push_back({{"constant", to_json(e.constant)}, {"linear", lin}, {"text", e.to_string(d.vars)}});
    }
    rel.push_back(r);
  }
  return {{"g", d.g}, {"h", d.h}, {"vars", d.vars}, {"relations", rel}};
}

Json to_json(const TangentAction& t) {
  Json c = Json::array(), l = Json::array(), text = Json::array();
  for (int i = 0; i < t.g(); ++i) {
    Json cr = Json::array(), lr = Json::array(), tr = Json::array();
    for (int k = 0; k < t.g(); ++k) {
      cr.push_back(to_json(t.constant[static_cast<size_t>(i)][static_cast<size_t>(k)]));
      Json f = Json::array();
      std::string s;
      const auto& form = t.linear[static_cast<size_t>(i)][static_cast<size_t>(k)];
      for (size_t v = 0; v < form.size(); ++v) {
        f.push_back(to_json(form[v]));
        if (form[v].is_zero()) continue;
        if (!s.empty()) s += "+";
        s += (form[v] == form[v].field().one() ? "" : to_string(form[v]) + "*") + t.vars[v];
      }
      const FqElement& c0 = t.constant[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (!c0.is_zero()) s = to_string(c0) + (s.empty() ? "" : "+" + s);
      lr.push_back(f);
      tr.push_back(s.empty() ? "0" : s);
    }
    c.push_back(cr);
    l.push_back(lr);
    text.push_back(tr);
  }
  return {{"vars", t.vars},          {"constant", c},
          {"linear", l},             {"matrix", text},
          {"constant_is_zero", t.constant_is_zero()},
          {"linear_rank", t.linear_rank()}};
}

// ------------------------------------------------------------ expression parser

namespace {

using IntPoly = std::map<int, mpz_class>;  // F-degree -> coefficient

class ExprParser {
 public:
  ExprParser(std::string text, long p) : s_(std::move(text)), p_(p) {}

  IntPoly parse() {
    IntPoly v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  std::string s_;
  size_t i_ = 0;
  long p_;

  [[noreturn]] void fail(const std::string& what) {
    bad("polynomial expression: " + what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  static IntPoly add(IntPoly a, const IntPoly& b, int sign) {
    for (const auto& [d, c] : b) a[d] += sign * c;
    return a;
  }
  static IntPoly mul(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    for (const auto& [da, ca] : a)
      for (const auto& [db, cb] : b) r[da + db] += ca * cb;
    return r;
  }
  IntPoly expr() {
    int sign = 1;
    if (eat('-')) sign = -1;
    else eat('+');
    IntPoly v = add({}, term(), sign);
    while (true) {
      if (eat('+')) v = add(v, term(), 1);
      else if (eat('-')) v = add(v, term(), -1);
      else return v;
    }
  }
  IntPoly term() {
    IntPoly v = power();
    while (true) {
      skip();
      if (eat('*')) {
        v = mul(v, power());
        continue;
      }
      // Implicit product such as "2F" or "p(1+p)".
      if (i_ < s_.size() && (s_[i_] == '(' || s_[i_] == 'F' || s_[i_] == 'p' ||
                             std::isdigit(static_cast<unsigned char>(s_[i_])))) {
        v = mul(v, power());
        continue;
      }
      return v;
    }
  }
  IntPoly power() {
    IntPoly base = atom();
    if (eat('^')) {
      skip();
      const size_t j = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ == j) fail("exponent must be a nonnegative integer");
      const long e = std::stol(s_.substr(j, i_ - j));
      if (e > 64) fail("exponent too large");
      IntPoly r{{0, 1}};
      for (long k = 0; k < e; ++k) r = mul(r, base);
      return r;
    }
    return base;
  }
  IntPoly atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      IntPoly v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (c == 'F') {
      ++i_;
      return {{1, 1}};
    }
    if (c == 'p') {
      ++i_;
      return {{0, p_}};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const size_t j = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return {{0, mpz_class(s_.substr(j, i_ - j))}};
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

TwistedPoly parse_twisted_poly(const std::string& text, const WittRing& W) {
  IntPoly v = ExprParser(text, W.p()).parse();
  int deg = -1;
  for (const auto& [d, c] : v)
    if (c != 0) deg = std::max(deg, d);
  if (deg < 0) bad("polynomial is zero");
  std::vector<WittElement> coeffs;
  for (int i = 0; i <= deg; ++i) coeffs.push_back(W.from_int(v.count(deg - i) ? v[deg - i] : mpz_class(0)));
  return TwistedPoly::from_witt(coeffs);
}

}  // namespace dieu
