#include "dieu/supersingular.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace dieu {

namespace {

FqField field_of_degree(int p, int m) {
  if (!FieldTable::builtin().contains(p, m))
    throw Error(ErrorCode::UnsupportedField, "F_" + std::to_string(p) + "^" + std::to_string(m) + " is not in the table");
  return make_field(p, m);
}

}  // namespace

// ------------------------------------------------------------ parameters

SurfaceParameter::SurfaceParameter(FqElement a, FqElement b) : p_(a.field().p()) {
  const FqField k = common_field(a.field(), b.field());
  a = embed(a, k);
  b = embed(b, k);
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::OutOfRange, "(0 : 0) is not a point of P^1");
  a_ = std::move(a);
  b_ = std::move(b);
}

SurfaceParameter SurfaceParameter::generic(int p) {
  const FqField k = make_field(p, 1);
  SurfaceParameter t(k.one(), k.zero());
  t.a_.reset();
  t.b_.reset();
  return t;
}

int SurfaceParameter::degree() const {
  if (is_generic()) return 0;
  if (a_->is_zero()) return 1;
  return (*b_ / *a_).degree();
}

SurfaceParameter SurfaceParameter::normalized() const {
  if (is_generic()) return *this;
  if (a_->is_zero()) return infinity(a_->field());
  return affine(*b_ / *a_);
}

bool SurfaceParameter::operator==(const SurfaceParameter& o) const {
  if (is_generic() || o.is_generic()) return is_generic() == o.is_generic() && p_ == o.p_;
  const FqField k = common_field(a_->field(), o.a_->field());
  return embed(*a_, k) * embed(*o.b_, k) == embed(*b_, k) * embed(*o.a_, k);
}

std::string SurfaceParameter::to_string() const {
  if (is_generic()) return "generic";
  return "(" + dieu::to_string(*a_) + ":" + dieu::to_string(*b_) + ")";
}

std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Superspecial: return "Superspecial";
    case SurfaceKind::CaseI: return "CaseI";
    case SurfaceKind::CaseII: return "CaseII";
  }
  return "?";
}

SurfaceClass classify_parameter(int p, const SurfaceParameter& t) {
  const int d = t.degree();
  if (d != 0 && 2 % d == 0) return {SurfaceKind::Superspecial, 1};
  if (d != 0 && 4 % d == 0) return {SurfaceKind::CaseII, 1};
  return {SurfaceKind::CaseI, p == 2 ? 1 : 2};
}

// ------------------------------------------------------------ lattices

LatticeChainModule build_Mt(int p, const SurfaceParameter& t, int n) {
  if (t.is_generic()) throw Error(ErrorCode::UnsupportedField, "the generic point has no lattice");
  if (t.p() != p) throw Error(ErrorCode::UnsupportedField, "parameter lives in the wrong characteristic");
  if (n < 2) throw Error(ErrorCode::InsufficientPrecision, "lattice construction needs n >= 2", 2);
  const int M = std::lcm(4, t.a().field().m());
  const FqField k = field_of_degree(p, M);
  const FqElement a = embed(t.a(), k), b = embed(t.b(), k);

  // One extra digit so that the row divided by p is still known mod p^n.
  const WittRing W1 = WittRing::make(k, n + 1);
  const WMatrix A0 = WMatrix::from_ints(W1, {{0, p, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, p}, {0, 0, 1, 0}});
  // Basis of M_t: x_t, e_2, e_4 and p times whichever of e_1, e_3 is not
  // already reached.  P is U with that p removed, so U = P diag(.., p, ..).
  const bool a_unit = !a.is_zero();
  const int scaled = a_unit ? 2 : 0;
  WMatrix P(W1, 4, 4);
  const int xcol = a_unit ? 0 : 2;
  P.at(0, xcol) = W1.teichmuller(a);
  P.at(2, xcol) = W1.teichmuller(b);
  P.at(1, 1) = W1.one();
  P.at(3, 3) = W1.one();
  P.at(scaled, scaled) = W1.one();
  WMatrix U = P;
  for (int i = 0; i < 4; ++i) U.at(i, scaled) = U.at(i, scaled).scale(p);

  // U^-1 A0 sigma(U) = diag(.., 1/p, ..) P^-1 A0 sigma(U); F and V stability
  // of M_t is exactly the divisibility of that row.
  const WMatrix X = P.inverse() * A0 * U.sigma(1);
  const WittRing W = WittRing::make(k, n);
  WMatrix At(W, 4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const WittElement& x = X.at(i, j);
      if (i != scaled) {
        At.at(i, j) = x.with_precision(n);
      } else {
        if (x.valuation() < 1) throw Error(ErrorCode::OracleMismatch, "M_t is not F-stable");
        At.at(i, j) = x.exact_div_p(1);
      }
    }
  return {DieudonneModule(A0.with_precision(n)), DieudonneModule(At), U.with_precision(n)};
}

// ------------------------------------------------------------ Moebius orbits

namespace {

// Points of P^1(F_q) as indices: element index for (1 : u), q for (0 : 1).
struct P1 {
  FqField k;
  std::vector<FqElement> els;
  std::uint64_t q;
  explicit P1(const FqField& f) : k(f), els(f.elements()), q(f.size()) {}
  SurfaceParameter point(std::uint64_t i) const {
    return i == q ? SurfaceParameter::infinity(k) : SurfaceParameter::affine(els[i]);
  }
  // (a t + b) / (c t + d) on (1 : u) means (c u + d : a u + b).
  std::uint64_t act(const FqElement& a, const FqElement& b, const FqElement& c, const FqElement& d,
                    std::uint64_t i) const {
    FqElement num = a, den = c;
    if (i != q) {
      num = a * els[i] + b;
      den = c * els[i] + d;
    }
    if (den.is_zero()) return q;
    return (num / den).index();
  }
};

}  // namespace

MobiusReport mobius_orbit_check(int p) {
  const FqField k4 = field_of_degree(p, 4);
  const FqField k2 = field_of_degree(p, 2);
  P1 P(k4);
  std::vector<FqElement> small;
  for (const auto& x : k2.elements()) small.push_back(embed(x, k4));
  struct G {
    FqElement a, b, c, d;
  };
  std::vector<G> group;
  for (const auto& a : small)
    for (const auto& b : small)
      for (const auto& c : small)
        for (const auto& d : small)
          if (!(a * d - b * c).is_zero()) group.push_back({a, b, c, d});

  MobiusReport rep;
  rep.p = p;
  rep.group_order = static_cast<int>(group.size());
  rep.points = static_cast<int>(P.q + 1);
  std::vector<int> orbit_of(P.q + 1, -1);
  for (std::uint64_t start = 0; start <= P.q; ++start) {
    if (orbit_of[start] >= 0) continue;
    const int id = static_cast<int>(rep.orbits.size());
    std::set<std::uint64_t> members;
    for (const auto& g : group) members.insert(P.act(g.a, g.b, g.c, g.d, start));
    const SurfaceParameter rep_t = P.point(start);
    OrbitInfo info{static_cast<int>(members.size()), rep_t, true, true, true};
    const SurfaceKind k0 = classify_parameter(p, rep_t).kind;
    for (auto i : members) {
      orbit_of[i] = id;
      const SurfaceParameter t = P.point(i);
      const int d = t.degree();
      info.in_p1_fp2 = info.in_p1_fp2 && 2 % d == 0;
      info.in_fp4_minus_fp2 = info.in_fp4_minus_fp2 && i != P.q && 2 % d != 0;
      info.class_constant = info.class_constant && classify_parameter(p, t).kind == k0;
    }
    rep.orbits.push_back(std::move(info));
  }
  const long n_fp2 = static_cast<long>(k2.size()) + 1;
  const long n_case2 = static_cast<long>(k4.size() - k2.size());
  for (const auto& o : rep.orbits) {
    if (o.in_p1_fp2 && o.size == n_fp2) rep.p1_fp2_single_orbit = true;
    if (o.in_fp4_minus_fp2 && o.size == n_case2) rep.fp4_minus_fp2_single_orbit = true;
  }
  return rep;
}

// ------------------------------------------------------------ norm quotients

NormQuotient norm_quotient(int p, SurfaceKind kind) {
  const FqField k2 = field_of_degree(p, 2);
  const FqField k1 = make_field(p, 1);
  const auto els = k2.elements();
  auto nr = [&](const FqElement& z) { return restrict_to(z.pow(static_cast<std::uint64_t>(p) + 1), k1); };
  std::set<int> image;
  int units = 0;
  auto add = [&](const FqElement& det) {
    if (det.is_zero()) return;
    ++units;
    image.insert(static_cast<int>(nr(det).index()));
  };
  switch (kind) {
    case SurfaceKind::CaseI:
      for (const auto& x : els) add(x * x);
      break;
    case SurfaceKind::CaseII: {
      // F_{p^2}[C] with C the companion matrix of the minimal polynomial of
      // a generator of F_{p^4} over F_{p^2}: X^2 - s X + n.
      const FqField k4 = field_of_degree(p, 4);
      const FqElement t = k4.gen();
      const FqElement tq = t.frobenius(2);
      const FqElement s = restrict_to(t + tq, k2), nn = restrict_to(t * tq, k2);
      // det(x I + y C) with C = [[0, -n], [1, s]].
      for (const auto& x : els)
        for (const auto& y : els) add(x * (x + y * s) + y * y * nn);
      break;
    }
    case SurfaceKind::Superspecial:
      for (const auto& a : els)
        for (const auto& b : els)
          for (const auto& c : els)
            for (const auto& d : els) add(a * d - b * c);
      break;
  }
  NormQuotient out;
  out.unit_group_size = units;
  out.image.assign(image.begin(), image.end());
  out.quotient_size = (p - 1) / static_cast<int>(image.size());
  return out;
}

// ------------------------------------------------------------ the Y locus

YLocusReport y_locus(int p, bool enumerate) {
  YLocusReport rep;
  rep.p = p;
  rep.description = p == 2 ? "P1" : "P1(F_" + std::to_string(p) + "^4)";
  std::map<SurfaceKind, int> q;
  for (auto k : {SurfaceKind::Superspecial, SurfaceKind::CaseI, SurfaceKind::CaseII})
    q[k] = norm_quotient(p, k).quotient_size;
  auto entry = [&](const SurfaceParameter& t) {
    const SurfaceClass c = classify_parameter(p, t);
    const bool in = q[c.kind] == 1;
    const bool predicted = p == 2 || !t.is_generic();
    rep.entries.push_back({t, c, q[c.kind], in, predicted});
  };
  if (enumerate) {
    P1 P(field_of_degree(p, 4));
    for (std::uint64_t i = 0; i <= P.q; ++i) entry(P.point(i));
  }
  entry(SurfaceParameter::generic(p));
  rep.verified = std::all_of(rep.entries.begin(), rep.entries.end(), [](const YLocusEntry& e) {
    return e.in_locus == e.predicted && e.quotient_size == e.cls.lambda_size;
  });
  return rep;
}

}  // namespace dieu
