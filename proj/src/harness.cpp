#include "dieu/harness.hpp"

namespace dieu {

TwistedPoly random_twisted_poly(std::mt19937_64& rng, const WittRing& W, int max_deg, int max_val) {
  std::uniform_int_distribution<int> deg(1, max_deg), val(0, max_val), coin(0, 3);
  const int n = deg(rng);
  auto unit = [&] {
    WittElement u = W.random(rng);
    if (!u.is_unit()) u += W.one();
    return u;
  };
  std::vector<WittElement> c{W.one()};
  for (int i = 1; i <= n; ++i) {
    if (i < n && coin(rng) == 0) {
      c.push_back(W.zero());
      continue;
    }
    WittElement x = unit();
    for (int k = val(rng); k > 0; --k) x = x.scale(W.p());
    c.push_back(x);
  }
  return TwistedPoly::from_witt(c);
}

CrossCheckReport slope_crosscheck(int trials, std::uint64_t seed, int n, const std::vector<int>& primes) {
  std::mt19937_64 rng(seed);
  CrossCheckReport rep;
  SlopeOptions exact;
  exact.lift_exact = true;
  for (int t = 0; t < trials; ++t) {
    const int p = primes[static_cast<size_t>(t) % primes.size()];
    const WittRing W = WittRing::make(make_field(p, 1), n);
    const TwistedPoly P = random_twisted_poly(rng, W);
    rep.polys.push_back(P);
    ++rep.trials;
    try {
      const SlopeSequence np = slopes_by_newton_polygon(P);
      const SlopeSequence mx = slopes_by_matrix(companion_lattice(P), exact);
      const SlopeSequence dc = decompose(P).slopes();
      if (np == mx && np == dc) {
        ++rep.passed;
      } else {
        rep.failures.push_back(P.to_string() + ": NP " + np.to_string() + ", matrix " + mx.to_string() +
                               ", decompose " + dc.to_string());
      }
    } catch (const std::exception& e) {
      rep.failures.push_back(P.to_string() + ": " + e.what());
    }
  }
  return rep;
}

FactorCertReport factor_certificates(const std::vector<TwistedPoly>& polys, int max_degree) {
  FactorCertReport rep;
  for (const auto& P : polys) {
    ++rep.attempted;
    try {
      const FirstSlopeFactor f = first_slope_factor(P, max_degree);
      // Independent re-expansion of Q (F - pi^s) u against the input.
      const RamifiedRing& R = f.Q.ring();
      const int s = static_cast<int>(f.s * (R.r() / f.r));
      const TwistedPoly lin(R, {RamifiedElement::one(R), -RamifiedElement::pi_pow(R, s)});
      const TwistedPoly back = f.Q * lin * TwistedPoly(R, {f.u});
      const TwistedPoly orig = P.extend_ramification(R.r()).embed(R.base());
      if (back.equals(orig) && back.prec() >= orig.prec()) {
        ++rep.certified;
        rep.max_field_degree = std::max(rep.max_field_degree, f.field.m());
      } else {
        ++rep.failed;
        rep.failures.push_back(P.to_string() + ": re-expansion differs");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ExtensionExhausted) {
        ++rep.exhausted;
      } else if (e.code() == ErrorCode::InsufficientPrecision) {
        ++rep.insufficient;
      } else {
        ++rep.failed;
        rep.failures.push_back(P.to_string() + ": " + e.what());
      }
    }
  }
  return rep;
}

}  // namespace dieu
