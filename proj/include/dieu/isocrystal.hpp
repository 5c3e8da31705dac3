#pragma once

// Slopes, twisted polynomials and the slope decomposition.

#include "dieu/dieudonne.hpp"
#include "dieu/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dieu {

/// Multiset of slopes stored as ascending (lambda, count) pairs.  `count` is
/// the number of times lambda occurs among the h Newton slopes, so the counts
/// sum to the rank.
class SlopeSequence {
 public:
  SlopeSequence() = default;
  explicit SlopeSequence(std::vector<Rational> slopes);

  const std::vector<std::pair<Rational, int>>& entries() const { return entries_; }
  std::vector<Rational> expanded() const;
  int total() const;
  SlopeSequence dual() const;  // lambda -> 1 - lambda
  bool operator==(const SlopeSequence& o) const { return entries_ == o.entries_; }
  std::string to_string() const;

 private:
  std::vector<std::pair<Rational, int>> entries_;
};

/// P = sum_i a_i F^(n-i) in W[pi][F] with F c = sigma(c) F and sigma(pi) = pi.
/// coeffs()[0] is the leading coefficient.
class TwistedPoly {
 public:
  TwistedPoly(RamifiedRing ring, std::vector<RamifiedElement> coeffs);
  static TwistedPoly from_witt(const std::vector<WittElement>& coeffs);
  static TwistedPoly from_ints(const WittRing& ring, const std::vector<long>& coeffs);

  const RamifiedRing& ring() const { return ring_; }
  const std::vector<RamifiedElement>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_monic() const;
  /// Smallest coefficient precision, in pi-units.
  int prec() const;

  TwistedPoly operator*(const TwistedPoly& o) const;
  TwistedPoly extend_ramification(int new_r) const;
  TwistedPoly embed(const WittRing& base) const;
  TwistedPoly with_prec(int prec) const;
  /// Coefficient-wise equality up to the smaller precision.
  bool equals(const TwistedPoly& o) const;
  std::string to_string() const;

 private:
  RamifiedRing ring_;
  std::vector<RamifiedElement> c_;
};

struct SlopeOptions {
  /// Treat the stored digits as exact and lift the presentation as far as the
  /// computation needs.  Off by default: then too little precision raises
  /// InsufficientPrecision carrying the precision that would be needed.
  bool lift_exact = false;
  /// Largest e tried in K = lcm(1..h) * m * p^e.
  int max_rounds = 6;
};

SlopeSequence slopes_by_matrix(const FLattice& M, const SlopeOptions& opt = {});
SlopeSequence slopes_by_newton_polygon(const TwistedPoly& P);

/// Vertices of the lower convex hull of (i, v(a_i)), v in pi-units.
std::vector<std::pair<int, int>> newton_polygon(const TwistedPoly& P);

struct SigmaSolution {
  WittElement x;
  FqField field;
  /// x satisfies the equation modulo p^precision.
  int precision;
};

/// Solves p^beta sigma^alpha(x) - x = b.
SigmaSolution sigma_linear_solve(int beta, int alpha, const WittElement& b, int max_degree = 8);

struct FirstSlopeFactor {
  TwistedPoly Q;
  int s = 0, r = 1;
  RamifiedElement u;
  FqField field;
  int precision = 0;  // pi-adic precision of the certified identity
};

/// P = Q (F - p^(s/r)) u with u a unit, found by successive approximation.
/// Throws ExtensionExhausted when the unit needs a residue field beyond
/// max_degree.
FirstSlopeFactor first_slope_factor(const TwistedPoly& P, int max_degree = 8);

struct SlopeFactor {
  TwistedPoly Q;  // left factor, slopes > lambda
  TwistedPoly R;  // right factor, monic, pure slope lambda
  Rational lambda;
};

/// P = Q R with R the part of P of smallest slope.  Extension free.
SlopeFactor slope_factor(const TwistedPoly& P);

struct IsocrystalDecomposition {
  std::vector<std::pair<Rational, int>> summands;  // (lambda, m_lambda)
  std::vector<TwistedPoly> factors;                // P = ... * factors[1] * factors[0]
  std::vector<FirstSlopeFactor> peeled;            // linear factors, if requested and found
  std::optional<std::string> peel_stopped;         // why peeling stopped early
  SlopeSequence slopes() const;
};

struct DecomposeOptions {
  bool peel_linear = false;
  int max_degree = 8;
};

IsocrystalDecomposition decompose(const TwistedPoly& P, const DecomposeOptions& opt = {});

Rational end_algebra_invariant(const Rational& lambda);

/// F-lattice W[F]/W[F]P in the basis 1, F, ..., F^(n-1).  P must be monic
/// and unramified.
FLattice companion_lattice(const TwistedPoly& P);

/// Smallest valuation among solutions X of X A = A2 sigma(X) (A: h x h,
/// A2: h2 x h2), i.e. every intertwiner mod p^n is 0 mod p^result.  Equals n
/// when none survives at all; when the isocrystals have no common slope,
/// n - result stays bounded as n grows.
int intertwiner_min_valuation(const WMatrix& A, const WMatrix& A2);

/// a(M) = h/2 with h even and every slope 1/2.
bool is_superspecial(const DieudonneModule& M);

}  // namespace dieu
