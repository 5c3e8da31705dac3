#pragma once

// Truncated Witt vectors W_n(F_{p^m}).
//
// W_n(F_{p^m}) is realised as the unramified extension (Z/p^n)[x]/(g) where g
// is the lift of the field's Conway polynomial whose roots are Teichmueller
// representatives.  The generator x is then itself Teichmueller, so the
// Frobenius is the ring map x -> x^p.  `witt_oracle_check` ties this
// representation back to the Witt-coordinate construction.

#include "dieu/error.hpp"
#include "dieu/fields.hpp"

#include <gmpxx.h>

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace dieu {

class WittElement;

class WittRing {
 public:
  static WittRing make(const FqField& field, int n);

  const FqField& field() const { return impl_->field; }
  int p() const { return impl_->field.p(); }
  int m() const { return impl_->field.m(); }
  int n() const { return impl_->n; }
  const mpz_class& modulus_pn() const { return impl_->pn; }
  /// Teichmueller-rooted monic modulus g, low to high, length m + 1.
  const std::vector<mpz_class>& modulus() const { return impl_->g; }

  WittRing with_precision(int n) const { return make(field(), n); }
  WittRing with_field(const FqField& f) const { return make(f, n()); }

  WittElement zero() const;
  WittElement one() const;
  WittElement gen() const;
  WittElement from_int(const mpz_class& v) const;
  WittElement from_coeffs(std::vector<mpz_class> c) const;
  /// Coefficient-wise lift of a residue (not multiplicative).
  WittElement lift(const FqElement& a) const;
  WittElement teichmuller(const FqElement& a) const;
  WittElement random(std::mt19937_64& rng) const;

  bool operator==(const WittRing& o) const {
    return impl_ == o.impl_ || (n() == o.n() && field() == o.field());
  }

 private:
  struct Impl {
    FqField field;
    int n = 0;
    mpz_class pn;
    std::vector<mpz_class> g;
    // sigma(x)^i for i < m, each of length m
    std::vector<std::vector<mpz_class>> sigma_powers;
  };
  explicit WittRing(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  friend class WittElement;
};

class WittElement {
 public:
  WittElement(WittRing ring, std::vector<mpz_class> coeffs);

  const WittRing& ring() const { return ring_; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  int p() const { return ring_.p(); }

  bool is_zero() const;
  /// p-adic valuation; n() stands for "zero at this precision".
  int valuation() const;
  bool is_unit() const { return valuation() == 0; }
  FqElement residue() const;

  WittElement operator+(const WittElement& o) const;
  WittElement operator-(const WittElement& o) const;
  WittElement operator-() const;
  WittElement operator*(const WittElement& o) const;
  WittElement& operator+=(const WittElement& o) { return *this = *this + o; }
  WittElement& operator-=(const WittElement& o) { return *this = *this - o; }
  WittElement& operator*=(const WittElement& o) { return *this = *this * o; }
  WittElement scale(const mpz_class& k) const;
  WittElement pow(const mpz_class& e) const;
  /// Throws NotAUnit unless valuation() == 0.
  WittElement inverse() const;
  /// sigma^k; negative k allowed.
  WittElement sigma(int k = 1) const;

  /// x / p^k in W_{n-k}; throws NotAUnit when v(x) < k.
  WittElement exact_div_p(int k = 1) const;
  /// Reinterpret the stored coefficients in a ring of the same field and a
  /// different precision (truncation if smaller, exact digit transport if
  /// larger).
  WittElement with_precision(int n) const;
  /// Image under W(F_{p^d}) -> W(F_{p^M}); throws NoEmbedding.
  WittElement embed(const WittRing& target) const;

  bool operator==(const WittElement& o) const { return ring_ == o.ring_ && c_ == o.c_; }

 private:
  WittRing ring_;
  std::vector<mpz_class> c_;
};

int padic_valuation(const mpz_class& v, int p, int cap);
mpz_class mod_pn(const mpz_class& v, const mpz_class& pn);

// ----------------------------------------------------------- ramified ring

/// W_n[pi] with pi^r = p.  Elements are sum_{i<r} digit_i pi^i and carry an
/// absolute pi-adic precision, at most n*r, which every operation propagates.
class RamifiedRing {
 public:
  RamifiedRing(WittRing base, int r);

  const WittRing& base() const { return base_; }
  int r() const { return r_; }
  int p() const { return base_.p(); }
  /// Maximal pi-adic precision n*r.
  int cap() const { return base_.n() * r_; }

  bool operator==(const RamifiedRing& o) const { return r_ == o.r_ && base_ == o.base_; }

 private:
  WittRing base_;
  int r_;
};

class RamifiedElement {
 public:
  RamifiedElement(RamifiedRing ring, std::vector<WittElement> digits, int prec);
  RamifiedElement(RamifiedRing ring, std::vector<WittElement> digits);

  static RamifiedElement zero(const RamifiedRing& ring);
  static RamifiedElement one(const RamifiedRing& ring);
  static RamifiedElement pi_pow(const RamifiedRing& ring, int k);
  static RamifiedElement from_witt(const RamifiedRing& ring, const WittElement& x);

  const RamifiedRing& ring() const { return ring_; }
  const std::vector<WittElement>& digits() const { return d_; }
  int prec() const { return prec_; }

  /// pi-adic valuation, equal to prec() when the element is zero to its precision.
  int valuation() const;
  bool is_zero() const { return valuation() >= prec_; }
  bool is_unit() const { return valuation() == 0 && prec_ > 0; }
  FqElement residue() const;

  RamifiedElement operator+(const RamifiedElement& o) const;
  RamifiedElement operator-(const RamifiedElement& o) const;
  RamifiedElement operator-() const;
  RamifiedElement operator*(const RamifiedElement& o) const;
  RamifiedElement& operator+=(const RamifiedElement& o) { return *this = *this + o; }
  RamifiedElement& operator-=(const RamifiedElement& o) { return *this = *this - o; }
  RamifiedElement& operator*=(const RamifiedElement& o) { return *this = *this * o; }
  RamifiedElement inverse() const;
  RamifiedElement sigma(int k = 1) const;
  /// x / pi^k; throws NotAUnit when valuation() < k.  Precision drops by k.
  RamifiedElement div_pi_pow(int k) const;
  RamifiedElement mul_pi_pow(int k) const;
  RamifiedElement with_prec(int prec) const;
  /// Zeroes the digits that lie beyond prec().
  RamifiedElement truncated() const;
  /// The known digits over W_n' for another n'.  Raising n treats them as
  /// exact (prec becomes n' * r); lowering n truncates.
  RamifiedElement with_base_precision(int n) const;
  /// Into W[pi'] with pi = pi'^(r'/r); precision scales with r'/r.
  RamifiedElement extend_ramification(int new_r) const;
  /// Residue-field change along the tower (digit-wise embed).
  RamifiedElement embed(const WittRing& target_base) const;

  /// Equality up to the smaller of the two precisions.
  bool equals(const RamifiedElement& o) const;

 private:
  RamifiedRing ring_;
  std::vector<WittElement> d_;
  int prec_;
};

// ----------------------------------------------------------- Witt oracle

struct WittOracleReport {
  bool pass = true;
  int trials = 0;
  std::string counterexample;
};

/// Compares ring_ops on W_n(F_p) with sums and products computed from the
/// universal Witt polynomials, evaluated over Z on integer lifts of Witt
/// coordinates through ghost components.  Requires p <= 7 and n <= 4.
WittOracleReport witt_oracle_check(int p, int n, int trials, std::uint64_t seed = 1);

/// Witt coordinates (a_0, ..., a_{n-1}) over F_p -> element of Z/p^n, i.e.
/// sum_i p^i * teichmuller(a_i).
mpz_class witt_coordinates_to_int(const std::vector<int>& a, int p, int n);

}  // namespace dieu
