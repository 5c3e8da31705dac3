#pragma once

// Finite fields F_{p^m} in a pinned tower.  Each field is F_p[x]/(f) for the
// Conway polynomial f of the pair (p, m); the root x of f is "the generator".
// Conway polynomials are norm-compatible, so F_{p^d} embeds into F_{p^m}
// (d | m) by sending its generator to gen^((p^m - 1)/(p^d - 1)), and these
// embeddings compose.

#include "dieu/error.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dieu {

/// Moduli of the pinned tower, keyed by (p, m).  Each modulus is monic and
/// stored low-to-high, length m + 1.
class FieldTable {
 public:
  static constexpr int kVersion = 1;

  FieldTable() = default;
  explicit FieldTable(std::map<std::pair<int, int>, std::vector<int>> moduli);

  /// The table compiled into the library (p <= 31, m <= 8).
  static const FieldTable& builtin();

  /// Search for Conway polynomials from scratch.  Slow for large p^m; used to
  /// regenerate and to cross-check the shipped table.
  static FieldTable compute(int max_p, int max_m);

  /// Reads the JSON table format.  Every modulus is re-validated (monic,
  /// irreducible, primitive, norm-compatible with its subfields).
  static FieldTable load(const std::string& path);
  static FieldTable from_json_text(const std::string& text);
  std::string to_json_text() const;

  bool contains(int p, int m) const;
  const std::vector<int>& modulus(int p, int m) const;
  /// Largest m with (p, m) present; 0 if p is absent.
  int max_degree(int p) const;
  const std::map<std::pair<int, int>, std::vector<int>>& entries() const { return moduli_; }

  /// Throws UnsupportedField describing the first defect found.
  void validate() const;

 private:
  std::map<std::pair<int, int>, std::vector<int>> moduli_;
};

class FqElement;

/// Shareable immutable handle to F_{p^m}.
class FqField {
 public:
  int p() const { return impl_->p; }
  int m() const { return impl_->m; }
  std::uint64_t size() const { return impl_->size; }
  const std::vector<int>& modulus() const { return impl_->modulus; }
  const FieldTable& table() const { return *impl_->table; }

  FqElement zero() const;
  FqElement one() const;
  FqElement gen() const;
  FqElement from_int(std::int64_t v) const;
  FqElement from_coeffs(std::vector<int> coeffs) const;
  /// Enumeration order: index = sum coeffs[i] * p^i.
  FqElement element(std::uint64_t index) const;
  std::vector<FqElement> elements() const;

  /// F_{p^M} from the same table (keeps the table alive if this field owns it).
  FqField with_degree(int M) const;

  /// Image of the generator of F_{p^d} for d | m.
  const std::vector<int>& subfield_generator(int d) const;

  bool operator==(const FqField& other) const {
    return impl_ == other.impl_ || (p() == other.p() && m() == other.m() &&
                                    modulus() == other.modulus());
  }

 private:
  struct Impl {
    int p = 0;
    int m = 0;
    std::uint64_t size = 0;
    std::vector<int> modulus;
    std::map<int, std::vector<int>> sub_generators;
    const FieldTable* table = nullptr;
    std::shared_ptr<const FieldTable> owned_table;
  };
  explicit FqField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend FqField make_field(int p, int m, const FieldTable& table);
  friend FqField make_field(int p, int m, std::shared_ptr<const FieldTable> table);
};

FqField make_field(int p, int m, const FieldTable& table = FieldTable::builtin());
FqField make_field(int p, int m, std::shared_ptr<const FieldTable> table);

class FqElement {
 public:
  FqElement(FqField field, std::vector<int> coeffs);

  const FqField& field() const { return field_; }
  const std::vector<int>& coeffs() const { return coeffs_; }
  int p() const { return field_.p(); }

  bool is_zero() const;
  bool is_one() const;
  std::uint64_t index() const;

  FqElement operator+(const FqElement& o) const;
  FqElement operator-(const FqElement& o) const;
  FqElement operator-() const;
  FqElement operator*(const FqElement& o) const;
  FqElement& operator+=(const FqElement& o) { return *this = *this + o; }
  FqElement& operator-=(const FqElement& o) { return *this = *this - o; }
  FqElement& operator*=(const FqElement& o) { return *this = *this * o; }
  FqElement inverse() const;
  FqElement operator/(const FqElement& o) const { return *this * o.inverse(); }
  FqElement pow(std::uint64_t e) const;
  /// a -> a^(p^k); negative k allowed.
  FqElement frobenius(int k = 1) const;
  /// Smallest d | m with this element in F_{p^d} (as embedded).
  int degree() const;

  bool operator==(const FqElement& o) const {
    return field_ == o.field_ && coeffs_ == o.coeffs_;
  }
  bool operator<(const FqElement& o) const { return index() < o.index(); }

 private:
  FqField field_;
  std::vector<int> coeffs_;
};

/// Ring embedding F_{p^d} -> F_{p^m}; throws NoEmbedding unless d | m.
FqElement embed(const FqElement& x, const FqField& target);
/// Inverse of embed on its image; throws NoEmbedding if x is not in the subfield.
FqElement restrict_to(const FqElement& x, const FqField& sub);

/// Multiplicative order of a nonzero element.
std::uint64_t multiplicative_order(const FqElement& x);

struct AdditiveSolution {
  FqElement x;
  FqField field;
};

/// Solves sum_i coeffs[i] * x^(p^(n-i)) + rhs = 0 with n = coeffs.size() - 1,
/// enlarging F_{p^m} along the tower until the F_p-affine system is
/// consistent.  Coefficients and rhs may live in different tower fields.
AdditiveSolution solve_additive(std::span<const FqElement> coeffs, const FqElement& rhs,
                                int max_degree = 8);

/// A nonzero root of the additive polynomial sum_i coeffs[i] x^(p^(n-i)).
AdditiveSolution additive_kernel_element(std::span<const FqElement> coeffs,
                                         int max_degree = 8);

/// Evaluates sum_i coeffs[i] * x^(p^(n-i)) in the field of x.
FqElement eval_additive(std::span<const FqElement> coeffs, const FqElement& x);

/// Polynomial in the field generator g, highest power first ("g^2+2*g+1");
/// elements of F_p print as integers.
std::string to_string(const FqElement& x);
/// Inverse of to_string; also accepts "-", spaces and "g" without exponent.
/// Throws ParseError.
FqElement parse_fq(const std::string& text, const FqField& k);

/// Smallest tower field containing both arguments' fields.
FqField common_field(const FqField& a, const FqField& b);

namespace detail {
bool is_prime(std::int64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::uint64_t ipow(std::uint64_t b, int e);
}  // namespace detail

}  // namespace dieu
