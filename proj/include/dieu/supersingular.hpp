#pragma once

// Supersingular abelian surfaces through minimal isogenies E_0^2 -> X of
// degree p, parametrised by t in P^1.
//
// M_0 = M_2 + M_2 in the basis e_1, e_2, e_3, e_4 with F e_1 = e_2,
// F e_2 = p e_1 (and the same on e_3, e_4).  Then M_0/VM_0 has basis the
// images of e_1, e_3, and t = (a : b) is the line spanned by a e_1 + b e_3.

#include "dieu/dieudonne.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dieu {

/// A point (a : b) of P^1 over a tower field, or the generic point (not
/// defined over F_{p^4}, known only through its classification).
class SurfaceParameter {
 public:
  SurfaceParameter(FqElement a, FqElement b);
  static SurfaceParameter affine(const FqElement& t) { return {t.field().one(), t}; }
  static SurfaceParameter infinity(const FqField& k) { return {k.zero(), k.one()}; }
  static SurfaceParameter generic(int p);

  bool is_generic() const { return !a_.has_value(); }
  int p() const { return p_; }
  const FqElement& a() const { return *a_; }
  const FqElement& b() const { return *b_; }
  /// Degree over F_p of the smallest field of definition; 0 for generic.
  int degree() const;
  /// (1 : b/a), or (0 : 1).
  SurfaceParameter normalized() const;
  bool operator==(const SurfaceParameter& o) const;
  std::string to_string() const;

 private:
  int p_;
  std::optional<FqElement> a_, b_;
};

enum class SurfaceKind { Superspecial, CaseI, CaseII };
std::string to_string(SurfaceKind k);

struct SurfaceClass {
  SurfaceKind kind;
  int lambda_size;
};

SurfaceClass classify_parameter(int p, const SurfaceParameter& t);

struct LatticeChainModule {
  DieudonneModule M0;
  DieudonneModule Mt;
  /// Columns: the basis of M_t in M_0 coordinates.
  WMatrix inclusion;
};

/// Works over W_n(F_{p^M}) with M = lcm(4, degree of t).
LatticeChainModule build_Mt(int p, const SurfaceParameter& t, int n);

struct OrbitInfo {
  int size = 0;
  SurfaceParameter representative;
  /// Every member lies in P^1(F_{p^2}) / every member lies in F_{p^4} \ F_{p^2}.
  bool in_p1_fp2 = false;
  bool in_fp4_minus_fp2 = false;
  /// classify_parameter is constant on the orbit.
  bool class_constant = true;
};

struct MobiusReport {
  int p = 0;
  int group_order = 0;
  int points = 0;
  std::vector<OrbitInfo> orbits;
  bool p1_fp2_single_orbit = false;
  bool fp4_minus_fp2_single_orbit = false;
};

/// GL_2(F_{p^2}) acting on P^1(F_{p^4}), enumerated element by element.
MobiusReport mobius_orbit_check(int p);

struct NormQuotient {
  int unit_group_size = 0;
  std::vector<int> image;  // Nr o det(S^x) inside F_p^x, sorted
  int quotient_size = 0;   // |F_p^x / image|
};

/// S = F_{p^2} I (Case I), a quadratic F_{p^2}-subfield (Case II), or all of
/// Mat_2(F_{p^2}) (superspecial).
NormQuotient norm_quotient(int p, SurfaceKind kind);

struct YLocusEntry {
  SurfaceParameter t;
  SurfaceClass cls;
  int quotient_size;
  bool in_locus;    // from the norm quotient
  bool predicted;   // P^1 for p = 2, P^1(F_{p^4}) otherwise
};

struct YLocusReport {
  int p = 0;
  std::string description;
  std::vector<YLocusEntry> entries;  // all of P^1(F_{p^4}) and the generic point
  bool verified = false;
};

YLocusReport y_locus(int p, bool enumerate = true);

}  // namespace dieu
