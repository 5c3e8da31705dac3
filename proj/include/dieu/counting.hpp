#pragma once

// Supersingular elliptic curves over F_{p^2}: census, mass and class number
// formulas.

#include "dieu/fields.hpp"
#include "dieu/rational.hpp"

#include <string>
#include <vector>

namespace dieu {

struct SupersingularCensus {
  int p = 0;
  std::vector<FqElement> j_invariants;  // sorted by element index
  std::vector<int> aut_orders;          // parallel to j_invariants
  int count = 0;
  Rational mass;                        // sum of 1/|Aut|
  int curves_checked = 0;
  /// Hasse invariant and point count over F_{p^2} agreed on every curve.
  bool criteria_agree = true;
};

/// 2 <= p <= 101.  For p >= 5 one curve per j; for p = 2, 3 every long
/// Weierstrass equation over F_{p^2}.
SupersingularCensus enumerate_supersingular(int p);

int legendre(long a, int p);

/// The displayed formula (p-1)/2 + (1 - (-3/p))/3 + (1 - (-4/p))/3, p odd.
Rational eichler_formula_as_printed(int p);
/// (p-1)/12 + (1 - (-4/p))/4 + (1 - (-3/p))/3, p odd.
Rational eichler_formula_classical(int p);

struct MassReport {
  bool ok = false;
  Rational mass, expected;
};
MassReport mass_check(const SupersingularCensus& c);

struct FormulaComparison {
  int p = 0;
  int count = 0;
  Rational printed, classical;
  bool printed_matches = false, classical_matches = false, printed_integral = false;
};
FormulaComparison compare_formulas(const SupersingularCensus& c);

}  // namespace dieu
