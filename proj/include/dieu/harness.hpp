#pragma once

// Randomised cross-checks used by the CLI self-check and the acceptance run.

#include "dieu/isocrystal.hpp"

#include <random>
#include <string>
#include <vector>

namespace dieu {

/// Monic integer polynomial of degree 1..max_deg whose nonzero coefficients
/// have valuation <= max_val; the constant term is nonzero.
TwistedPoly random_twisted_poly(std::mt19937_64& rng, const WittRing& W, int max_deg = 5, int max_val = 3);

struct CrossCheckReport {
  int trials = 0;
  int passed = 0;
  std::vector<std::string> failures;
  std::vector<TwistedPoly> polys;  // the inputs, for reuse
};

/// Newton polygon vs slopes_by_matrix on the companion lattice (digits taken
/// as exact) vs decompose().
CrossCheckReport slope_crosscheck(int trials, std::uint64_t seed, int n = 24, const std::vector<int>& primes = {2, 3, 5});

struct FactorCertReport {
  int attempted = 0;
  int certified = 0;   // P = Q (F - p^lambda) u re-expanded exactly
  int exhausted = 0;   // residue field would exceed the degree bound
  int insufficient = 0;  // input too truncated to locate the factor
  int failed = 0;      // any other outcome (a bug)
  int max_field_degree = 1;
  std::vector<std::string> failures;
};

FactorCertReport factor_certificates(const std::vector<TwistedPoly>& polys, int max_degree = 8);

}  // namespace dieu
