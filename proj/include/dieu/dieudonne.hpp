#pragma once

// F-lattices and Dieudonne modules presented by a Frobenius matrix.
//
// Convention: F(e_j) = sum_i A(i, j) e_i and F is sigma-linear, so on
// coordinate columns F(c) = A * sigma(c).  The V-matrix B satisfies
// A * sigma(B) = p * I.

#include "dieu/matrix.hpp"
#include "dieu/rational.hpp"

#include <string>

namespace dieu {

class FLattice {
 public:
  /// Throws InvalidModule when det(A) vanishes at working precision.
  explicit FLattice(WMatrix A);

  const WMatrix& A() const { return A_; }
  const WittRing& ring() const { return A_.ring(); }
  int rank() const { return A_.rows(); }
  int precision() const { return A_.ring().n(); }
  /// Elementary-divisor valuations of A, ascending.
  const std::vector<int>& hodge() const { return hodge_; }

  /// Reinterprets the stored digits at another precision.  Raising the
  /// precision treats the digits as exact, which is only meaningful when the
  /// presentation is known exactly (integer data, standard modules).
  FLattice with_precision(int n) const { return FLattice(A_.with_precision(n)); }

 protected:
  struct Unchecked {};
  FLattice(WMatrix A, Unchecked);
  WMatrix A_;
  std::vector<int> hodge_;
};

class DieudonneModule : public FLattice {
 public:
  /// Requires n >= 2 and every elementary divisor of A of valuation <= 1.
  explicit DieudonneModule(WMatrix A);

  /// V-matrix, known modulo p^(n-1).
  const WMatrix& B() const { return B_; }
  DieudonneModule with_precision(int n) const { return DieudonneModule(A_.with_precision(n)); }

  /// dim_k M/FM and dim_k M/VM.
  int dim_mod_F() const;
  int dim_mod_V() const;

 private:
  WMatrix B_;
};

enum class StdKind { M1, M2, Mab, Mlambda };

/// The standard modules.  M_ab(a, b) = W[F,V]/(F^a - V^b) and M_lambda(s/r)
/// for 0 <= s/r <= 1 use the basis F(e_i) = p^(eps_i) e_{i+1}, indices mod r,
/// with eps_i = floor(i s / r) - floor((i - 1) s / r); this gives
/// F^r = p^s and every elementary divisor at most p.
DieudonneModule std_module(StdKind kind, const WittRing& ring, int a = 0, int b = 0);
DieudonneModule std_module_lambda(const Rational& lambda, const WittRing& ring);

/// The F-lattice Z_p[T]/(T^r - p^s) tensored up: F(e_i) = e_{i+1}, F(e_r) = p^s e_1.
FLattice std_lattice(const Rational& lambda, const WittRing& ring);

/// Same basis pattern as std_module_lambda but with no bound on s/r; used to
/// probe the effectivity boundary.
WMatrix staircase_matrix(const Rational& lambda, const WittRing& ring);

int a_number(const DieudonneModule& M);
DieudonneModule dual(const DieudonneModule& M);
DieudonneModule direct_sum(const DieudonneModule& M, const DieudonneModule& N);
FLattice direct_sum(const FLattice& M, const FLattice& N);
DieudonneModule base_change(const DieudonneModule& M, const FqField& target);
/// Matrix of F in the basis given by the columns of U: U^-1 A sigma(U).
DieudonneModule change_basis(const DieudonneModule& M, const WMatrix& U);
FLattice change_basis(const FLattice& M, const WMatrix& U);

enum class Rank2Class { Ordinary_M1, Supersingular_M2 };
Rank2Class classify_rank2(const DieudonneModule& M);
std::string to_string(Rank2Class c);

/// Random invertible matrix over the ring (product of unit triangular
/// factors and a random permutation).
WMatrix random_invertible(const WittRing& ring, int h, std::mt19937_64& rng);

}  // namespace dieu
