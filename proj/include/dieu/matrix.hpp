#pragma once

// Dense matrices over W_n(F_{p^m}) and Smith normal form over that chain ring.

#include "dieu/witt.hpp"

#include <vector>

namespace dieu {

class WMatrix {
 public:
  WMatrix(WittRing ring, int rows, int cols);
  static WMatrix identity(const WittRing& ring, int h);
  static WMatrix from_ints(const WittRing& ring, const std::vector<std::vector<long>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const WittRing& ring() const { return ring_; }

  WittElement& at(int i, int j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  const WittElement& at(int i, int j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

  WMatrix operator*(const WMatrix& o) const;
  WMatrix operator+(const WMatrix& o) const;
  WMatrix operator-(const WMatrix& o) const;
  WMatrix scale(const WittElement& c) const;
  /// Entry-wise sigma^k.
  WMatrix sigma(int k = 1) const;
  WMatrix transpose() const;
  WMatrix embed(const WittRing& target) const;
  WMatrix with_precision(int n) const;
  WMatrix block_diag(const WMatrix& o) const;
  WMatrix pow(unsigned long e) const;
  /// Gaussian elimination with unit pivots; throws NotAUnit if singular mod p.
  WMatrix inverse() const;
  std::vector<std::vector<FqElement>> residue() const;
  bool is_zero() const;

  bool operator==(const WMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ring_ == o.ring_ && data_ == o.data_;
  }

 private:
  WittRing ring_;
  int rows_, cols_;
  std::vector<WittElement> data_;
};

/// U * A * V = diag, U and V invertible.  `vals` is ascending; an entry equal to
/// n means the pivot is zero modulo p^n, so its true valuation is unknown.
struct SmithForm {
  WMatrix U, V;
  std::vector<WittElement> diag;
  std::vector<int> vals;
};

SmithForm smith_form(const WMatrix& A);
std::vector<int> snf_valuations(const WMatrix& A);
/// As snf_valuations but throws InsufficientPrecision when a valuation is
/// indistinguishable from infinity.
std::vector<int> snf_valuations_strict(const WMatrix& A);

/// Rank over F_q of a matrix of residues.
int rank_fq(std::vector<std::vector<FqElement>> rows);

}  // namespace dieu
