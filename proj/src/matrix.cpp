#include "dieu/matrix.hpp"

#include <algorithm>
#include <utility>

namespace dieu {

WMatrix::WMatrix(WittRing ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::DimensionMismatch, "negative matrix size");
  data_.assign(static_cast<size_t>(rows * cols), ring_.zero());
}

WMatrix WMatrix::identity(const WittRing& ring, int h) {
  WMatrix I(ring, h, h);
  for (int i = 0; i < h; ++i) I.at(i, i) = ring.one();
  return I;
}

WMatrix WMatrix::from_ints(const WittRing& ring, const std::vector<std::vector<long>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  WMatrix M(ring, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix");
    for (int j = 0; j < c; ++j) M.at(i, j) = ring.from_int(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  }
  return M;
}

WMatrix WMatrix::operator*(const WMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
  WMatrix R(ring_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const WittElement& a = at(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) R.at(i, j) += a * o.at(k, j);
    }
  return R;
}

WMatrix WMatrix::operator+(const WMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
  WMatrix R = *this;
  for (size_t i = 0; i < data_.size(); ++i) R.data_[i] += o.data_[i];
  return R;
}

WMatrix WMatrix::operator-(const WMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
  WMatrix R = *this;
  for (size_t i = 0; i < data_.size(); ++i) R.data_[i] -= o.data_[i];
  return R;
}

WMatrix WMatrix::scale(const WittElement& c) const {
  WMatrix R = *this;
  for (auto& x : R.data_) x = c * x;
  return R;
}

WMatrix WMatrix::sigma(int k) const {
  WMatrix R = *this;
  for (auto& x : R.data_) x = x.sigma(k);
  return R;
}

WMatrix WMatrix::transpose() const {
  WMatrix R(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) R.at(j, i) = at(i, j);
  return R;
}

WMatrix WMatrix::embed(const WittRing& target) const {
  WMatrix R(target, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) R.data_[i] = data_[i].embed(target);
  return R;
}

WMatrix WMatrix::with_precision(int n) const {
  WMatrix R(ring_.with_precision(n), rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) R.data_[i] = data_[i].with_precision(n);
  return R;
}

WMatrix WMatrix::block_diag(const WMatrix& o) const {
  if (!(ring_ == o.ring_)) throw Error(ErrorCode::RingMismatch, "block sum over different rings");
  WMatrix R(ring_, rows_ + o.rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) R.at(i, j) = at(i, j);
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) R.at(rows_ + i, cols_ + j) = o.at(i, j);
  return R;
}

WMatrix WMatrix::pow(unsigned long e) const {
  if (rows_ != cols_) throw Error(ErrorCode::DimensionMismatch, "power of a non-square matrix");
  WMatrix r = identity(ring_, rows_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

WMatrix WMatrix::inverse() const {
  if (rows_ != cols_) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const int h = rows_;
  WMatrix a = *this, inv = identity(ring_, h);
  for (int c = 0; c < h; ++c) {
    int piv = -1;
    for (int r = c; r < h; ++r)
      if (a.at(r, c).is_unit()) { piv = r; break; }
    if (piv < 0) throw Error(ErrorCode::NotAUnit, "matrix is not invertible over W_n");
    for (int j = 0; j < h; ++j) {
      std::swap(a.at(c, j), a.at(piv, j));
      std::swap(inv.at(c, j), inv.at(piv, j));
    }
    const WittElement s = a.at(c, c).inverse();
    for (int j = 0; j < h; ++j) {
      a.at(c, j) = s * a.at(c, j);
      inv.at(c, j) = s * inv.at(c, j);
    }
    for (int r = 0; r < h; ++r) {
      if (r == c || a.at(r, c).is_zero()) continue;
      const WittElement f = a.at(r, c);
      for (int j = 0; j < h; ++j) {
        a.at(r, j) -= f * a.at(c, j);
        inv.at(r, j) -= f * inv.at(c, j);
      }
    }
  }
  return inv;
}

std::vector<std::vector<FqElement>> WMatrix::residue() const {
  std::vector<std::vector<FqElement>> out;
  for (int i = 0; i < rows_; ++i) {
    std::vector<FqElement> row;
    for (int j = 0; j < cols_; ++j) row.push_back(at(i, j).residue());
    out.push_back(std::move(row));
  }
  return out;
}

bool WMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const WittElement& x) { return x.is_zero(); });
}

namespace {

// q with q * a == b (mod p^n), given v(b) >= v(a) = v.
WittElement quotient(const WittElement& b, const WittElement& a, int v) {
  const int n = a.ring().n();
  if (v == 0) return b * a.inverse();
  const WittElement bq = b.exact_div_p(v).with_precision(n);
  const WittElement aq = a.exact_div_p(v).with_precision(n);
  return bq * aq.inverse();
}

SmithForm smith_impl(const WMatrix& A, bool track) {
  const WittRing& W = A.ring();
  const int n = W.n();
  const int r = A.rows(), c = A.cols();
  WMatrix M = A;
  WMatrix U = track ? WMatrix::identity(W, r) : WMatrix(W, 0, 0);
  WMatrix V = track ? WMatrix::identity(W, c) : WMatrix(W, 0, 0);
  SmithForm out{U, V, {}, {}};
  const int steps = std::min(r, c);
  for (int t = 0; t < steps; ++t) {
    int bi = -1, bj = -1, bv = n;
    for (int i = t; i < r && bv > 0; ++i)
      for (int j = t; j < c; ++j) {
        const int v = M.at(i, j).valuation();
        if (v < bv) {
          bv = v, bi = i, bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) {
      for (int k = t; k < steps; ++k) {
        out.diag.push_back(W.zero());
        out.vals.push_back(n);
      }
      break;
    }
    if (bi != t) {
      for (int j = 0; j < c; ++j) std::swap(M.at(t, j), M.at(bi, j));
      if (track)
        for (int j = 0; j < r; ++j) std::swap(U.at(t, j), U.at(bi, j));
    }
    if (bj != t) {
      for (int i = 0; i < r; ++i) std::swap(M.at(i, t), M.at(i, bj));
      if (track)
        for (int i = 0; i < c; ++i) std::swap(V.at(i, t), V.at(i, bj));
    }
    const WittElement a = M.at(t, t);
    for (int i = t + 1; i < r; ++i) {
      if (M.at(i, t).is_zero()) continue;
      const WittElement q = quotient(M.at(i, t), a, bv);
      for (int j = t; j < c; ++j) M.at(i, j) -= q * M.at(t, j);
      if (track)
        for (int j = 0; j < r; ++j) U.at(i, j) -= q * U.at(t, j);
    }
    for (int j = t + 1; j < c; ++j) {
      if (M.at(t, j).is_zero()) continue;
      const WittElement q = quotient(M.at(t, j), a, bv);
      for (int i = t; i < r; ++i) M.at(i, j) -= M.at(i, t) * q;
      if (track)
        for (int i = 0; i < c; ++i) V.at(i, j) -= V.at(i, t) * q;
    }
    out.diag.push_back(a);
    out.vals.push_back(bv);
  }
  if (track) {
    out.U = std::move(U);
    out.V = std::move(V);
  }
  return out;
}

}  // namespace

SmithForm smith_form(const WMatrix& A) { return smith_impl(A, true); }

std::vector<int> snf_valuations(const WMatrix& A) { return smith_impl(A, false).vals; }

std::vector<int> snf_valuations_strict(const WMatrix& A) {
  auto v = snf_valuations(A);
  const int n = A.ring().n();
  if (!v.empty() && v.back() >= n)
    throw Error(ErrorCode::InsufficientPrecision,
                "an elementary divisor vanishes modulo p^" + std::to_string(n), n + 1);
  return v;
}

int rank_fq(std::vector<std::vector<FqElement>> rows) {
  if (rows.empty()) return 0;
  const size_t cols = rows[0].size();
  int rank = 0;
  for (size_t c = 0; c < cols && static_cast<size_t>(rank) < rows.size(); ++c) {
    size_t piv = static_cast<size_t>(rank);
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<size_t>(rank)]);
    const auto& pr = rows[static_cast<size_t>(rank)];
    const FqElement inv = pr[c].inverse();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<size_t>(rank) || rows[r][c].is_zero()) continue;
      const FqElement f = rows[r][c] * inv;
      for (size_t j = c; j < cols; ++j) rows[r][j] -= f * pr[j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace dieu
