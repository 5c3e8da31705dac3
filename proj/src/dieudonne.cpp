#include "dieu/dieudonne.hpp"

#include <algorithm>
#include <numeric>

namespace dieu {

namespace {

WittElement p_pow(const WittRing& W, long e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(W.p()), static_cast<unsigned long>(e));
  return W.from_int(v);
}

void require_square(const WMatrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "Frobenius matrix must be square and nonempty");
}

}  // namespace

FLattice::FLattice(WMatrix A, Unchecked) : A_(std::move(A)) {
  require_square(A_);
  hodge_ = snf_valuations(A_);
}

FLattice::FLattice(WMatrix A) : FLattice(std::move(A), Unchecked{}) {
  if (hodge_.back() >= precision())
    throw Error(ErrorCode::InvalidModule,
                "det(A) vanishes modulo p^" + std::to_string(precision()));
}

DieudonneModule::DieudonneModule(WMatrix A) : FLattice(std::move(A), Unchecked{}), B_(ring(), 0, 0) {
  const int n = precision();
  if (n < 2) throw Error(ErrorCode::InsufficientPrecision, "Dieudonne validity needs n >= 2", 2);
  if (hodge_.back() > 1)
    throw Error(ErrorCode::InvalidModule, "pM is not contained in FM (elementary divisor beyond p)");

  // A = U^-1 D V^-1, so p A^-1 = V (p D^-1) U and B = sigma^-1(p A^-1).
  const SmithForm S = smith_form(A_);
  const int h = rank();
  const WittRing& W = ring();
  WMatrix pDinv(W, h, h);
  for (int t = 0; t < h; ++t) {
    const WittElement& d = S.diag[static_cast<size_t>(t)];
    pDinv.at(t, t) = S.vals[static_cast<size_t>(t)] == 0
                         ? d.inverse().scale(W.p())
                         : d.exact_div_p(1).with_precision(n).inverse();
  }
  B_ = (S.V * pDinv * S.U).sigma(-1).with_precision(n - 1);
}

int DieudonneModule::dim_mod_F() const {
  return static_cast<int>(std::count(hodge_.begin(), hodge_.end(), 1));
}

int DieudonneModule::dim_mod_V() const {
  const auto v = snf_valuations(B_);
  return static_cast<int>(std::count_if(v.begin(), v.end(), [](int x) { return x >= 1; }));
}

WMatrix staircase_matrix(const Rational& lambda, const WittRing& ring) {
  if (lambda < 0) throw Error(ErrorCode::InvalidSlopeData, "negative slope");
  const long s = lambda.numerator(), r = lambda.denominator();
  WMatrix A(ring, static_cast<int>(r), static_cast<int>(r));
  for (long i = 1; i <= r; ++i) {
    const long eps = (i * s) / r - ((i - 1) * s) / r;
    A.at(static_cast<int>(i % r), static_cast<int>(i - 1)) = p_pow(ring, eps);
  }
  return A;
}

DieudonneModule std_module_lambda(const Rational& lambda, const WittRing& ring) {
  if (lambda < 0 || lambda > 1)
    throw Error(ErrorCode::InvalidSlopeData,
                "slope " + to_string(lambda) + " is not in [0, 1]; use std_lattice");
  return DieudonneModule(staircase_matrix(lambda, ring));
}

DieudonneModule std_module(StdKind kind, const WittRing& ring, int a, int b) {
  switch (kind) {
    case StdKind::M1:
      return DieudonneModule(WMatrix::from_ints(ring, {{1, 0}, {0, ring.p()}}));
    case StdKind::M2:
      return DieudonneModule(WMatrix::from_ints(ring, {{0, ring.p()}, {1, 0}}));
    case StdKind::Mab:
      if (a < 0 || b < 0 || a + b == 0 || std::gcd(a, b) != 1)
        throw Error(ErrorCode::InvalidSlopeData, "M_ab needs coprime a, b >= 0, not both zero");
      return std_module_lambda(Rational(b, a + b), ring);
    case StdKind::Mlambda:
      if (b <= 0) throw Error(ErrorCode::InvalidSlopeData, "M_lambda needs lambda = a/b with b > 0");
      return std_module_lambda(Rational(a, b), ring);
  }
  throw Error(ErrorCode::InvalidSlopeData, "unknown standard module");
}

FLattice std_lattice(const Rational& lambda, const WittRing& ring) {
  if (lambda < 0) throw Error(ErrorCode::InvalidSlopeData, "negative slope is not effective");
  const long s = lambda.numerator(), r = lambda.denominator();
  WMatrix A(ring, static_cast<int>(r), static_cast<int>(r));
  for (long i = 0; i + 1 < r; ++i) A.at(static_cast<int>(i + 1), static_cast<int>(i)) = ring.one();
  A.at(0, static_cast<int>(r - 1)) = p_pow(ring, s);
  return FLattice(std::move(A));
}

int a_number(const DieudonneModule& M) {
  auto rows = M.A().residue();
  const auto b = M.B().residue();
  for (size_t i = 0; i < rows.size(); ++i) rows[i].insert(rows[i].end(), b[i].begin(), b[i].end());
  return M.rank() - rank_fq(std::move(rows));
}

DieudonneModule dual(const DieudonneModule& M) {
  return DieudonneModule(M.B().transpose().sigma(1));
}

DieudonneModule direct_sum(const DieudonneModule& M, const DieudonneModule& N) {
  if (!(M.ring() == N.ring())) throw Error(ErrorCode::RingMismatch, "direct sum over different rings");
  return DieudonneModule(M.A().block_diag(N.A()));
}

FLattice direct_sum(const FLattice& M, const FLattice& N) {
  if (!(M.ring() == N.ring())) throw Error(ErrorCode::RingMismatch, "direct sum over different rings");
  return FLattice(M.A().block_diag(N.A()));
}

DieudonneModule base_change(const DieudonneModule& M, const FqField& target) {
  return DieudonneModule(M.A().embed(M.ring().with_field(target)));
}

DieudonneModule change_basis(const DieudonneModule& M, const WMatrix& U) {
  return DieudonneModule(U.inverse() * M.A() * U.sigma(1));
}

FLattice change_basis(const FLattice& M, const WMatrix& U) {
  return FLattice(U.inverse() * M.A() * U.sigma(1));
}

Rank2Class classify_rank2(const DieudonneModule& M) {
  if (M.rank() != 2) throw Error(ErrorCode::NotRankTwo, "classify_rank2 needs rank 2");
  if (M.dim_mod_F() != 1 || M.dim_mod_V() != 1)
    throw Error(ErrorCode::NotEllipticShape, "needs dim M/FM = dim M/VM = 1");
  // F(M/pM) and V(M/pM) are lines; they coincide exactly when a(M) = 1.
  return a_number(M) == 1 ? Rank2Class::Supersingular_M2 : Rank2Class::Ordinary_M1;
}

std::string to_string(Rank2Class c) {
  return c == Rank2Class::Ordinary_M1 ? "Ordinary_M1" : "Supersingular_M2";
}

WMatrix random_invertible(const WittRing& ring, int h, std::mt19937_64& rng) {
  WMatrix L = WMatrix::identity(ring, h), R(ring, h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      if (j < i) L.at(i, j) = ring.random(rng);
      if (j > i) R.at(i, j) = ring.random(rng);
    }
  for (int i = 0; i < h; ++i) {
    WittElement u = ring.random(rng);
    if (!u.is_unit()) u += ring.one();
    R.at(i, i) = u;
  }
  std::vector<int> perm(static_cast<size_t>(h));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  WMatrix P(ring, h, h);
  for (int i = 0; i < h; ++i) P.at(i, perm[static_cast<size_t>(i)]) = ring.one();
  return L * R * P;
}

}  // namespace dieu
