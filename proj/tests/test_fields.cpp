#include "doctest.h"

#include "dieu/fields.hpp"

#include <random>
#include <vector>

using namespace dieu;

namespace {

// Schoolbook product of residue polynomials mod the field modulus, done over
// plain ints so that it shares no code with FqElement::operator*.
std::vector<int> naive_mul(const std::vector<int>& a, const std::vector<int>& b,
                           const std::vector<int>& f, int p) {
  const size_t m = f.size() - 1;
  std::vector<long> t(2 * m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) t[i + j] += static_cast<long>(a[i]) * b[j];
  for (size_t k = 2 * m - 1; k >= m; --k) {
    const long c = t[k] % p;
    for (size_t i = 0; i <= m; ++i) t[k - m + i] -= c * f[i];
  }
  std::vector<int> out(m);
  for (size_t i = 0; i < m; ++i) out[i] = static_cast<int>(((t[i] % p) + p) % p);
  return out;
}

FqElement random_element(const FqField& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
  return F.element(d(rng));
}

}  // namespace

TEST_CASE("shipped table matches the compiled-in table") {
  const FieldTable loaded = FieldTable::load(std::string(DIEU_DATA_DIR) + "/field_table.json");
  CHECK(loaded.entries() == FieldTable::builtin().entries());
  CHECK(FieldTable::builtin().entries().size() == 88);
}

TEST_CASE("known Conway polynomials") {
  const auto& t = FieldTable::builtin();
  CHECK(t.modulus(2, 8) == std::vector<int>{1, 0, 1, 1, 1, 0, 0, 0, 1});
  CHECK(t.modulus(3, 2) == std::vector<int>{2, 2, 1});
  CHECK(t.modulus(5, 4) == std::vector<int>{2, 4, 4, 0, 1});
  CHECK(t.modulus(7, 3) == std::vector<int>{4, 0, 6, 1});
}

TEST_CASE("recomputed table agrees for small primes") {
  const FieldTable small = FieldTable::compute(5, 6);
  for (const auto& [key, f] : small.entries())
    CHECK(FieldTable::builtin().modulus(key.first, key.second) == f);
}

TEST_CASE("multiplication agrees with a schoolbook oracle") {
  std::mt19937_64 rng(7);
  for (auto [p, m] : {std::pair{2, 5}, {3, 4}, {5, 3}, {31, 2}, {7, 8}}) {
    const FqField F = make_field(p, m);
    for (int t = 0; t < 50; ++t) {
      const FqElement a = random_element(F, rng), b = random_element(F, rng);
      CHECK((a * b).coeffs() == naive_mul(a.coeffs(), b.coeffs(), F.modulus(), p));
    }
  }
}

TEST_CASE("generator is primitive and Frobenius has order m") {
  std::mt19937_64 rng(3);
  for (auto [p, m] : {std::pair{2, 8}, {3, 5}, {13, 3}, {31, 4}}) {
    const FqField F = make_field(p, m);
    CHECK(multiplicative_order(F.gen()) == F.size() - 1);
    for (int t = 0; t < 20; ++t) {
      const FqElement a = random_element(F, rng);
      CHECK(a.frobenius(m) == a);
      CHECK(a.frobenius() == a.pow(static_cast<std::uint64_t>(p)));
      CHECK(a.frobenius(-1).frobenius(1) == a);
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
    }
  }
}

TEST_CASE("embeddings are compatible ring maps") {
  std::mt19937_64 rng(11);
  for (int p : {2, 3, 5}) {
    const FqField F2 = make_field(p, 2), F4 = make_field(p, 4), F8 = make_field(p, 8);
    for (int t = 0; t < 20; ++t) {
      const FqElement a = random_element(F2, rng), b = random_element(F2, rng);
      CHECK(embed(a * b, F4) == embed(a, F4) * embed(b, F4));
      CHECK(embed(a + b, F8) == embed(a, F8) + embed(b, F8));
      CHECK(embed(embed(a, F4), F8) == embed(a, F8));
      CHECK(embed(a.frobenius(), F8) == embed(a, F8).frobenius());
      CHECK(restrict_to(embed(a, F8), F2) == a);
      CHECK(embed(a, F8).degree() == a.degree());
    }
  }
  CHECK_THROWS_AS(embed(make_field(3, 2).gen(), make_field(3, 3)), Error);
}

TEST_CASE("additive equations extend the field when needed") {
  const FqField F2 = make_field(2, 1);
  // x^2 + x + 1 = 0 has no root in F_2 and roots in F_4.
  std::vector<FqElement> c{F2.one(), F2.one()};
  const auto sol = solve_additive(c, F2.one());
  CHECK(sol.field.m() == 2);
  CHECK((eval_additive(c, sol.x) + embed(F2.one(), sol.field)).is_zero());

  // x^3 - a x with a a non-square in F_3: kernel lives in F_9.
  const FqField F3 = make_field(3, 1);
  std::vector<FqElement> k{F3.one(), -F3.from_int(2)};
  const auto ker = additive_kernel_element(k);
  CHECK(!ker.x.is_zero());
  CHECK(ker.field.m() == 2);
  CHECK(eval_additive(k, ker.x).is_zero());
}

TEST_CASE("additive solving gives up with the next degree") {
  // x^2 - x = c needs F_{2^2} when c has trace 1; cap the search at degree 1.
  const FqField F2 = make_field(2, 1);
  std::vector<FqElement> c{F2.one(), F2.one()};
  try {
    solve_additive(c, F2.one(), 1);
    FAIL("expected ExtensionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExtensionExhausted);
    CHECK(e.detail().value_or(0) == 2);
  }
}
