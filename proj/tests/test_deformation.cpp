#include "doctest.h"

#include "dieu/deformation.hpp"
#include "dieu/dieudonne.hpp"

#include <random>

using namespace dieu;

namespace {

WittRing ring(int p, int m, int n) { return WittRing::make(make_field(p, m), n); }

bool all_zero(const std::vector<std::vector<FqElement>>& M) {
  for (const auto& r : M)
    for (const auto& x : r)
      if (!x.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("zero deformation returns the base presentation") {
  std::mt19937_64 rng(4);
  const WittRing W = ring(3, 2, 3);
  for (auto [g, h] : {std::pair{1, 1}, {2, 1}, {1, 3}, {2, 2}}) {
    WMatrix a = random_invertible(W, g + h, rng);
    const NormanDatum base(g, h, a);
    const auto P = deform(base, DeformationMap::zero(W.field(), g, h));
    for (int i = 0; i < g + h; ++i)
      for (int j = 0; j < g + h; ++j) {
        const auto& e = P.relations[static_cast<size_t>(i)][static_cast<size_t>(j)];
        CHECK(e.constant == a.at(i, j));
        CHECK(e.linear[0].is_zero());
      }
  }
}

TEST_CASE("superspecial g = 1: F e_1 = e_2 + T e_1") {
  const WittRing W = ring(5, 1, 3);
  const auto base = NormanDatum::superspecial(W, 1);
  const auto d = DeformationMap::universal(W.field(), 1, 1);
  const auto P = deform(base, d);
  CHECK(P.vars == std::vector<std::string>{"t11"});
  CHECK(P.relations[0][0].constant.is_zero());
  CHECK(P.relations[0][0].linear[0] == W.field().one());
  CHECK(P.relations[0][1].constant == W.one());
  CHECK(P.relations[0][1].linear[0].is_zero());
  CHECK(P.relations[1][0].constant == W.one());
  CHECK(P.relations[1][0].linear[0].is_zero());
  CHECK(P.relations[0][0].to_string(P.vars) == "[t11]");

  const auto T = tangent_frobenius(base, d);
  CHECK(T.constant_is_zero());
  CHECK(T.linear_rank() == 1);
}

TEST_CASE("universal tangent action is (t_ij) with full rank g^2") {
  for (int g : {1, 2, 3}) {
    const WittRing W = ring(2, 2, 2);
    const auto T = tangent_frobenius(NormanDatum::superspecial(W, g), DeformationMap::universal(W.field(), g, g));
    CHECK(T.constant_is_zero());
    CHECK(T.linear_rank() == g * g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const auto& f = T.linear[static_cast<size_t>(i)][static_cast<size_t>(j)];
        for (size_t v = 0; v < f.size(); ++v)
          CHECK(f[v].is_zero() == (T.vars[v] != "t" + std::to_string(i + 1) + std::to_string(j + 1)));
      }
  }
}

TEST_CASE("tangent action vanishes exactly at d = 0") {
  const WittRing W = ring(2, 2, 2);
  const FqField& k = W.field();
  const auto base = NormanDatum::superspecial(W, 2);
  const auto T = tangent_frobenius(base, DeformationMap::universal(k, 2, 2));
  const auto els = k.elements();
  for (std::uint64_t code = 0; code < 256; ++code) {
    std::vector<FqElement> pt;
    for (int v = 0; v < 4; ++v) pt.push_back(els[(code >> (2 * v)) & 3]);
    CHECK(all_zero(T.evaluate(pt)) == (code == 0));
  }
  // Specialised maps give the same answer through deform.
  std::vector<std::vector<FqElement>> dbar{{k.zero(), k.gen()}, {k.zero(), k.zero()}};
  CHECK_FALSE(all_zero(tangent_frobenius(base, DeformationMap::along(dbar)).evaluate({k.one()})));
  CHECK(all_zero(tangent_frobenius(base, DeformationMap::zero(k, 2, 2)).evaluate({k.one()})));
}

TEST_CASE("first-order parametrisation is injective") {
  std::mt19937_64 rng(9);
  const WittRing W = ring(2, 1, 3);
  const FqField& k = W.field();
  for (const NormanDatum& base : {NormanDatum::superspecial(W, 2), NormanDatum(2, 2, random_invertible(W, 4, rng))}) {
    std::vector<DeformedPresentation> seen;
    for (int code = 0; code < 16; ++code) {
      std::vector<std::vector<FqElement>> dbar(2, std::vector<FqElement>(2, k.zero()));
      for (int b = 0; b < 4; ++b)
        if (code >> b & 1) dbar[static_cast<size_t>(b / 2)][static_cast<size_t>(b % 2)] = k.one();
      seen.push_back(deform(base, DeformationMap::along(dbar)));
    }
    for (size_t i = 0; i < seen.size(); ++i)
      for (size_t j = i + 1; j < seen.size(); ++j) CHECK_FALSE(seen[i] == seen[j]);
  }
}

TEST_CASE("deformation errors") {
  const WittRing W = ring(3, 1, 2);
  try {
    tangent_frobenius(NormanDatum(1, 1, WMatrix::identity(W, 2)), DeformationMap::universal(W.field(), 1, 1));
    FAIL("expected NotSuperspecialShape");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSuperspecialShape);
  }
  try {
    deform(NormanDatum::superspecial(W, 2), DeformationMap::universal(W.field(), 1, 1));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(NormanDatum(1, 1, WMatrix::from_ints(W, {{3, 0}, {0, 1}})), Error);
}
