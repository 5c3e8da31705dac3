#include "dieu/deformation.hpp"

#include <algorithm>

namespace dieu {

namespace {

std::vector<FqElement> into(const std::vector<FqElement>& v, const FqField& k) {
  std::vector<FqElement> out;
  for (const auto& x : v) out.push_back(embed(x, k));
  return out;
}

}  // namespace

bool FirstOrderEntry::is_zero() const {
  if (!constant.is_zero()) return false;
  for (const auto& x : linear)
    if (!x.is_zero()) return false;
  return true;
}

FirstOrderEntry FirstOrderEntry::operator+(const FirstOrderEntry& o) const {
  if (linear.size() != o.linear.size()) throw Error(ErrorCode::DimensionMismatch, "variable count mismatch");
  FirstOrderEntry r{constant + o.constant, linear};
  for (size_t i = 0; i < linear.size(); ++i) r.linear[i] += o.linear[i];
  return r;
}

std::string FirstOrderEntry::to_string(const std::vector<std::string>& vars) const {
  std::string s;
  auto elem = [](const FqElement& x) {
    std::string t;
    for (int c : x.coeffs()) t += (t.empty() ? "" : ",") + std::to_string(c);
    return x.coeffs().size() == 1 ? t : "(" + t + ")";
  };
  if (!constant.is_zero() || linear.empty()) {
    for (const auto& c : constant.coeffs()) s += (s.empty() ? "" : ",") + c.get_str();
    if (constant.coeffs().size() > 1) s = "(" + s + ")";
  }
  for (size_t i = 0; i < linear.size(); ++i) {
    if (linear[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += (linear[i] == linear[i].field().one() ? "" : elem(linear[i]) + "*") + "[" + vars[i] + "]";
  }
  return s.empty() ? "0" : s;
}

NormanDatum::NormanDatum(int g, int h, WMatrix a) : g_(g), h_(h), a_(std::move(a)) {
  if (g < 0 || h < 0 || g + h == 0 || a_.rows() != g + h || a_.cols() != g + h)
    throw Error(ErrorCode::DimensionMismatch, "Norman datum needs a (g+h) x (g+h) matrix");
  if (rank_fq(a_.residue()) != g + h) throw Error(ErrorCode::InvalidModule, "Norman matrix is not invertible");
}

NormanDatum NormanDatum::superspecial(const WittRing& ring, int g) {
  WMatrix a(ring, 2 * g, 2 * g);
  for (int j = 0; j < g; ++j) {
    a.at(j, g + j) = ring.one();
    a.at(g + j, j) = ring.one();
  }
  return NormanDatum(g, g, std::move(a));
}

bool NormanDatum::is_superspecial_shape() const {
  return g_ == h_ && a_ == superspecial(ring(), g_).a();
}

DeformationMap::DeformationMap(std::vector<std::string> vars,
                               std::vector<std::vector<std::vector<FqElement>>> entries)
    : vars_(std::move(vars)), d_(std::move(entries)) {
  for (const auto& row : d_) {
    if (!d_.empty() && row.size() != d_[0].size())
      throw Error(ErrorCode::DimensionMismatch, "ragged deformation matrix");
    for (const auto& f : row)
      if (f.size() != vars_.size()) throw Error(ErrorCode::DimensionMismatch, "linear form has wrong length");
  }
}

DeformationMap DeformationMap::universal(const FqField& k, int g, int h) {
  std::vector<std::string> vars;
  for (int c = 0; c < g; ++c)
    for (int r = 0; r < h; ++r) vars.push_back("t" + std::to_string(c + 1) + std::to_string(r + 1));
  std::vector<std::vector<std::vector<FqElement>>> d(
      static_cast<size_t>(h), std::vector<std::vector<FqElement>>(static_cast<size_t>(g)));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < g; ++c) {
      std::vector<FqElement> f(vars.size(), k.zero());
      f[static_cast<size_t>(c * h + r)] = k.one();
      d[static_cast<size_t>(r)][static_cast<size_t>(c)] = std::move(f);
    }
  return DeformationMap(std::move(vars), std::move(d));
}

DeformationMap DeformationMap::along(const std::vector<std::vector<FqElement>>& values) {
  std::vector<std::vector<std::vector<FqElement>>> d;
  for (const auto& row : values) {
    d.emplace_back();
    for (const auto& x : row) d.back().push_back({x});
  }
  return DeformationMap({"eps"}, std::move(d));
}

DeformationMap DeformationMap::zero(const FqField& k, int g, int h) {
  return along(std::vector<std::vector<FqElement>>(static_cast<size_t>(h),
                                                   std::vector<FqElement>(static_cast<size_t>(g), k.zero())));
}

bool DeformedPresentation::operator==(const DeformedPresentation& o) const {
  if (g != o.g || h != o.h || relations.size() != o.relations.size()) return false;
  for (size_t i = 0; i < relations.size(); ++i)
    for (size_t j = 0; j < relations[i].size(); ++j) {
      const auto& x = relations[i][j];
      const auto& y = o.relations[i][j];
      if (!(x.constant == y.constant)) return false;
      // Forms over different variable sets compare as zero-padded.
      const size_t L = std::max(x.linear.size(), y.linear.size());
      for (size_t v = 0; v < L; ++v) {
        const bool zx = v >= x.linear.size() || x.linear[v].is_zero();
        const bool zy = v >= y.linear.size() || y.linear[v].is_zero();
        if (zx != zy || (!zx && !(x.linear[v] == y.linear[v] && vars[v] == o.vars[v]))) return false;
      }
    }
  return true;
}

// Relation i reads sum_j a_ij (e_j + sum_k d_jk e_k), so the coefficient of
// e_k is a_ik + sum_j [a_ij mod p] d-bar_jk.
DeformedPresentation deform(const NormanDatum& base, const DeformationMap& d) {
  const int g = base.g(), h = base.h(), N = g + h;
  if (d.rows() != h || d.cols() != g)
    throw Error(ErrorCode::DimensionMismatch, "deformation map must be h x g");
  const FqField& k = base.ring().field();
  const size_t nv = d.vars().size();
  DeformedPresentation out{g, h, d.vars(), {}};
  for (int i = 0; i < N; ++i) {
    out.relations.emplace_back();
    for (int c = 0; c < N; ++c) {
      FirstOrderEntry e{base.a().at(i, c), std::vector<FqElement>(nv, k.zero())};
      if (c < g)
        for (int j = g; j < N; ++j) {
          const FqElement aij = base.a().at(i, j).residue();
          if (aij.is_zero()) continue;
          const auto f = into(d.at(j - g, c), k);
          for (size_t v = 0; v < nv; ++v) e.linear[v] += aij * f[v];
        }
      out.relations.back().push_back(std::move(e));
    }
  }
  return out;
}

// With e_(g+j) = V e_j the images of e_0..e_(g-1) span M_R/VM_R and F(e_j)
// reduces to its e_0..e_(g-1) part.
TangentAction tangent_frobenius(const NormanDatum& base, const DeformationMap& d) {
  if (!base.is_superspecial_shape())
    throw Error(ErrorCode::NotSuperspecialShape, "base must read F e_j = e_(g+j), e_(g+j) = V e_j");
  const DeformedPresentation P = deform(base, d);
  const int g = base.g();
  TangentAction T{P.vars, {}, {}};
  for (int i = 0; i < g; ++i) {
    T.constant.emplace_back();
    T.linear.emplace_back();
    for (int j = 0; j < g; ++j) {
      const auto& e = P.relations[static_cast<size_t>(j)][static_cast<size_t>(i)];
      T.constant.back().push_back(e.constant.residue());
      T.linear.back().push_back(e.linear);
    }
  }
  return T;
}

bool TangentAction::constant_is_zero() const {
  for (const auto& row : constant)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

int TangentAction::linear_rank() const {
  std::vector<std::vector<FqElement>> rows;
  for (const auto& row : linear)
    for (const auto& f : row) rows.push_back(f);
  if (rows.empty() || rows[0].empty()) return 0;
  return rank_fq(std::move(rows));
}

std::vector<std::vector<FqElement>> TangentAction::evaluate(const std::vector<FqElement>& point) const {
  if (point.size() != vars.size()) throw Error(ErrorCode::DimensionMismatch, "point has wrong length");
  auto out = constant;
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out[i].size(); ++j)
      for (size_t v = 0; v < vars.size(); ++v) {
        const FqElement x = embed(point[v], out[i][j].field());
        out[i][j] += linear[i][j][v] * x;
      }
  return out;
}

}  // namespace dieu
