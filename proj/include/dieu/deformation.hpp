#pragma once

// First-order deformations of a Dieudonne module from a Norman presentation.
//
// Over R = k[t_1..t_N]/(t)^2 a Teichmueller lift [x] with x in the maximal
// ideal is killed by p (since x^p = 0), and a [x] = [a_0 x] for a in W(k).
// So W(R) elements that occur here are a constant in W_n(k) plus a k-linear
// form in the t's.

#include "dieu/matrix.hpp"

#include <string>
#include <vector>

namespace dieu {

struct FirstOrderEntry {
  WittElement constant;
  std::vector<FqElement> linear;  // coefficient of each variable

  bool is_zero() const;
  FirstOrderEntry operator+(const FirstOrderEntry& o) const;
  std::string to_string(const std::vector<std::string>& vars) const;
};

/// F e_i = sum_j a_ij e_j (i < g) and e_i = V(sum_j a_ij e_j) (i >= g), with
/// 0-based indices and rank g + h.
class NormanDatum {
 public:
  NormanDatum(int g, int h, WMatrix a);
  /// F e_j = e_(g+j), e_(g+j) = V e_j.
  static NormanDatum superspecial(const WittRing& ring, int g);

  int g() const { return g_; }
  int h() const { return h_; }
  const WMatrix& a() const { return a_; }
  const WittRing& ring() const { return a_.ring(); }
  bool is_superspecial_shape() const;

 private:
  int g_, h_;
  WMatrix a_;
};

/// d: VM_0/pM_0 -> m (x) M_0/VM_0 as an h x g matrix of linear forms:
/// entry (r, c) is d-bar_(g+r, c).
class DeformationMap {
 public:
  DeformationMap(std::vector<std::string> vars, std::vector<std::vector<std::vector<FqElement>>> entries);
  /// Independent t_ij with d-bar_(g+j, i) = t_ij, so that F e_j = e_(g+j) + sum_i T_ij e_i.
  static DeformationMap universal(const FqField& k, int g, int h);
  /// d-bar = values * eps for a single variable eps.
  static DeformationMap along(const std::vector<std::vector<FqElement>>& values);
  static DeformationMap zero(const FqField& k, int g, int h);

  int rows() const { return static_cast<int>(d_.size()); }
  int cols() const { return d_.empty() ? 0 : static_cast<int>(d_[0].size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<FqElement>& at(int r, int c) const {
    return d_[static_cast<size_t>(r)][static_cast<size_t>(c)];
  }

 private:
  std::vector<std::string> vars_;
  std::vector<std::vector<std::vector<FqElement>>> d_;
};

struct DeformedPresentation {
  int g = 0, h = 0;
  std::vector<std::string> vars;
  /// Row i lists the coefficients of e_0..e_(g+h-1) inside relation i, as in
  /// the undeformed presentation.
  std::vector<std::vector<FirstOrderEntry>> relations;
  bool operator==(const DeformedPresentation& o) const;
};

DeformedPresentation deform(const NormanDatum& base, const DeformationMap& d);

/// F on M_R/VM_R in the basis e_0..e_(g-1): column j is F(e_j).
struct TangentAction {
  std::vector<std::string> vars;
  std::vector<std::vector<FqElement>> constant;              // g x g
  std::vector<std::vector<std::vector<FqElement>>> linear;   // g x g x vars

  int g() const { return static_cast<int>(constant.size()); }
  bool constant_is_zero() const;
  /// Rank over k of the linear forms among the g^2 entries.
  int linear_rank() const;
  /// Substitute values for the variables.
  std::vector<std::vector<FqElement>> evaluate(const std::vector<FqElement>& point) const;
};

TangentAction tangent_frobenius(const NormanDatum& base, const DeformationMap& d);

}  // namespace dieu
