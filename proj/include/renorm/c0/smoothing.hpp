#pragma once

#include "renorm/c0/polyhedral.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace renorm::c0 {

/// Smallest even p ≥ 2 with J^{1/p} ≤ 1 + η.
inline int smoothing_exponent(std::size_t J, double eta)
{
  if (J == 0) throw std::invalid_argument("smoothing_exponent: empty list");
  if (!(eta > 0.0)) throw std::invalid_argument("smoothing_exponent: eta must be positive");
  const double lj = std::log(static_cast<double>(J));
  int p = std::max(2, static_cast<int>(std::ceil(lj / std::log1p(eta))));
  if (p % 2) ++p;
  while (std::exp(lj / p) > 1.0 + eta) p += 2;
  while (p > 2 && std::exp(lj / (p - 2)) <= 1.0 + eta) p -= 2;
  return p;
}

/// (Σ_j <u_j,x>^p)^{1/p} over a symmetric functional list, p even.
///
/// With N(x) = max_j |<u_j,x>| this satisfies N ≤ agg ≤ J^{1/p}·N ≤ (1+η)·N.
/// Evaluated as m·(Σ(|a_j|/m)^p)^{1/p}, m = N(x), so large p never overflows.
class SmoothAggNorm
{
public:
  SmoothAggNorm(FunctionalList list, double eta) : list_(std::move(list)), eta_(eta)
  {
    p_ = smoothing_exponent(list_.size(), eta);
  }

  int exponent() const { return p_; }
  double eta() const { return eta_; }
  const FunctionalList& list() const { return list_; }
  std::size_t dim() const { return list_.dim(); }

  double max_eval(const CoordVector& x) const { return list_.max_abs(x); }

  double operator()(const CoordVector& x) const
  {
    const Eigen::VectorXd a = list_.values(x);
    const double m = a.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) s += std::pow(std::abs(a[j]) / m, p_);
    return m * std::pow(s, 1.0 / p_);
  }

  /// ∇agg(x) = Σ_j (a_j/agg)^{p−1} u_j, a_j = <u_j, x>; zero at x = 0.
  Eigen::VectorXd gradient(const CoordVector& x) const
  {
    const Eigen::VectorXd a = list_.values(x);
    const double g = (*this)(x);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    if (g == 0.0) return out;
    Eigen::VectorXd wts(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      const double r = a[j] / g;
      wts[j] = std::copysign(std::pow(std::abs(r), p_ - 1), r);
    }
    return list_.rows.transpose() * wts;
  }

private:
  FunctionalList list_;
  double eta_;
  int p_ = 2;
};

/// One-shot evaluation of the aggregate for a list and η.
inline double smooth_lp_norm(const FunctionalList& list, double eta, const CoordVector& x)
{
  return SmoothAggNorm(list, eta)(x);
}

/// Smoothed ⦀·⦀_{1,n} with tolerance η_n, as used in the level sets.
inline SmoothAggNorm smoothed_one_norm(const ParamSchedule& P, std::size_t n)
{
  return {functional_list(P, PolyKind::one, n), P.eta(n)};
}

} // namespace renorm::c0
