#pragma once

#include "renorm/c0/bump.hpp"
#include "renorm/c0/schedule.hpp"
#include "renorm/c0/smoothing.hpp"
#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace renorm::c0 {

/// Root t* of φ(A/t) + φ(B/t) + φ(C/t) = 1, i.e. the gauge of {ν ≤ 1} at a
/// point whose three component norms are A, B, C.
///
/// With M = max(A, B, C): ν(M/2) ≥ φ(2) > 1 and ν(2M) = 0 since
/// 1/2 ≤ 1/(1+η) for η ≤ 1, so [M/2, 2M] brackets the root.
inline double level_gauge(const BumpFunction& phi, double A, double B, double C, double tol)
{
  const double M = std::max({A, B, C});
  if (M == 0.0) return 0.0;
  // φ ≥ 1 beyond 1, so only arguments in (a, 1) need quadrature.
  auto above = [&](double t) {
    if (M / t > 1.0) return true;
    return phi.value(A / t) + phi.value(B / t) + phi.value(C / t) > 1.0;
  };
  double lo = 0.5 * M, hi = 2.0 * M;
  if (!above(lo) || above(hi)) throw invariant_error("level_gauge: bracket [M/2, 2M] does not straddle the level");
  const double stop = tol * M;
  for (int it = 0; it < 200 && hi - lo > stop; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (above(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Component values of one level: smoothed ⦀x⦀_{η_n}, previous gauge, |x_n|.
struct LevelComponents
{
  double agg = 0.0;
  double prev = 0.0;
  double coord = 0.0;
  double gauge = 0.0;

  double max() const { return std::max({agg, prev, coord}); }
};

/// The chain of smooth norms ⦀·⦀_1 = |x_1|, ⦀·⦀_n = gauge of {ν_n ≤ 1} on ℝ^n,
/// and the final norm sup_n ⦀P_n x⦀_n.
///
/// Functional lists, exponents and bump normalizations are built once.
class SmoothC0Norm
{
public:
  explicit SmoothC0Norm(ParamSchedule P, double tol = 1e-12) : P_(std::move(P)), tol_(tol)
  {
    for (std::size_t n = 2; n <= P_.depth(); ++n) {
      aggs_.push_back(std::make_shared<const SmoothAggNorm>(smoothed_one_norm(P_, n)));
      bumps_.push_back(std::make_shared<const BumpFunction>(P_.eta(n)));
    }
  }

  const ParamSchedule& schedule() const { return P_; }
  std::size_t depth() const { return P_.depth(); }
  double tol() const { return tol_; }
  const SmoothAggNorm& agg(std::size_t n) const { return *aggs_.at(n - 2); }
  const BumpFunction& bump(std::size_t n) const { return *bumps_.at(n - 2); }

  /// Components and gauges of levels 1..n at P_n x (index 0 holds level 1).
  std::vector<LevelComponents> chain(const CoordVector& x, std::size_t n) const
  {
    if (n < 1 || n > depth()) throw std::out_of_range("SmoothC0Norm: level outside [1, depth]");
    std::vector<LevelComponents> out;
    out.reserve(n);
    LevelComponents first;
    first.coord = std::abs(x.coord(1));
    first.gauge = first.coord;
    out.push_back(first);
    for (std::size_t k = 2; k <= n; ++k) {
      LevelComponents c;
      c.agg = agg(k)(x.truncated(k));
      c.prev = out.back().gauge;
      c.coord = std::abs(x.coord(k));
      c.gauge = level_gauge(bump(k), c.agg, c.prev, c.coord, tol_);
      out.push_back(c);
    }
    return out;
  }

  /// ⦀P_n x⦀_n.
  double level(std::size_t n, const CoordVector& x) const { return chain(x, n).back().gauge; }

  /// sup_n ⦀P_n x⦀_n, cut at the last nonzero coordinate.
  double operator()(const CoordVector& x) const
  {
    const std::size_t N = x.support_max();
    if (N == 0) return 0.0;
    if (N > depth()) throw std::out_of_range("SmoothC0Norm: support beyond schedule depth");
    double best = 0.0;
    for (const auto& c : chain(x, N)) best = std::max(best, c.gauge);
    return best;
  }

private:
  ParamSchedule P_;
  double tol_;
  std::vector<std::shared_ptr<const SmoothAggNorm>> aggs_;
  std::vector<std::shared_ptr<const BumpFunction>> bumps_;
};

inline double smooth_ball_gauge(const SmoothC0Norm& L, std::size_t n, const CoordVector& x) { return L.level(n, x); }

inline double final_norm_eval(const SmoothC0Norm& L, const CoordVector& x) { return L(x); }

/// Final norm against ℓ∞: ‖x‖∞ ≤ ⦀x⦀ ≤ ‖x‖∞/δ².
inline NormOracle final_norm_oracle(std::shared_ptr<const SmoothC0Norm> L)
{
  const double d = L->schedule().delta();
  return {[L](const CoordVector& x) { return (*L)(x); }, 1.0, 1.0 / (d * d), "c0_final", Reference::linf};
}

/// Level-n norm on ℝ^n: ⦀P_n x⦀_{∞,n} ≤ ⦀P_n x⦀_n ≤ Π_{j≤n}(1+η_j)² c_n ‖x‖∞.
inline NormOracle level_norm_oracle(std::shared_ptr<const SmoothC0Norm> L, std::size_t n)
{
  const double hi = L->schedule().eta_product(n) * L->schedule().c(n);
  return {[L, n](const CoordVector& x) { return L->level(n, x); }, 1.0, hi, "c0_level_" + std::to_string(n),
          Reference::linf};
}

inline NormOracle smooth_agg_oracle(std::shared_ptr<const SmoothAggNorm> S, double lo, double hi)
{
  return {[S](const CoordVector& x) { return (*S)(x); }, lo, hi * (1.0 + S->eta()), "c0_agg", Reference::linf};
}

} // namespace renorm::c0
