#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/gauge.hpp"
#include "renorm/norm_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

// Slice-modified renorming of the ℓ2 model.
//
// Given α = (x0, h0, f0, g0) the unit ball of the new norm agrees with the
// Euclidean ball outside the slice {|<f0,·>| > (1−δ)²‖·‖} and contains a
// segment through x0 in the direction h0 inside it.

namespace renorm::slice {

/// (1−δ)^4 > 1/2 is required for the cross-pairing room 2(1−δ)^4 − 1 > 0.
inline bool admissible_delta(double delta)
{
  return delta > 0.0 && delta < 1.0 && std::pow(1.0 - delta, 4) > 0.5;
}

/// ε_{δ,C} = (1 − (1−δ)²) / (1 + C²)².
inline double slice_epsilon(double delta, double C)
{
  const double q = 1.0 + C * C;
  return (1.0 - (1.0 - delta) * (1.0 - delta)) / (q * q);
}

struct AlphaTuple
{
  CoordVector x0;
  CoordVector h0;
  CoordFunctional f0;
  CoordFunctional g0;
  double delta = 0.1;
  double C = 1.0;

  double squeeze() const { return (1.0 - delta) * (1.0 - delta); }
  double epsilon() const { return slice_epsilon(delta, C); }

  /// Throws invariant_error naming the first violated condition.
  void validate(double tol = 1e-12) const
  {
    auto fail = [](const std::string& what) { throw invariant_error("AlphaTuple: " + what); };
    if (!admissible_delta(delta)) fail("delta must satisfy 0 < delta < 1 and (1-delta)^4 > 1/2");
    if (!(C >= 1.0)) fail("C must be >= 1");
    if (std::abs(pairing(f0, h0)) > tol) fail("<f0,h0> != 0");
    if (std::abs(pairing(g0, h0) - 1.0) > tol) fail("<g0,h0> != 1");
    if (pairing(f0, x0) < 1.0 - delta - tol) fail("<f0,x0> < 1-delta");
    if (std::abs(x0.norm2() - 1.0) > tol) fail("||x0|| != 1");
    if (h0.norm2() < 1.0 - tol || h0.norm2() > C + tol) fail("||h0|| outside [1, C]");
    if (g0.norm2() < 1.0 - tol || g0.norm2() > C + tol) fail("||g0||* outside [1, C]");
    if (f0.norm2() > C + tol) fail("||f0||* > C");
  }
};

/// Per-tuple constants of the renorming.
struct SliceNormConstants
{
  double epsilon = 0.0;
  double lambda0 = 0.0;
  double lambda_lo = 0.0; ///< (1−δ)²
  double lambda_hi = 0.0; ///< (1+ε)^{−1/2}
};

/// P_α x = x − <g0,x> h0, a projection onto ker g0 preserving <f0,·>.
inline CoordVector project_alpha(const AlphaTuple& a, const CoordVector& x)
{
  CoordVector y = x;
  y.axpy(-pairing(a.g0, x), a.h0);
  return y;
}

/// Membership in B̂ = P_α(B) ∩ {|<f0,·>| ≤ (1−δ)²}, for points of ker g0.
///
/// For y in ker g0, y ∈ P_α(B) iff min_t ‖y + t h0‖ ≤ 1; the minimum is a
/// convex line search.
inline bool bhat_contains(const AlphaTuple& a, const CoordVector& y, double tol)
{
  if (std::abs(pairing(a.f0, y)) > a.squeeze()) return false;
  const double ny = y.norm2();
  if (ny <= 1.0) return true;
  const double span = 2.0 * ny / a.h0.norm2() + 1.0;
  const auto [t, v] = golden_section_min(
    [&](double s) {
      CoordVector z = y;
      z.axpy(s, a.h0);
      return z.norm2();
    },
    -span, span, tol / 10.0);
  return v <= 1.0;
}

/// Minkowski gauge of B̂ at y ∈ ker g0.
///
/// Bisection bracket: B̂ ⊆ (1+C²)·B and contains the ball of radius
/// (1−δ)²/max(1, ‖f0‖*) of ker g0.
inline double bhat_gauge(const AlphaTuple& a, const CoordVector& y, double tol)
{
  if (y.is_zero()) return 0.0;
  if (std::abs(pairing(a.g0, y)) > 1e-12 * std::max(1.0, y.norm2()))
    throw std::invalid_argument("bhat_gauge: point is not in ker g0");
  const GaugeBracket bracket{a.squeeze() / std::max(1.0, a.f0.norm2()), 1.0 + a.C * a.C, Reference::l2};
  return gauge_from_membership([&](const CoordVector& z) { return bhat_contains(a, z, tol); }, y, bracket, tol);
}

/// max{ ‖x‖, ((1−δ)²·gauge(P_α x)² + ε‖P_α x‖²)^{1/2} }.
inline double slice_norm_eval(const AlphaTuple& a, const CoordVector& x, double tol)
{
  const double nx = x.norm2();
  const CoordVector y = project_alpha(a, x);
  if (y.is_zero()) return nx;
  const double g = bhat_gauge(a, y, tol);
  const double ny = y.norm2();
  const double inner = std::sqrt(a.squeeze() * g * g + a.epsilon() * ny * ny);
  return std::max(nx, inner);
}

inline SliceNormConstants slice_constants(const AlphaTuple& a, double tol)
{
  SliceNormConstants k;
  k.epsilon = a.epsilon();
  k.lambda0 = 1.0 / slice_norm_eval(a, a.x0, tol);
  k.lambda_lo = a.squeeze();
  k.lambda_hi = 1.0 / std::sqrt(1.0 + k.epsilon);
  return k;
}

inline NormOracle slice_norm_oracle(const AlphaTuple& a, double tol)
{
  return {[a, tol](const CoordVector& x) { return slice_norm_eval(a, x, tol); }, 1.0, 1.0 / a.squeeze(), "slice_alpha"};
}

} // namespace renorm::slice
