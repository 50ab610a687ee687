#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"

#include <cmath>
#include <concepts>
#include <utility>

namespace renorm {

/// Radii with inner·B_ref ⊆ K ⊆ outer·B_ref.
struct GaugeBracket
{
  double inner = 1.0;
  double outer = 1.0;
  Reference ref = Reference::l2;
};

template <class F>
concept MembershipPredicate = std::predicate<const F&, const CoordVector&>;

/// Minkowski gauge inf{t > 0 : x/t ∈ K} by bisection along the ray.
///
/// The bracket [ref(x)/outer, ref(x)/inner] always contains the gauge. The
/// predicate is probed at both ends; a failure there means the set is not
/// what the bracket claims.
template <MembershipPredicate Member>
double gauge_from_membership(const Member& member, const CoordVector& x, const GaugeBracket& bracket, double tol)
{
  const double r = reference_norm(bracket.ref, x);
  if (r == 0.0) return 0.0;
  if (!(bracket.inner > 0.0) || !(bracket.outer >= bracket.inner)) throw std::invalid_argument("bad gauge bracket");

  double lo = r / bracket.outer;
  // Points exactly on the inner sphere may round outside; widen by a few ulps.
  double hi = r / bracket.inner * (1.0 + 1e-12);
  if (!member(x / hi)) throw invalid_set_error("gauge bracket: point at the inner radius is not a member");
  if (member(x / (0.5 * lo))) throw invalid_set_error("gauge bracket: set exceeds its outer radius");

  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (member(x / mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Minimizer of a unimodal function on [a, b] by golden-section search.
template <std::invocable<double> F>
std::pair<double, double> golden_section_min(const F& f, double a, double b, double tol)
{
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

/// Largest s in [0, hi] with feasible(s), assuming feasibility is an interval
/// containing 0. Returns −1 when 0 itself is infeasible.
template <std::predicate<double> F>
double largest_feasible(const F& feasible, double hi, double tol)
{
  if (!feasible(0.0)) return -1.0;
  double lo = 0.0;
  if (feasible(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

} // namespace renorm
