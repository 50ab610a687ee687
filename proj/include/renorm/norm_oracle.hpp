#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace renorm {

/// Ambient norm that equivalence constants refer to.
enum class Reference { l2, linf };

inline double reference_norm(Reference r, const CoordVector& x)
{
  return r == Reference::l2 ? x.norm2() : x.norm_inf();
}

/// Norm of the ambient dual, used for Hölder-type majorants.
inline double reference_dual_norm(Reference r, const CoordFunctional& f)
{
  return r == Reference::l2 ? f.norm2() : f.norm1();
}

/// An evaluatable norm with declared constants lo·ref ≤ eval ≤ hi·ref.
///
/// Immutable once built; copies share the evaluator.
class NormOracle
{
public:
  using Evaluator = std::function<double(const CoordVector&)>;

  NormOracle(Evaluator eval, double lo, double hi, std::string label, Reference ref = Reference::l2)
    : eval_(std::make_shared<const Evaluator>(std::move(eval))), lo_(lo), hi_(hi), label_(std::move(label)), ref_(ref)
  {
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("equivalence constants need 0 < lo <= hi");
  }

  double operator()(const CoordVector& x) const { return (*eval_)(x); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& label() const { return label_; }
  Reference reference() const { return ref_; }
  double ref(const CoordVector& x) const { return reference_norm(ref_, x); }

  bool contains(const CoordVector& x) const { return (*this)(x) <= 1.0; }

private:
  std::shared_ptr<const Evaluator> eval_;
  double lo_;
  double hi_;
  std::string label_;
  Reference ref_;
};

inline NormOracle l2_norm() { return {[](const CoordVector& x) { return x.norm2(); }, 1.0, 1.0, "l2"}; }

/// ℓ1 on ℝ^dim, referenced to ℓ2: ‖x‖₂ ≤ ‖x‖₁ ≤ √dim ‖x‖₂.
inline NormOracle l1_norm(std::size_t dim)
{
  return {[](const CoordVector& x) { return x.norm1(); }, 1.0, std::sqrt(static_cast<double>(dim)), "l1"};
}

/// ℓ∞ on ℝ^dim, referenced to ℓ2: ‖x‖₂/√dim ≤ ‖x‖∞ ≤ ‖x‖₂.
inline NormOracle linf_norm(std::size_t dim)
{
  return {[](const CoordVector& x) { return x.norm_inf(); }, 1.0 / std::sqrt(static_cast<double>(dim)), 1.0, "linf"};
}

inline NormOracle scaled(const NormOracle& n, double s)
{
  if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
  return {[n, s](const CoordVector& x) { return s * n(x); }, s * n.lo(), s * n.hi(), n.label() + "*" + std::to_string(s),
          n.reference()};
}

/// Clamp window for 2a² + 2b² − c² cancellation.
inline constexpr double q_clamp_tol = 1e-12;

/// Q(x, y) = 2‖x‖² + 2‖y‖² − ‖x+y‖² without clamping.
inline double q_functional_raw(const NormOracle& n, const CoordVector& x, const CoordVector& y)
{
  const double a = n(x), b = n(y), c = n(x + y);
  return 2.0 * a * a + 2.0 * b * b - c * c;
}

/// Q(x, y), with values in [−1e−12·scale, 0) clamped to 0.
///
/// Larger negative values are returned unchanged; they mean the oracle is
/// not a norm.
inline double q_functional(const NormOracle& n, const CoordVector& x, const CoordVector& y)
{
  const double a = n(x), b = n(y), c = n(x + y);
  const double q = 2.0 * a * a + 2.0 * b * b - c * c;
  const double scale = std::max(1.0, 2.0 * a * a + 2.0 * b * b);
  return (q < 0.0 && q >= -q_clamp_tol * scale) ? 0.0 : q;
}

/// (a1·n1² + a2·n2²)^{1/2}; its Q is a1·Q1 + a2·Q2.
inline NormOracle quadratic_mean_combine(const NormOracle& n1, const NormOracle& n2, double a1, double a2)
{
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw std::invalid_argument("quadratic_mean_combine: coefficients must be positive");
  if (n1.reference() != n2.reference()) throw std::invalid_argument("quadratic_mean_combine: mismatched references");
  auto eval = [n1, n2, a1, a2](const CoordVector& x) {
    const double u = n1(x), v = n2(x);
    return std::sqrt(a1 * u * u + a2 * v * v);
  };
  const double lo = std::sqrt(a1 * n1.lo() * n1.lo() + a2 * n2.lo() * n2.lo());
  const double hi = std::sqrt(a1 * n1.hi() * n1.hi() + a2 * n2.hi() * n2.hi());
  return {eval, lo, hi, "qmean(" + n1.label() + "," + n2.label() + ")", n1.reference()};
}

/// Pointwise maximum. Constants recorded as (max lo, max hi).
inline NormOracle finite_max_combine(const std::vector<NormOracle>& norms)
{
  if (norms.empty()) throw std::invalid_argument("finite_max_combine: empty list");
  double lo = 0.0, hi = 0.0;
  std::string label = "max(";
  for (const auto& n : norms) {
    if (n.reference() != norms.front().reference()) throw std::invalid_argument("finite_max_combine: mismatched references");
    lo = std::max(lo, n.lo());
    hi = std::max(hi, n.hi());
    label += n.label() + (&n == &norms.back() ? ")" : ",");
  }
  auto eval = [norms](const CoordVector& x) {
    double m = 0.0;
    for (const auto& n : norms) m = std::max(m, n(x));
    return m;
  };
  return {eval, lo, hi, label, norms.front().reference()};
}

} // namespace renorm
