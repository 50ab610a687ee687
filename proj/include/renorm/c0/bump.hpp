#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace renorm::c0 {

/// φ(t) = K ∫_a^{max(t,a)} exp(−1/(u−a)) du with a = 1/(1+η), φ(1) = 1.
///
/// With b = 1 − a and y = 1/(u−a) − 1/b the integral becomes
/// b² e^{−1/b} I(y_t), I(s) = ∫_s^∞ e^{−y} (1+by)^{−2} dy, so φ(t) = I(y_t)/I(0)
/// and no factor e^{−1/b} has to be represented.
class BumpFunction
{
public:
  static constexpr double quad_tol = 1e-12;

  explicit BumpFunction(double eta) : eta_(eta)
  {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("BumpFunction: eta must lie in (0, 1]");
    a_ = 1.0 / (1.0 + eta);
    b_ = 1.0 - a_;
    i0_ = tail(0.0);
  }

  double threshold() const { return a_; }
  double eta() const { return eta_; }

  /// K = 1/∫_a^1 exp(−1/(u−a)) du, as a logarithm (K itself overflows for small η).
  double log_normalization() const { return 1.0 / b_ - 2.0 * std::log(b_) - std::log(i0_); }

  double value(double t) const
  {
    if (t < 0.0) throw std::invalid_argument("BumpFunction: negative argument");
    if (t <= a_) return 0.0;
    const double y = reduced(t);
    if (y >= 0.0) return tail(y) / i0_;
    // ∫_y^0 e^{−s}(1+bs)^{−2} ds = e^{−y} ∫_0^{−y} e^{−u}(1+b(y+u))^{−2} du
    if (-y > 700.0) return std::numeric_limits<double>::infinity();
    auto f = [&](double u) {
      const double q = 1.0 + b_ * (y + u);
      return std::exp(-u) / (q * q);
    };
    // On short intervals the rule is exact to rounding; subdividing only chases noise.
    const unsigned depth = -y <= 1.0 ? 0 : 15;
    const double head = std::exp(-y) * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, -y, depth, quad_tol);
    return (head + i0_) / i0_;
  }

  /// φ'(t) = K exp(−1/(t−a)) = e^{−y_t} / (b² I(0)).
  double derivative(double t) const
  {
    if (t < 0.0) throw std::invalid_argument("BumpFunction: negative argument");
    if (t <= a_) return 0.0;
    return std::exp(-reduced(t)) / (b_ * b_ * i0_);
  }

  std::pair<double, double> operator()(double t) const { return {value(t), derivative(t)}; }

private:
  double reduced(double t) const { return 1.0 / (t - a_) - 1.0 / b_; }

  /// I(s) for s ≥ 0, written as e^{−s} ∫_0^∞ e^{−u}(1+b(s+u))^{−2} du.
  double tail(double s) const
  {
    if (s > 745.0) return 0.0;
    auto f = [&](double u) {
      const double q = 1.0 + b_ * (s + u);
      return std::exp(-u) / (q * q);
    };
    const double inf = std::numeric_limits<double>::infinity();
    return std::exp(-s) * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, inf, 15, quad_tol);
  }

  double eta_;
  double a_ = 0.0;
  double b_ = 0.0;
  double i0_ = 1.0;
};

inline std::pair<double, double> bump_eval(const BumpFunction& B, double t) { return B(t); }

} // namespace renorm::c0
