#pragma once

#include "renorm/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm::c0 {

/// One audited inequality family: `slack` ≥ 0 iff it holds (min over n).
struct ScheduleCheck
{
  std::string name;
  double slack = 0.0;
  bool pass = false;
};

/// Parameter sequences of the c0 construction, indexed as in the recursion.
///
/// ε_n, c_n for n ≥ 1; w_n, h_n for 2 ≤ n ≤ depth+1 (h_{depth+1} enters the
/// η_depth constraint); η_n for 2 ≤ n ≤ depth.
class ParamSchedule
{
public:
  double delta() const { return delta_; }
  std::size_t depth() const { return depth_; }

  double epsilon(std::size_t n) const { return at(eps_, n, 1, "epsilon"); }
  double c(std::size_t n) const { return at(c_, n, 1, "c"); }
  double w(std::size_t n) const { return at(w_, n, 2, "w"); }
  double h(std::size_t n) const { return at(h_, n, 2, "h"); }
  double eta(std::size_t n) const { return at(eta_, n, 2, "eta"); }
  /// w_n − 1, kept exactly; w_n itself is its rounded sum with 1.
  double w_offset(std::size_t n) const { return at(d_, n, 2, "w offset"); }

  /// Right end of the admissible interval for w_n.
  double w_upper(std::size_t n) const
  {
    const double base = 1.0 - delta_ * c(n - 1);
    return base / (base - delta_ * epsilon(n));
  }

  /// (h_n − 1)/(h_n − δ), the contraction in the witness recursion.
  double ratio(std::size_t n) const { return (h(n) - 1.0) / (h(n) - delta_); }

  /// Π_{j=from}^{to} 1/w_j (empty product = 1).
  double inv_w_product(std::size_t from, std::size_t to) const
  {
    double p = 1.0;
    for (std::size_t j = std::max<std::size_t>(from, 2); j <= to; ++j) p /= w(j);
    return p;
  }

  /// Π_{j=2}^{n} (1+η_j)².
  double eta_product(std::size_t n) const
  {
    double p = 1.0;
    for (std::size_t j = 2; j <= n; ++j) p *= (1.0 + eta(j)) * (1.0 + eta(j));
    return p;
  }

  /// Upper bound of Π_{n>depth} w_n from w_n − 1 ≤ 2^{−n}.
  double w_tail_bound() const { return std::exp(std::ldexp(1.0, -static_cast<int>(depth_))); }
  /// Upper bound of Σ_{n>depth} 1/h_n = Σ (w_n − 1)/(w_n δ).
  double inv_h_tail_bound() const { return std::ldexp(1.0, -static_cast<int>(depth_)) / delta_; }
  /// Upper bound of Π_{n>depth} (1+η_n)² under the geometric η allocation.
  double eta_tail_bound() const { return std::exp(eta_log_budget_ * std::ldexp(1.0, -static_cast<int>(depth_) + 1)); }

  std::vector<ScheduleCheck> audit() const;

  friend ParamSchedule build_schedule(double delta, std::size_t depth);

private:
  static double at(const std::vector<double>& v, std::size_t n, std::size_t first, const char* what)
  {
    if (n < first || n - first >= v.size()) throw std::out_of_range(std::string("ParamSchedule: index out of range for ") + what);
    return v[n - first];
  }

  double delta_ = 0.0;
  std::size_t depth_ = 0;
  double eta_log_budget_ = 0.0;
  std::vector<double> eps_, c_, d_, w_, h_, eta_;
};

/// Deterministic schedule: ε_n = 2^{−(n−1)}, w_n = 1 + min(half interval, 2^{−n}),
/// h_n from its closed form, η_n = 0.9 × the largest value meeting both η
/// constraints, capped by a geometric share of log(1/δ) for the product bound.
inline ParamSchedule build_schedule(double delta, std::size_t depth)
{
  if (!(delta > 0.0 && delta <= 0.25)) throw std::invalid_argument("build_schedule: delta must lie in (0, 1/4]");
  if (depth < 2) throw std::invalid_argument("build_schedule: depth must be at least 2");

  ParamSchedule s;
  s.delta_ = delta;
  s.depth_ = depth;
  s.eta_log_budget_ = std::log(1.0 / delta);

  double sum = 0.0;
  for (std::size_t n = 1; n <= depth + 1; ++n) {
    const double e = std::ldexp(1.0, -static_cast<int>(n - 1));
    sum += e;
    s.eps_.push_back(e);
    s.c_.push_back(sum);
  }
  for (std::size_t n = 2; n <= depth + 1; ++n) {
    // Offsets are kept apart from 1 so that h = δ + δ/d does not lose digits in w − 1.
    const double base = 1.0 - delta * s.c(n - 1);
    const double width = delta * s.epsilon(n) / (base - delta * s.epsilon(n));
    const double d = std::min(0.5 * width, std::ldexp(1.0, -static_cast<int>(n)));
    s.d_.push_back(d);
    s.w_.push_back(1.0 + d);
    s.h_.push_back(delta + delta / d);
  }
  for (std::size_t n = 2; n <= depth; ++n) {
    const double first = 1.0 / (1.0 / s.w(n) + delta / (2.0 * s.h(n)));
    const double second = (s.h(n + 1) - delta) / (s.h(n + 1) - 1.0);
    const double eta_max = std::sqrt(std::min(first, second)) - 1.0;
    // (1+η)² ≤ exp(log(1/δ)·2^{−(n−1)}) keeps Π(1+η_n)² ≤ 1/δ over all n.
    const double eta_cap = std::exp(0.5 * s.eta_log_budget_ * std::ldexp(1.0, -static_cast<int>(n - 1))) - 1.0;
    const double eta = std::min({0.9 * eta_max, eta_cap, 2.0 / delta - 1.0});
    if (!(eta > 0.0)) throw invariant_error("build_schedule: no positive eta_" + std::to_string(n));
    s.eta_.push_back(eta);
  }

  for (const auto& check : s.audit())
    if (!check.pass) throw invariant_error("build_schedule: violated " + check.name);
  return s;
}

inline std::vector<ScheduleCheck> ParamSchedule::audit() const
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<ScheduleCheck> out;
  auto add = [&](std::string name, double slack) { out.push_back({std::move(name), slack, slack >= 0.0}); };

  {
    double slack = epsilon(1) == 1.0 ? inf : -1.0;
    for (std::size_t n = 1; n <= depth_; ++n) slack = std::min(slack, epsilon(n));
    slack = std::min(slack, 1.0 / delta_ - c(depth_));
    add("epsilon: eps_1 = 1, eps_n > 0, sum eps_n <= 1/delta", slack);
  }
  {
    double sum = 0.0, err = 0.0;
    for (std::size_t n = 1; n <= depth_; ++n) {
      sum += epsilon(n);
      err = std::max(err, std::abs(c(n) - sum));
    }
    add("c_n = sum_{j<=n} eps_j", 1e-15 - err);
  }
  {
    double slack = inf;
    for (std::size_t n = 2; n <= depth_ + 1; ++n) slack = std::min({slack, w_offset(n), w_upper(n) - w(n)});
    add("w_n in (1, (1-delta c_{n-1})/(1-delta c_{n-1}-delta eps_n))", slack > 0.0 ? slack : -1.0);
  }
  {
    double err = 0.0;
    for (std::size_t n = 2; n <= depth_ + 1; ++n) err = std::max(err, std::abs(h(n) - w(n) * delta_ / w_offset(n)) / h(n));
    add("h_n = w_n delta/(w_n - 1)", 1e-14 - err);
  }
  {
    double slack = inf;
    for (std::size_t n = 2; n <= depth_ + 1; ++n) slack = std::min(slack, std::ldexp(1.0, -static_cast<int>(n)) - w_offset(n));
    double prod = 1.0, sum = 0.0;
    for (std::size_t n = 2; n <= depth_; ++n) {
      prod *= w(n);
      sum += 1.0 / h(n);
    }
    const bool finite = std::isfinite(prod * w_tail_bound()) && std::isfinite(sum + inv_h_tail_bound());
    add("prod w_n < inf and sum 1/h_n < inf (geometric tails)", finite ? slack : -1.0);
  }
  {
    double slack = inf;
    for (std::size_t n = 2; n <= depth_; ++n) {
      const double q = (1.0 + eta(n)) * (1.0 + eta(n));
      slack = std::min(slack, 1.0 - q * (1.0 / w(n) + delta_ / (2.0 * h(n))));
    }
    add("(1+eta_n)^2 (1/w_n + delta/(2h_n)) <= 1", slack);
  }
  {
    double slack = inf;
    for (std::size_t n = 2; n <= depth_; ++n) {
      const double q = (1.0 + eta(n)) * (1.0 + eta(n));
      slack = std::min(slack, 1.0 - q * (h(n + 1) - 1.0) / (h(n + 1) - delta_));
    }
    add("(1+eta_n)^2 (h_{n+1}-1)/(h_{n+1}-delta) <= 1", slack);
  }
  {
    double slack = 1.0 / delta_ - eta_product(depth_) * eta_tail_bound();
    for (std::size_t n = 2; n <= depth_; ++n) slack = std::min(slack, 1.0 / (1.0 + eta(n)) - delta_ / 2.0);
    add("prod (1+eta_n)^2 <= 1/delta and delta/2 <= 1/(1+eta_n)", slack);
  }
  return out;
}

} // namespace renorm::c0
