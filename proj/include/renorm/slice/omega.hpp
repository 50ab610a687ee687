#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"
#include "renorm/probes.hpp"
#include "renorm/slice/slice_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm::slice {

enum class TheoremKind { A, B, C };

inline const char* to_string(TheoremKind k)
{
  switch (k) {
    case TheoremKind::A: return "A";
    case TheoremKind::B: return "B";
    case TheoremKind::C: return "C";
  }
  return "?";
}

/// Countable family of slice renormings, truncated to the coordinates 1..N.
///
/// Index n is 1-based throughout: alpha(n), eta(n), n_norm_eval(Ω, n, ·).
struct OmegaConfig
{
  double delta = 0.1;
  double C = 1.0;
  std::vector<AlphaTuple> alphas;
  std::vector<double> etas;
  TheoremKind kind = TheoremKind::A;
  std::size_t truncation = 0;

  /// Half-length factor of the witness segment: a, b = λx_n ∓ (1−λ)/C'·h_n.
  double witness_scale = 1.0;
  /// Kind B: the non-weak-null direction data v0, ψ0.
  CoordVector v0;
  CoordFunctional psi0;
  /// Kind C: reported cap diameter of B ∩ {<f_1,·> ≥ (1−δ)³} and the largest
  /// level reached simultaneously by two distinct ±f_n on the unit ball.
  double slice_diameter = std::numeric_limits<double>::quiet_NaN();
  double slice_overlap = std::numeric_limits<double>::quiet_NaN();

  std::size_t n_max() const { return alphas.size(); }
  const AlphaTuple& alpha(std::size_t n) const { return alphas.at(n - 1); }
  double eta(std::size_t n) const { return etas.at(n - 1); }
  double tau(std::size_t n) const
  {
    const double q = (1.0 + eta(n)) * (1.0 + eta(n));
    return (q - 1.0) / q;
  }

  /// n_x: every f_m with m ≥ n_x vanishes on x.
  ///
  /// validate() checks that the first support index of f_n strictly
  /// increases, so functionals beyond the truncation vanish as well.
  std::size_t cutoff(const CoordVector& x) const
  {
    std::size_t last = 0;
    for (std::size_t m = 1; m <= n_max(); ++m)
      if (pairing(alpha(m).f0, x) != 0.0) last = m;
    return last + 1;
  }

  void validate(double tol = 1e-12) const
  {
    auto fail = [](const std::string& what) { throw invariant_error("OmegaConfig: " + what); };
    if (!admissible_delta(delta)) fail("delta must satisfy (1-delta)^4 > 1/2");
    if (alphas.empty()) fail("no tuples");
    if (etas.size() != alphas.size()) fail("eta count differs from tuple count");
    for (std::size_t n = 1; n <= n_max(); ++n) {
      alpha(n).validate(tol);
      if (alpha(n).delta != delta || alpha(n).C != C) fail("tuple constants differ from (delta, C)");
      if (!(eta(n) > 0.0)) fail("eta must be positive");
      if (n > 1 && !(eta(n) < eta(n - 1))) fail("etas must strictly decrease");
    }
    const double room = 2.0 * std::pow(1.0 - delta, 4) - 1.0;
    for (std::size_t m = 1; m <= n_max(); ++m)
      for (std::size_t n = 1; n <= n_max(); ++n)
        if (m != n && !(std::abs(pairing(alpha(m).f0, alpha(n).x0)) < room)) fail("|<f_m,x_n>| >= 2(1-delta)^4 - 1");
    std::size_t prev = 0;
    for (std::size_t n = 1; n <= n_max(); ++n) {
      const auto e = alpha(n).f0.entries();
      if (e.empty()) fail("f_n vanishes");
      if (e.front().first <= prev) fail("local finiteness: first support index of f_n must increase");
      prev = e.front().first;
      if (alpha(n).x0.support_max() > truncation || alpha(n).h0.support_max() > truncation)
        fail("tuple support exceeds truncation");
    }
  }
};

/// ⟦x⟧_n = ((1+η_n)^{−2}⟦x⟧²_{α_n} + τ_n‖x‖²)^{1/2}.
inline double n_norm_eval(const OmegaConfig& om, std::size_t n, const CoordVector& x, double tol)
{
  if (n < 1 || n > om.n_max()) throw std::out_of_range("n_norm_eval: index outside 1..n_max");
  const double s = slice_norm_eval(om.alpha(n), x, tol) / (1.0 + om.eta(n));
  const double nx = x.norm2();
  return std::sqrt(s * s + om.tau(n) * nx * nx);
}

enum class OmegaMode {
  /// Skip terms with |<f_n,x>| ≤ (1−δ)²‖x‖: on those ⟦x⟧_{α_n} = ‖x‖, so ⟦x⟧_n = ‖x‖.
  certified_skip,
  /// Evaluate every term below the cutoff.
  exhaustive,
};

/// ⟦x⟧_Ω = max{‖x‖, max_{n < n_x} ⟦x⟧_n}.
inline double omega_norm_eval(const OmegaConfig& om, const CoordVector& x, double tol,
                              OmegaMode mode = OmegaMode::certified_skip)
{
  if (x.support_max() > om.truncation) throw std::out_of_range("omega_norm_eval: support exceeds truncation");
  const double nx = x.norm2();
  double best = nx;
  const std::size_t cut = om.cutoff(x);
  const double bar = (1.0 - om.delta) * (1.0 - om.delta) * nx;
  for (std::size_t m = 1; m < cut; ++m) {
    if (mode == OmegaMode::certified_skip && std::abs(pairing(om.alpha(m).f0, x)) <= bar) continue;
    best = std::max(best, n_norm_eval(om, m, x, tol));
  }
  return best;
}

inline NormOracle omega_norm_oracle(const OmegaConfig& om, double tol, OmegaMode mode = OmegaMode::certified_skip)
{
  const double sq = (1.0 - om.delta) * (1.0 - om.delta);
  return {[om, tol, mode](const CoordVector& x) { return omega_norm_eval(om, x, tol, mode); }, 1.0, 1.0 / sq,
          std::string("omega_") + to_string(om.kind)};
}

inline NormOracle n_norm_oracle(const OmegaConfig& om, std::size_t n, double tol)
{
  const double sq = (1.0 - om.delta) * (1.0 - om.delta);
  return {[om, n, tol](const CoordVector& x) { return n_norm_eval(om, n, x, tol); }, 1.0, 1.0 / sq,
          "n_norm_" + std::to_string(n)};
}

/// Number of tuples that fit in coordinates 1..N for each model.
inline std::size_t model_capacity(TheoremKind kind, std::size_t N)
{
  switch (kind) {
    case TheoremKind::A: return N >= 2 ? N - 1 : 0;     // x_n = e_{n+1}
    case TheoremKind::B: return N >= 4 ? (N - 2) / 2 : 0; // h_n ∋ e_{2n+2}
    case TheoremKind::C: return N >= 3 ? (N - 1) / 2 : 0; // h_n = e_{2n+1}
  }
  return 0;
}

namespace detail {

/// max over ‖x‖ ≤ 1 of min(<f,x>, <g,x>) = min_θ ‖θf + (1−θ)g‖₂ (minimax).
inline double common_slice_level(const CoordFunctional& f, const CoordFunctional& g)
{
  const auto [theta, v] = golden_section_min(
    [&](double t) {
      CoordFunctional c = t * f;
      c.axpy(1.0 - t, g);
      return c.norm2();
    },
    0.0, 1.0, 1e-12);
  return std::min({v, f.norm2(), g.norm2()});
}

} // namespace detail

/// Canonical-basis instance of the tuples used for each theorem.
///
/// Cross pairings <f_m, x_n> are exactly 0, so every Ω inequality holds
/// with room to spare. η_n = 2^{−n}.
inline OmegaConfig make_model_omega(TheoremKind kind, double delta, std::size_t N, const ToleranceConfig& cfg = {})
{
  if (!admissible_delta(delta)) throw std::invalid_argument("make_model_omega: need 0 < delta < 1 with (1-delta)^4 > 1/2");
  if (N < 4) throw std::invalid_argument("make_model_omega: truncation must be at least 4");

  OmegaConfig om;
  om.delta = delta;
  om.kind = kind;
  om.truncation = N;
  om.C = kind == TheoremKind::B ? 2.0 * (1.0 + delta) : 1.0 + delta;
  om.witness_scale = kind == TheoremKind::A ? 1.0 + delta : 2.0 * (1.0 + delta);

  const std::size_t count = model_capacity(kind, N);
  if (count == 0) throw std::invalid_argument("make_model_omega: truncation too small for this model");

  if (kind == TheoremKind::B) {
    om.v0 = unit(N, 1);
    om.psi0 = unit<CoordFunctional>(N, 1);
  }

  for (std::size_t n = 1; n <= count; ++n) {
    AlphaTuple a;
    a.delta = delta;
    a.C = om.C;
    switch (kind) {
      case TheoremKind::A:
        a.x0 = unit(N, n + 1);
        a.h0 = unit(N, 1);
        a.f0 = unit<CoordFunctional>(N, n + 1);
        a.g0 = unit<CoordFunctional>(N, 1);
        break;
      case TheoremKind::B: {
        // f_n = e*_{2n+1}∘P0 and g_n = e*_{2n+2}∘P0 with P0 x = x − x_1 e_1.
        auto through_p0 = [&](std::size_t k) {
          CoordFunctional f = unit<CoordFunctional>(N, k);
          f.axpy(-f.coord(1), om.psi0);
          return f;
        };
        a.x0 = unit(N, 2 * n + 1);
        a.h0 = unit(N, 2 * n + 2) + om.v0;
        a.f0 = through_p0(2 * n + 1);
        a.g0 = through_p0(2 * n + 2);
        break;
      }
      case TheoremKind::C:
        a.x0 = unit(N, 2 * n);
        a.h0 = unit(N, 2 * n + 1);
        a.f0 = unit<CoordFunctional>(N, 2 * n);
        a.g0 = unit<CoordFunctional>(N, 2 * n + 1);
        break;
    }
    om.alphas.push_back(std::move(a));
    om.etas.push_back(std::ldexp(1.0, -static_cast<int>(n)));
  }
  om.validate();

  if (kind == TheoremKind::C) {
    // Local finiteness for this model rests on: no unit vector lies in two of
    // the slices {|<f_n,·>| > (1−δ)³}.
    const double level = std::pow(1.0 - delta, 3);
    om.slice_diameter = slice_diameter_estimate(l2_norm(), om.alpha(1).f0, level, std::min<std::size_t>(N, 3), cfg);
    double overlap = 0.0;
    for (std::size_t m = 1; m <= count; ++m)
      for (std::size_t n = m + 1; n <= count; ++n)
        for (double sign : {1.0, -1.0})
          overlap = std::max(overlap, detail::common_slice_level(om.alpha(m).f0, sign * om.alpha(n).f0));
    om.slice_overlap = overlap;
    if (!(overlap <= level)) throw invariant_error("make_model_omega: slices of distinct f_n intersect at level (1-delta)^3");
  }
  return om;
}

struct WitnessPair
{
  CoordVector a;
  CoordVector b;
  double lambda = 0.0;
};

/// a, b = λ_n x_n ∓ (1−λ_n)/C'·h_n with λ_n = 1/⟦x_n⟧_{α_n}.
inline WitnessPair witness_pair(const OmegaConfig& om, std::size_t n, double tol)
{
  if (n < 1 || n > om.n_max()) throw std::out_of_range("witness_pair: index outside 1..n_max");
  const AlphaTuple& al = om.alpha(n);
  WitnessPair w;
  w.lambda = 1.0 / slice_norm_eval(al, al.x0, tol);
  const double half = (1.0 - w.lambda) / om.witness_scale;
  w.a = w.lambda * al.x0;
  w.a.axpy(-half, al.h0);
  w.b = w.lambda * al.x0;
  w.b.axpy(half, al.h0);
  const double slack = 1.0 + 10.0 * tol;
  if (omega_norm_eval(om, w.a, tol) > slack || omega_norm_eval(om, w.b, tol) > slack)
    throw invariant_error("witness_pair: witness outside the unit ball");
  return w;
}

struct FailureRow
{
  std::size_t n = 0;
  double lambda = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  double norm_mid = 0.0;
  double separation = 0.0;
  double mid_lower = 0.0; ///< 1/(1+η_n)
};

struct FailureTable
{
  TheoremKind kind = TheoremKind::A;
  std::vector<FailureRow> rows;
  bool midpoint_monotone = true;
  bool within_ball = true;
  bool above_lower = true;
};

/// Witness quantities for n = 1..n_max.
///
/// Separation is ‖b_n − a_n‖ for kinds A and C and |<ψ0, b_n − a_n>| for B.
inline FailureTable failure_report(const OmegaConfig& om, std::size_t n_max, double tol)
{
  if (n_max > om.n_max()) throw std::out_of_range("failure_report: n_max exceeds truncation capacity");
  FailureTable t;
  t.kind = om.kind;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto w = witness_pair(om, n, tol);
    FailureRow r;
    r.n = n;
    r.lambda = w.lambda;
    r.norm_a = omega_norm_eval(om, w.a, tol);
    r.norm_b = omega_norm_eval(om, w.b, tol);
    r.norm_mid = omega_norm_eval(om, 0.5 * (w.a + w.b), tol);
    const CoordVector diff = w.b - w.a;
    r.separation = om.kind == TheoremKind::B ? std::abs(pairing(om.psi0, diff)) : diff.norm2();
    r.mid_lower = 1.0 / (1.0 + om.eta(n));
    t.within_ball = t.within_ball && r.norm_a <= 1.0 + 1e-9 && r.norm_b <= 1.0 + 1e-9 && r.norm_mid <= 1.0 + 1e-9;
    t.above_lower = t.above_lower && r.norm_mid >= r.mid_lower - 1e-12;
    if (!t.rows.empty()) t.midpoint_monotone = t.midpoint_monotone && r.norm_mid >= t.rows.back().norm_mid - 1e-12;
    t.rows.push_back(r);
  }
  return t;
}

} // namespace renorm::slice
