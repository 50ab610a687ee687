#pragma once

#include "renorm/c0/level_set.hpp"
#include "renorm/c0/polyhedral.hpp"
#include "renorm/c0/schedule.hpp"
#include "renorm/config.hpp"
#include "renorm/coords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace renorm::c0 {

/// f = (Π_{j>1} 1/w_j, (1/h_2)Π_{j>2} 1/w_j, (1/h_3)Π_{j>3} 1/w_j, ...), products cut at N.
inline CoordFunctional dual_f(const ParamSchedule& P)
{
  const std::size_t N = P.depth();
  CoordFunctional f(N);
  f.set_coord(1, P.inv_w_product(2, N));
  for (std::size_t i = 2; i <= N; ++i) f.set_coord(i, P.inv_w_product(i + 1, N) / P.h(i));
  return f;
}

/// g = (0, Π_{j>2} 1/w_j, (1/h_3)Π_{j>3} 1/w_j, ...), products cut at N.
inline CoordFunctional dual_g(const ParamSchedule& P)
{
  const std::size_t N = P.depth();
  CoordFunctional g(N);
  g.set_coord(2, P.inv_w_product(3, N));
  for (std::size_t i = 3; i <= N; ++i) g.set_coord(i, P.inv_w_product(i + 1, N) / P.h(i));
  return g;
}

/// z_1 = e_1; z_n = r_n·z_{n−1} + e_n with r_n = (h_n − 1)/(h_n − δ).
inline std::vector<CoordVector> dual_witnesses(const ParamSchedule& P, std::size_t n_max)
{
  if (n_max < 1 || n_max > P.depth()) throw std::out_of_range("dual_witnesses: n_max outside [1, depth]");
  std::vector<CoordVector> z;
  z.push_back(unit(1, 1));
  for (std::size_t n = 2; n <= n_max; ++n) {
    CoordVector next = P.ratio(n) * z.back().padded(n);
    next.set_coord(n, 1.0);
    z.push_back(next);
  }
  return z;
}

/// Σ-domination majorant of |<f,·>| at depth n:
/// Π_{j>1}^n (1/w_j)|x_1| + Σ_{i=2}^n (1/h_i) Π_{j>i}^n (1/w_j)|x_i|.
/// With `from` = 2 the chain for g starts at the second coordinate instead.
inline double domination_majorant(const ParamSchedule& P, std::size_t n, const CoordVector& x, std::size_t from = 1)
{
  double s = P.inv_w_product(from + 1, n) * std::abs(x.coord(from));
  for (std::size_t i = from + 1; i <= n; ++i) s += P.inv_w_product(i + 1, n) / P.h(i) * std::abs(x.coord(i));
  return s;
}

struct DualWitnessRow
{
  std::size_t n = 0;
  CoordVector z;
  double one_norm = 0.0;   ///< ⦀P_n z_n⦀_{1,n}
  double inf_norm = 0.0;   ///< ⦀P_n z_n⦀_{∞,n}
  double final_norm = 0.0; ///< ⦀z_n⦀
  double final_bound = 0.0; ///< (1+η_n)²
  double pair_f = 0.0;
  double pair_g = 0.0;
  double product = 0.0; ///< Π_{j>n}^N 1/w_j
};

struct DualWitnessReport
{
  std::size_t depth = 0;
  std::size_t n_max = 0;
  CoordFunctional f;
  CoordFunctional g;
  std::vector<DualWitnessRow> rows; ///< n = 2..n_max

  std::size_t samples = 0;
  double cert_f_excess = -std::numeric_limits<double>::infinity(); ///< max of majorant − ⦀P_n x⦀_{∞,n}
  double cert_g_excess = -std::numeric_limits<double>::infinity();
  double f_upper = std::numeric_limits<double>::infinity();
  double g_upper = std::numeric_limits<double>::infinity();

  /// <(f+g)/2, z_{n_max}> / ⦀z_{n_max}⦀.
  double mid_lower = 0.0;
  /// (1+η_{n_max})^{−2} Π_{j>n_max}^N 1/w_j.
  double mid_reference = 0.0;

  double max_one_error = 0.0;
  double max_inf_error = 0.0;
  double max_pair_error = 0.0;
  double max_final_excess = -std::numeric_limits<double>::infinity();
};

/// Builds f, g, z_2..z_{n_max} and evaluates all witness identities and bounds.
///
/// The certificates are sampled at every depth 2..N on x uniform in [−1,1]^N;
/// when none is violated, ⦀f⦀*, ⦀g⦀* ≤ 1 because ⦀P_N x⦀_{∞,N} ≤ ⦀x⦀.
inline DualWitnessReport dual_witness_report(const SmoothC0Norm& L, std::size_t n_max, const ToleranceConfig& cfg,
                                             std::size_t samples = 10000)
{
  cfg.validate();
  const ParamSchedule& P = L.schedule();
  const std::size_t N = P.depth();
  if (n_max < 2 || n_max > N) throw std::out_of_range("dual_witness_report: n_max outside [2, depth]");

  DualWitnessReport rep;
  rep.depth = N;
  rep.n_max = n_max;
  rep.f = dual_f(P);
  rep.g = dual_g(P);
  const auto z = dual_witnesses(P, n_max);

  for (std::size_t n = 2; n <= n_max; ++n) {
    DualWitnessRow r;
    r.n = n;
    r.z = z[n - 1];
    r.one_norm = polyhedral_eval(P, PolyKind::one, n, r.z);
    r.inf_norm = polyhedral_eval(P, PolyKind::inf, n, r.z);
    r.final_norm = L(r.z);
    r.final_bound = (1.0 + P.eta(n)) * (1.0 + P.eta(n));
    r.pair_f = pairing(rep.f, r.z);
    r.pair_g = pairing(rep.g, r.z);
    r.product = P.inv_w_product(n + 1, N);
    rep.max_one_error = std::max(rep.max_one_error, std::abs(r.one_norm - 1.0));
    rep.max_inf_error = std::max(rep.max_inf_error, std::abs(r.inf_norm - 1.0));
    rep.max_pair_error = std::max({rep.max_pair_error, std::abs(r.pair_f - r.product), std::abs(r.pair_g - r.product)});
    rep.max_final_excess = std::max(rep.max_final_excess, r.final_norm - r.final_bound);
    rep.rows.push_back(r);
  }

  Rng rng = derived_rng(cfg.rng_seed, 0xd0a1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  rep.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    CoordVector x(N);
    for (std::size_t k = 1; k <= N; ++k) x.set_coord(k, u(rng));
    for (std::size_t n = 2; n <= N; ++n) {
      const double rhs = polyhedral_eval(P, PolyKind::inf, n, x);
      rep.cert_f_excess = std::max(rep.cert_f_excess, domination_majorant(P, n, x, 1) - rhs);
      rep.cert_g_excess = std::max(rep.cert_g_excess, domination_majorant(P, n, x, 2) - rhs);
    }
  }
  const double slack = 1e-12;
  if (rep.cert_f_excess <= slack) rep.f_upper = 1.0;
  if (rep.cert_g_excess <= slack) rep.g_upper = 1.0;

  const DualWitnessRow& last = rep.rows.back();
  rep.mid_lower = 0.5 * (last.pair_f + last.pair_g) / last.final_norm;
  rep.mid_reference = last.product / last.final_bound;
  return rep;
}

} // namespace renorm::c0
