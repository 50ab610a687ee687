#pragma once

#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/norm_oracle.hpp"
#include "renorm/slice/slice_norm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>
#include <stdexcept>

// Brute-force oracles for low-dimensional checks of the main evaluators.
// Each result carries its own error bound.

namespace renorm::testkit {

struct OracleValue
{
  double value = 0.0;
  double error_bound = 0.0;
};

/// Gauge by a uniform scan of t over [t_lo, t_hi]: the first t with x/t in
/// the set, reported as the midpoint of the transition step.
template <class Member>
OracleValue gauge_by_ray_scan(const Member& member, const CoordVector& x, double t_lo, double t_hi, long steps = 100000)
{
  if (x.dim() > 3) throw std::invalid_argument("gauge_by_ray_scan: dimension above 3");
  if (steps < 10000) throw std::invalid_argument("gauge_by_ray_scan: at least 1e4 steps");
  if (!(t_hi > t_lo) || !(t_lo > 0.0)) throw std::invalid_argument("gauge_by_ray_scan: bad scan range");
  const double h = (t_hi - t_lo) / static_cast<double>(steps);
  if (member(x / t_lo)) throw invalid_set_error("gauge_by_ray_scan: scan starts inside the set");
  for (long k = 1; k <= steps; ++k) {
    const double t = t_lo + h * static_cast<double>(k);
    if (member(x / t)) return {t - 0.5 * h, h};
  }
  throw invalid_set_error("gauge_by_ray_scan: no transition found");
}

/// Direction grid: the points of a uniform lattice with `resolution` cells per
/// edge lying on the surface of the cube [−radius, radius]^dim.
///
/// Vertices, edge midpoints and axis points are on the grid, so extreme
/// directions of ℓ1/ℓ∞-type balls are hit exactly.
struct ScanGrid
{
  int dim = 2;
  int resolution = 256;
  double radius = 1.0;

  void validate() const
  {
    if (dim < 1 || dim > 3) throw std::invalid_argument("ScanGrid: dimension must lie in [1, 3]");
    if (resolution < 64) throw std::invalid_argument("ScanGrid: resolution must be at least 64");
    if (resolution % 2) throw std::invalid_argument("ScanGrid: resolution must be even");
    if (!(radius > 0.0)) throw std::invalid_argument("ScanGrid: radius must be positive");
  }

  /// Bound on the angle between any direction and its nearest grid direction.
  double spacing() const { return 2.0 / resolution; }

  template <class F>
  void for_each_direction(const F& f) const
  {
    validate();
    const int m = resolution;
    auto coord = [&](int i) { return radius * (-1.0 + 2.0 * i / m); };
    // Each face {x_k = ±radius} in turn; points on edges are visited more than once.
    long face = 1;
    for (int k = 1; k < dim; ++k) face *= (m + 1);
    for (int k = 0; k < dim; ++k)
      for (double sign : {-1.0, 1.0})
        for (long c = 0; c < face; ++c) {
          CoordVector x(static_cast<std::size_t>(dim));
          long r = c;
          for (int j = 0; j < dim; ++j) {
            if (j == k) {
              x.set_coord(static_cast<std::size_t>(j + 1), sign * radius);
              continue;
            }
            x.set_coord(static_cast<std::size_t>(j + 1), coord(static_cast<int>(r % (m + 1))));
            r /= (m + 1);
          }
          f(x);
        }
  }
};

/// max over grid directions of <φ,x>/norm(x).
///
/// The error bound is first order in the spacing: moving a unit direction by
/// α changes the ratio by at most about 2‖φ‖₂·α/lo (lo against ℓ2).
inline OracleValue dual_by_sphere_scan(const NormOracle& norm, const CoordFunctional& phi, const ScanGrid& grid)
{
  double best = 0.0;
  grid.for_each_direction([&](const CoordVector& x) {
    const double n = norm(x);
    if (n > 0.0) best = std::max(best, pairing(phi, x) / n);
  });
  const double lo_l2 = norm.reference() == Reference::l2 ? norm.lo() : norm.lo() / std::sqrt(static_cast<double>(grid.dim));
  return {best, 2.0 * phi.norm2() * grid.spacing() / lo_l2 + best * grid.spacing()};
}

/// ‖x − y‖₂², which equals Q for the Euclidean norm.
inline double hilbert_q_oracle(const CoordVector& x, const CoordVector& y) { return (x - y).norm2() * (x - y).norm2(); }

/// max over random pairs of norm((x+y)/2) − (norm(x) + norm(y))/2.
///
/// Points are uniform in [−1,1]^dim.
inline double convexity_midpoint_scan(const NormOracle& norm, std::size_t dim, long samples, std::uint64_t seed)
{
  if (samples < 1000) throw std::invalid_argument("convexity_midpoint_scan: at least 1e3 samples");
  Rng rng = derived_rng(seed, 0xc0c0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    CoordVector x(dim), y(dim);
    for (std::size_t k = 1; k <= dim; ++k) {
      x.set_coord(k, u(rng));
      y.set_coord(k, u(rng));
    }
    worst = std::max(worst, norm(0.5 * (x + y)) - 0.5 * (norm(x) + norm(y)));
  }
  return worst;
}

/// B̂ membership with the line minimum taken over a dense t grid instead of
/// golden-section search; used as the oracle for bhat_contains.
inline bool bhat_contains_by_scan(const slice::AlphaTuple& a, const CoordVector& y, long steps = 20000)
{
  if (std::abs(pairing(a.f0, y)) > a.squeeze()) return false;
  const double span = 2.0 * y.norm2() / a.h0.norm2() + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= steps; ++k) {
    const double t = -span + 2.0 * span * static_cast<double>(k) / static_cast<double>(steps);
    CoordVector z = y;
    z.axpy(t, a.h0);
    best = std::min(best, z.norm2());
  }
  return best <= 1.0;
}

} // namespace renorm::testkit
