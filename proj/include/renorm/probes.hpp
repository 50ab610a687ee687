#pragma once

#include "renorm/ascent.hpp"
#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/gauge.hpp"
#include "renorm/norm_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace renorm {

namespace detail {

inline AscentOptions ascent_options(const ToleranceConfig& cfg, std::uint64_t salt)
{
  AscentOptions opt;
  opt.budget = cfg.optimizer_budget;
  opt.random_starts = cfg.random_starts;
  opt.seed = cfg.rng_seed ^ (salt * 0x9E3779B97F4A7C15ull);
  return opt;
}

inline CoordVector block(const Eigen::VectorXd& p, int b, int dim)
{
  return CoordVector(Eigen::VectorXd(p.segment(b * dim, dim)));
}

inline Eigen::VectorXd basis_params(int dim, int i) { return Eigen::VectorXd::Unit(dim, i); }

inline Eigen::VectorXd pair_params(int dim, int i, double si, int j, double sj)
{
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2 * dim);
  p[i] = si;
  p[dim + j] = sj;
  return p;
}

} // namespace detail

/// An analytic majorant for a dual norm, with its provenance.
struct DualCertificate
{
  double upper = std::numeric_limits<double>::infinity();
  std::string source;
};

struct DualBounds
{
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::string upper_source;
  CoordVector argmax;
};

/// Two-sided bounds on sup{<φ,x> : norm(x) ≤ 1}.
///
/// The lower bound is the best ratio <φ,x>/norm(x) found by multi-start
/// ascent over the sphere of ℝ^dim. The upper bound is the smallest available
/// majorant: Hölder with the oracle's declared lower constant, tightened by
/// the caller's certificate when one is supplied.
inline DualBounds dual_norm_bounds(const NormOracle& norm, const CoordFunctional& phi, std::size_t dim,
                                   const ToleranceConfig& cfg, std::optional<DualCertificate> certificate = {})
{
  cfg.validate();
  if (phi.truncated(dim).is_zero()) return {0.0, 0.0, "zero functional", CoordVector(dim)};

  const int d = static_cast<int>(dim);
  const CoordFunctional f = phi.truncated(dim);
  auto objective = [&](const Eigen::VectorXd& p) {
    const CoordVector x(p);
    const double n = norm(x);
    return n > 0.0 ? pairing(f, x) / n : -std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> seeds;
  for (int i = 0; i < d; ++i) {
    seeds.push_back(detail::basis_params(d, i));
    seeds.push_back(-detail::basis_params(d, i));
  }
  seeds.push_back(f.dense());
  seeds.push_back(f.dense().array().sign().matrix());

  const auto res = maximize_on_spheres(objective, SphereProduct{1, d}, std::move(seeds), detail::ascent_options(cfg, 1));

  DualBounds out;
  out.lower = std::max(0.0, res.value);
  out.argmax = CoordVector(res.arg);
  out.upper = reference_dual_norm(norm.reference(), f) / norm.lo();
  out.upper_source = "hoelder/equivalence";
  if (certificate && certificate->upper < out.upper) {
    out.upper = certificate->upper;
    out.upper_source = certificate->source;
  }
  return out;
}

/// Side condition on the pair (x, y) in a midpoint probe.
struct ProbeConstraint
{
  enum class Kind { none, direction, functional };

  Kind kind = Kind::none;
  CoordVector direction;
  CoordFunctional functional;

  /// ref(x − y) = t (uniform rotundity).
  static ProbeConstraint none() { return {}; }
  /// y − x = t·v (rotundity in direction v).
  static ProbeConstraint along(CoordVector v) { return {Kind::direction, std::move(v), {}}; }
  /// |<ψ, x − y>| = t (weak uniform rotundity against ψ).
  static ProbeConstraint against(CoordFunctional psi) { return {Kind::functional, {}, std::move(psi)}; }
};

struct ProbeResult
{
  double value = 0.0;
  CoordVector x;
  CoordVector y;
  long evaluations = 0;
};

/// Lower estimate of sup{ norm((x+y)/2) : norm(x), norm(y) ≤ 1, constraint(x − y, t) }.
///
/// The midpoint is parametrized as s·u and the difference as d(w); for fixed
/// (u, w) the largest admissible s is found by bisection, since
/// s ↦ max(norm(su + d/2), norm(su − d/2)) is even and convex.
inline ProbeResult midpoint_sup_probe(const NormOracle& norm, double t, const ProbeConstraint& constraint, std::size_t dim,
                                      const ToleranceConfig& cfg)
{
  cfg.validate();
  if (!(t > 0.0)) throw std::invalid_argument("midpoint_sup_probe: separation must be positive");
  const int d = static_cast<int>(dim);
  using Kind = ProbeConstraint::Kind;

  CoordVector fixed_diff;
  if (constraint.kind == Kind::direction) {
    if (constraint.direction.truncated(dim).is_zero()) throw std::invalid_argument("midpoint_sup_probe: zero direction");
    fixed_diff = t * constraint.direction.truncated(dim);
  }
  if (constraint.kind == Kind::functional && constraint.functional.truncated(dim).is_zero())
    throw std::invalid_argument("midpoint_sup_probe: zero functional");

  const int blocks = constraint.kind == Kind::direction ? 1 : 2;

  auto difference = [&](const Eigen::VectorXd& p) -> std::optional<CoordVector> {
    switch (constraint.kind) {
      case Kind::direction:
        return fixed_diff;
      case Kind::none: {
        CoordVector w = detail::block(p, 1, d);
        const double r = norm.ref(w);
        if (r == 0.0) return std::nullopt;
        return (t / r) * w;
      }
      case Kind::functional: {
        CoordVector w = detail::block(p, 1, d);
        const double a = std::abs(pairing(constraint.functional, w));
        if (a < 1e-12) return std::nullopt;
        return (t / a) * w;
      }
    }
    return std::nullopt;
  };

  auto pair_at = [&](const Eigen::VectorXd& p, double& value) -> std::optional<std::pair<CoordVector, CoordVector>> {
    const auto diff = difference(p);
    if (!diff) return std::nullopt;
    const CoordVector half = 0.5 * *diff;
    const double nh = norm(half);
    if (nh > 1.0) return std::nullopt;
    const CoordVector u = detail::block(p, 0, d);
    const double nu = norm(u);
    if (nu == 0.0) return std::nullopt;
    auto feasible = [&](double s) {
      const CoordVector m = s * u;
      return norm(m + half) <= 1.0 && norm(m - half) <= 1.0;
    };
    const double hi = (1.0 + nh) / nu;
    const double s = largest_feasible(feasible, hi, 1e-13 * hi);
    if (s < 0.0) return std::nullopt;
    value = s * nu;
    const CoordVector m = s * u;
    return std::make_pair(m - half, m + half);
  };

  auto objective = [&](const Eigen::VectorXd& p) {
    double v = -std::numeric_limits<double>::infinity();
    return pair_at(p, v) ? v : -std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> seeds;
  if (blocks == 1) {
    for (int i = 0; i < d; ++i) seeds.push_back(detail::basis_params(d, i));
  } else {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) seeds.push_back(detail::pair_params(d, i, 1.0, j, 1.0));
    if (constraint.kind == Kind::functional) {
      const Eigen::VectorXd psi = constraint.functional.truncated(dim).dense();
      for (int i = 0; i < d; ++i) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(2 * d);
        p[i] = 1.0;
        p.segment(d, d) = psi;
        seeds.push_back(p);
      }
    }
  }

  const auto res = maximize_on_spheres(objective, SphereProduct{blocks, d}, std::move(seeds), detail::ascent_options(cfg, 2));
  if (!std::isfinite(res.value)) throw infeasible_error("midpoint_sup_probe: no feasible pair for this separation");

  ProbeResult out;
  out.evaluations = res.evaluations;
  double v = 0.0;
  const auto xy = pair_at(res.arg, v);
  out.value = v;
  out.x = xy->first;
  out.y = xy->second;
  return out;
}

/// Lower estimate of sup{ ref(x − y) : x, y in B ∩ {<f,·> ≥ r} }.
///
/// The slice is closed, so r equal to the maximum of f on the ball gives a
/// single point. Boundary points are parametrized radially from an interior
/// point of the slice.
inline double slice_diameter_estimate(const NormOracle& norm, const CoordFunctional& f, double r, std::size_t dim,
                                      const ToleranceConfig& cfg)
{
  cfg.validate();
  const auto top = dual_norm_bounds(norm, f, dim, cfg);
  const double fmax = top.lower;
  const double slack = 1e-9 * std::max(1.0, std::abs(r));
  if (fmax < r - slack) throw infeasible_error("slice_diameter_estimate: empty slice");
  if (fmax - r <= slack) return 0.0;

  const int d = static_cast<int>(dim);
  const CoordVector peak = top.argmax / norm(top.argmax);
  const double theta = (std::max(r, 0.0) + fmax) / (2.0 * fmax);
  const CoordVector centre = theta * peak;
  const double reach = 2.0 / norm.lo();

  auto member = [&](const CoordVector& x) { return norm(x) <= 1.0 && pairing(f, x) >= r; };
  auto boundary = [&](const CoordVector& u) {
    const double rho = largest_feasible([&](double s) { return member(centre + s * u); }, reach, 1e-12 * reach);
    return centre + std::max(rho, 0.0) * u;
  };
  auto objective = [&](const Eigen::VectorXd& p) {
    return norm.ref(boundary(detail::block(p, 0, d)) - boundary(detail::block(p, 1, d)));
  };

  std::vector<Eigen::VectorXd> seeds;
  for (int i = 0; i < d; ++i) seeds.push_back(detail::pair_params(d, i, 1.0, i, -1.0));
  if (d <= 12)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        seeds.push_back(detail::pair_params(d, i, 1.0, j, 1.0));
        seeds.push_back(detail::pair_params(d, i, 1.0, j, -1.0));
      }

  const auto res = maximize_on_spheres(objective, SphereProduct{2, d}, std::move(seeds), detail::ascent_options(cfg, 3));
  return std::max(0.0, res.value);
}

} // namespace renorm
