#include "renorm/slice/omega.hpp"
#include "renorm/slice/slice_norm.hpp"
#include "renorm/testkit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace renorm;
using namespace renorm::slice;

namespace {

constexpr double kTol = 1e-10;

// Closed-form values of the canonical model at δ = 0.1: the B̂ gauge of x_n
// is 1/(1−δ)² and ‖P_α x_n‖ = 1.
double model_eps(double C) { return slice_epsilon(0.1, C); }
double model_xn_norm(double C) { return std::sqrt(1.0 / 0.81 + model_eps(C)); }

AlphaTuple section_alpha()
{
  AlphaTuple a;
  a.x0 = unit(3, 2);
  a.h0 = unit(3, 1);
  a.f0 = unit<CoordFunctional>(3, 2);
  a.g0 = unit<CoordFunctional>(3, 1);
  a.delta = 0.1;
  a.C = 1.1;
  return a;
}

CoordVector random_point(Rng& rng, std::size_t dim)
{
  std::normal_distribution<double> g(0.0, 1.0);
  CoordVector x(dim);
  for (std::size_t k = 1; k <= dim; ++k) x.set_coord(k, g(rng));
  return x;
}

} // namespace

TEST(AlphaTuple, ValidationNamesViolation)
{
  auto a = section_alpha();
  EXPECT_NO_THROW(a.validate());
  a.f0 = CoordFunctional{0.1, 1.0, 0.0};
  EXPECT_THROW(a.validate(), invariant_error);
  a = section_alpha();
  a.delta = 0.2;
  EXPECT_THROW(a.validate(), invariant_error);
  EXPECT_TRUE(admissible_delta(0.1));
  EXPECT_FALSE(admissible_delta(0.16));
}

TEST(SliceNorm, EpsilonClosedForm)
{
  EXPECT_NEAR(slice_epsilon(0.1, 1.1), 0.19 / (2.21 * 2.21), 1e-16);
  EXPECT_NEAR(slice_epsilon(0.1, 1.1), 0.0389017, 1e-7);
}

TEST(SliceNorm, Projection)
{
  const auto om = make_model_omega(TheoremKind::A, 0.1, 8);
  const auto& a = om.alpha(2);
  EXPECT_TRUE(project_alpha(a, a.h0).is_zero());
  const CoordVector y = 2.0 * unit(8, 3) - 0.5 * unit(8, 5);
  EXPECT_EQ(project_alpha(a, y), y);
  EXPECT_EQ(project_alpha(a, unit(8, 1) + 2.0 * unit(8, 3)), 2.0 * unit(8, 3));

  Rng rng = derived_rng(21, 0);
  const auto omb = make_model_omega(TheoremKind::B, 0.1, 12);
  for (int s = 0; s < 200; ++s) {
    const auto x = random_point(rng, 12);
    for (std::size_t n = 1; n <= omb.n_max(); ++n) {
      const auto& al = omb.alpha(n);
      const auto p = project_alpha(al, x);
      EXPECT_NEAR(pairing(al.g0, p), 0.0, 1e-14);
      EXPECT_NEAR(pairing(al.f0, p), pairing(al.f0, x), 1e-14);
    }
  }
}

TEST(BhatGauge, ModelValues)
{
  const auto om = make_model_omega(TheoremKind::A, 0.1, 10);
  for (std::size_t n : {1u, 4u, 9u}) EXPECT_NEAR(bhat_gauge(om.alpha(n), om.alpha(n).x0, kTol), 1.0 / 0.81, 1e-9);
  const auto a = section_alpha();
  EXPECT_NEAR(bhat_gauge(a, unit(3, 3), kTol), 1.0, 1e-9);
  EXPECT_EQ(bhat_gauge(a, CoordVector(3), kTol), 0.0);
  EXPECT_THROW(bhat_gauge(a, unit(3, 1), kTol), std::invalid_argument);
}

TEST(BhatGauge, AgreesWithRayScanOnSection)
{
  const auto a = section_alpha();
  auto member = [&](const CoordVector& y) { return testkit::bhat_contains_by_scan(a, y, 4000); };
  for (const CoordVector& y : {CoordVector{0.0, 1.0, 0.0}, CoordVector{0.0, 0.6, 0.8}, CoordVector{0.0, -0.3, 1.7},
                               CoordVector{0.0, 2.0, -0.5}}) {
    const auto scan = testkit::gauge_by_ray_scan(member, y, 0.05, 4.0, 20000);
    EXPECT_NEAR(bhat_gauge(a, y, kTol), scan.value, 1e-3);
  }
}

TEST(BhatGauge, MembershipMatchesImageSampling)
{
  Rng rng = derived_rng(22, 0);
  const auto om = make_model_omega(TheoremKind::B, 0.1, 8);
  const auto& a = om.alpha(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 500; ++s) {
    // Image points P_α x with ‖x‖ ≤ 1 inside the slab are members.
    auto x = random_point(rng, 8);
    x = (std::abs(u(rng)) / x.norm2()) * x;
    const auto y = project_alpha(a, x);
    if (std::abs(pairing(a.f0, y)) <= a.squeeze()) EXPECT_TRUE(bhat_contains(a, y, kTol));
    // Golden-section membership agrees with a dense scan away from the boundary.
    const auto z = project_alpha(a, 1.5 * random_point(rng, 8));
    bool near = false;
    for (double s2 : {0.999, 1.001}) near = near || bhat_contains(a, s2 * z, kTol) != bhat_contains(a, z, kTol);
    if (!near) EXPECT_EQ(bhat_contains(a, z, kTol), testkit::bhat_contains_by_scan(a, z, 20000));
  }
}

TEST(BhatGauge, ContainsSqueezedKernelBall)
{
  Rng rng = derived_rng(23, 0);
  const auto a = section_alpha();
  for (int s = 0; s < 200; ++s) {
    auto y = random_point(rng, 3);
    y.set_coord(1, 0.0);
    y = (0.81 / y.norm2()) * y;
    EXPECT_LE(bhat_gauge(a, y, kTol), 1.0 + kTol);
  }
}

TEST(SliceNorm, ModelValueOfXn)
{
  for (auto kind : {TheoremKind::A, TheoremKind::C}) {
    const auto om = make_model_omega(kind, 0.1, 20);
    for (std::size_t n = 1; n <= om.n_max(); ++n)
      EXPECT_NEAR(slice_norm_eval(om.alpha(n), om.alpha(n).x0, kTol), model_xn_norm(1.1), 1e-9);
  }
  EXPECT_NEAR(1.0 / model_xn_norm(1.1), 0.886147, 1e-6);

  // Independent check: scan the whole ball along the ray through x_n.
  const auto a = section_alpha();
  auto member = [&](const CoordVector& x) { return slice_norm_eval(a, x, kTol) <= 1.0; };
  const auto scan = testkit::gauge_by_ray_scan(member, a.x0, 0.5, 2.0, 100000);
  EXPECT_NEAR(slice_norm_eval(a, a.x0, kTol), scan.value, scan.error_bound);
}

TEST(SliceNorm, LemmaIntervalAndSegment)
{
  for (auto kind : {TheoremKind::A, TheoremKind::B, TheoremKind::C}) {
    const auto om = make_model_omega(kind, 0.1, 16);
    for (std::size_t n = 1; n <= om.n_max(); ++n) {
      const auto& al = om.alpha(n);
      const auto k = slice_constants(al, kTol);
      EXPECT_GE(k.lambda0, k.lambda_lo);
      EXPECT_LE(k.lambda0, k.lambda_hi);
      for (int i = 0; i <= 20; ++i) {
        const double s = -1.0 + 2.0 * i / 20.0;
        CoordVector p = k.lambda0 * al.x0;
        p.axpy(s * (1.0 - k.lambda0) / al.C, al.h0);
        EXPECT_NEAR(slice_norm_eval(al, p, kTol), 1.0, 1e-9);
      }
    }
  }
}

TEST(SliceNorm, CoincidenceRegion)
{
  Rng rng = derived_rng(24, 0);
  const auto om = make_model_omega(TheoremKind::B, 0.1, 10);
  const auto& al = om.alpha(2);
  int hits = 0;
  for (int s = 0; s < 4000 && hits < 1000; ++s) {
    const auto x = random_point(rng, 10);
    if (std::abs(pairing(al.f0, x)) > al.squeeze() * x.norm2()) continue;
    ++hits;
    EXPECT_NEAR(slice_norm_eval(al, x, kTol), x.norm2(), 1e-12 * x.norm2());
  }
  EXPECT_EQ(hits, 1000);
}

TEST(Omega, SandwichChain)
{
  Rng rng = derived_rng(25, 0);
  for (auto kind : {TheoremKind::A, TheoremKind::B, TheoremKind::C}) {
    const auto om = make_model_omega(kind, 0.1, 10);
    const double sq = 0.81;
    for (int s = 0; s < 100; ++s) {
      auto x = random_point(rng, 10);
      // Tilt towards some x_n so the slices are exercised.
      const std::size_t n = 1 + static_cast<std::size_t>(s) % om.n_max();
      x.axpy(4.0, om.alpha(n).x0);
      const double nx = x.norm2();
      for (std::size_t m = 1; m <= om.n_max(); ++m) {
        const double sl = slice_norm_eval(om.alpha(m), x, kTol);
        const double nn = n_norm_eval(om, m, x, kTol);
        EXPECT_LE(nx, nn + 1e-12);
        EXPECT_LE(nn, sl + 1e-12);
        EXPECT_LE(sl, nx / sq + 1e-12);
        EXPECT_LE(sl, (1.0 + om.eta(m)) * nn + 1e-12);
      }
      const double w = omega_norm_eval(om, x, kTol);
      EXPECT_LE(nx, w);
      EXPECT_LE(w, nx / sq + 1e-12);
      EXPECT_NEAR(w, omega_norm_eval(om, x, kTol, OmegaMode::exhaustive), 1e-14 * w);
    }
  }
}

TEST(Omega, CutoffTermsAreDominated)
{
  Rng rng = derived_rng(26, 0);
  const auto om = make_model_omega(TheoremKind::C, 0.1, 14);
  for (int s = 0; s < 50; ++s) {
    CoordVector x = random_point(rng, 6).padded(14);
    const std::size_t cut = om.cutoff(x);
    for (std::size_t m = cut; m <= om.n_max(); ++m) EXPECT_LE(n_norm_eval(om, m, x, kTol), x.norm2() * (1.0 + 1e-14));
  }
}

TEST(Omega, BasicValues)
{
  const auto om = make_model_omega(TheoremKind::A, 0.1, 12);
  EXPECT_EQ(omega_norm_eval(om, unit(12, 1), kTol), 1.0);
  const CoordVector x = unit(12, 3) - 0.4 * unit(12, 1) + 0.2 * unit(12, 7);
  const double vx = omega_norm_eval(om, x, kTol);
  // Each evaluation is accurate to kTol relative.
  EXPECT_NEAR(omega_norm_eval(om, 2.0 * x, kTol), 2.0 * vx, 4.0 * kTol * vx);
  EXPECT_THROW(omega_norm_eval(om, unit(13, 13), kTol), std::out_of_range);
  EXPECT_THROW(n_norm_eval(om, 0, x, kTol), std::out_of_range);

  OmegaConfig half = om;
  half.etas[0] = 0.5;
  EXPECT_NEAR(half.tau(1), 1.0 - 1.0 / 2.25, 1e-15);
}

TEST(Omega, ModelPairings)
{
  const auto A = make_model_omega(TheoremKind::A, 0.1, 20);
  const auto B = make_model_omega(TheoremKind::B, 0.1, 20);
  const auto C = make_model_omega(TheoremKind::C, 0.1, 20);
  EXPECT_EQ(A.n_max(), 19u);
  EXPECT_EQ(B.n_max(), 9u);
  EXPECT_EQ(C.n_max(), 9u);
  for (std::size_t n = 1; n <= A.n_max(); ++n) EXPECT_EQ(pairing(A.alpha(n).f0, A.alpha(n).x0), 1.0);
  for (std::size_t n = 1; n <= B.n_max(); ++n) EXPECT_EQ(pairing(B.alpha(n).g0, B.alpha(n).h0), 1.0);
  for (std::size_t m = 1; m <= C.n_max(); ++m)
    for (std::size_t n = 1; n <= C.n_max(); ++n)
      if (m != n) EXPECT_EQ(pairing(C.alpha(m).f0, C.alpha(n).x0), 0.0);
  EXPECT_LT(C.slice_overlap, std::pow(0.9, 3));
  EXPECT_NEAR(C.slice_overlap, std::sqrt(0.5), 1e-9);
  EXPECT_THROW(make_model_omega(TheoremKind::A, 0.2, 20), std::invalid_argument);
  EXPECT_THROW(make_model_omega(TheoremKind::B, 0.1, 3), std::invalid_argument);
}

TEST(Witness, KindA)
{
  const auto om = make_model_omega(TheoremKind::A, 0.1, 24);
  const double lambda = 1.0 / model_xn_norm(1.1);
  const double sep = 2.0 * (1.0 - lambda) / 1.1;
  EXPECT_NEAR(sep, 0.207006, 1e-6);
  const auto t = failure_report(om, 12, kTol);
  EXPECT_TRUE(t.within_ball);
  EXPECT_TRUE(t.above_lower);
  EXPECT_TRUE(t.midpoint_monotone);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r.lambda, lambda, 1e-9);
    EXPECT_NEAR(r.separation, sep, 1e-9);
    EXPECT_GE(r.norm_mid, 1.0 / (1.0 + std::ldexp(1.0, -static_cast<int>(r.n))) - 1e-12);
  }
}

TEST(Witness, KindBSeparationAgainstPsi0)
{
  const auto om = make_model_omega(TheoremKind::B, 0.1, 24);
  const double eps = slice_epsilon(0.1, 2.2);
  const double floor = (1.0 - 1.0 / std::sqrt(1.0 + eps)) / 1.1;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto w = witness_pair(om, n, kTol);
    const double s = std::abs(pairing(om.psi0, w.b - w.a));
    EXPECT_NEAR(s, (1.0 - w.lambda) / 1.1, 1e-12);
    EXPECT_GT(s, floor);
  }
}

TEST(Witness, KindCSeparation)
{
  const auto om = make_model_omega(TheoremKind::C, 0.1, 20);
  const auto t = failure_report(om, 9, kTol);
  EXPECT_TRUE(t.within_ball);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r.separation, (1.0 - r.lambda) / 1.1, 1e-12);
    EXPECT_GT(r.separation, 0.0);
  }
}

TEST(Omega, ConvexOnSection)
{
  const auto a = section_alpha();
  const NormOracle n([a](const CoordVector& x) { return slice_norm_eval(a, x, kTol); }, 1.0, 1.0 / 0.81, "slice");
  EXPECT_LE(testkit::convexity_midpoint_scan(n, 3, 2000, 5), 1e-9);
}
