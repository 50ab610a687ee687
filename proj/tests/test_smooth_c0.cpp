#include "renorm/c0/bump.hpp"
#include "renorm/c0/dual_witness.hpp"
#include "renorm/c0/level_set.hpp"
#include "renorm/c0/polyhedral.hpp"
#include "renorm/c0/schedule.hpp"
#include "renorm/c0/smoothing.hpp"
#include "renorm/testkit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace renorm;
using namespace renorm::c0;

namespace {

const ParamSchedule& schedule_q()
{
  static const ParamSchedule P = build_schedule(0.25, 8);
  return P;
}

const SmoothC0Norm& norm_q()
{
  static const SmoothC0Norm L(schedule_q());
  return L;
}

CoordVector random_box(Rng& rng, std::size_t dim)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoordVector x(dim);
  for (std::size_t k = 1; k <= dim; ++k) x.set_coord(k, u(rng));
  return x;
}

} // namespace

TEST(Schedule, ReferenceValues)
{
  const auto& P = schedule_q();
  EXPECT_EQ(P.c(1), 1.0);
  EXPECT_DOUBLE_EQ(P.w_upper(2), 1.2);
  EXPECT_DOUBLE_EQ(P.w(2), 1.1);
  EXPECT_DOUBLE_EQ(P.h(2), 2.75);
  EXPECT_DOUBLE_EQ(P.c(8), 2.0 - std::ldexp(1.0, -7));
  EXPECT_DOUBLE_EQ(P.ratio(2), 0.7);
}

TEST(Schedule, AuditPassesWithSlack)
{
  for (double delta : {0.25, 0.1, 0.01})
    for (std::size_t N : {2u, 5u, 8u, 12u}) {
      const auto P = build_schedule(delta, N);
      const auto audit = P.audit();
      ASSERT_EQ(audit.size(), 8u);
      for (const auto& c : audit) EXPECT_TRUE(c.pass) << c.name << " slack " << c.slack;
      for (std::size_t n = 2; n <= N; ++n) EXPECT_GT(P.h(n), 1.0);
      for (std::size_t n = 3; n <= N; ++n) EXPECT_GE(P.h(n), P.h(n - 1));
    }
}

TEST(Schedule, RejectsBadInput)
{
  EXPECT_THROW(build_schedule(0.3, 8), std::invalid_argument);
  EXPECT_THROW(build_schedule(0.0, 8), std::invalid_argument);
  EXPECT_THROW(build_schedule(0.25, 1), std::invalid_argument);
  EXPECT_THROW(schedule_q().w(1), std::out_of_range);
}

TEST(Polyhedral, ReferenceValues)
{
  const auto& P = schedule_q();
  EXPECT_EQ(polyhedral_eval(P, PolyKind::inf, 1, CoordVector{-0.3, 5.0}), 0.3);
  EXPECT_NEAR(polyhedral_eval(P, PolyKind::one, 2, CoordVector{0.7, 1.0}), 1.0, 1e-15);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(polyhedral_eval(P, PolyKind::inf, n, unit(8, n)), 1.0);
  EXPECT_THROW(polyhedral_eval(P, PolyKind::one, 1, unit(8, 1)), std::out_of_range);
  EXPECT_THROW(polyhedral_eval(P, PolyKind::inf, 9, unit(8, 1)), std::out_of_range);
}

TEST(Polyhedral, ListSizesAndSymmetry)
{
  const auto& P = schedule_q();
  EXPECT_EQ(functional_list(P, PolyKind::inf, 1).size(), 2u);
  EXPECT_EQ(functional_list(P, PolyKind::inf, 2).size(), 8u);
  std::size_t v = 2;
  for (std::size_t n = 2; n <= 8; ++n) {
    v = 3 * v + 2;
    const auto L = functional_list(P, PolyKind::inf, n);
    EXPECT_EQ(L.size(), v);
    for (Eigen::Index i = 0; i < L.rows.rows(); ++i) {
      bool found = false;
      for (Eigen::Index j = 0; j < L.rows.rows() && !found; ++j) found = (L.rows.row(i) + L.rows.row(j)).isZero(0.0);
      ASSERT_TRUE(found) << "row " << i << " has no negative at depth " << n;
    }
  }
  const auto deep = build_schedule(0.25, 11);
  EXPECT_THROW(functional_list(deep, PolyKind::inf, 11), std::length_error);
  EXPECT_EQ(functional_list(deep, PolyKind::inf, 10).size(), 59048u);
}

TEST(Polyhedral, ListMatchesRecursionAndSandwich)
{
  const auto& P = schedule_q();
  Rng rng = derived_rng(31, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto inf = functional_list(P, PolyKind::inf, n);
    const auto one = functional_list(P, PolyKind::one, n);
    for (int s = 0; s < 1000; ++s) {
      const auto x = random_box(rng, n);
      const double vi = polyhedral_eval(P, PolyKind::inf, n, x);
      const double vo = polyhedral_eval(P, PolyKind::one, n, x);
      ASSERT_NEAR(inf.max_abs(x), vi, 1e-12);
      ASSERT_NEAR(one.max_abs(x), vo, 1e-12);
      ASSERT_LE(x.norm_inf(), vi);
      ASSERT_LE(vi, P.c(n) * x.norm_inf() + 1e-15);
    }
  }
}

TEST(Smoothing, Exponent)
{
  EXPECT_EQ(smoothing_exponent(8, 0.1), 22);
  EXPECT_EQ(smoothing_exponent(2, 1.0), 2);
  EXPECT_THROW(smoothing_exponent(0, 0.1), std::invalid_argument);
  for (std::size_t J : {2u, 8u, 52u, 4372u})
    for (double eta : {0.5, 0.01, 1e-4}) {
      const int p = smoothing_exponent(J, eta);
      EXPECT_EQ(p % 2, 0);
      EXPECT_LE(std::pow(static_cast<double>(J), 1.0 / p), 1.0 + eta);
      if (p > 2) {
        EXPECT_GT(std::pow(static_cast<double>(J), 1.0 / (p - 2)), 1.0 + eta);
      }
    }
}

TEST(Smoothing, SingleCoordinate)
{
  FunctionalList L{functional_list(schedule_q(), PolyKind::inf, 1).rows};
  const SmoothAggNorm S(L, 0.3);
  const double x1 = -1.7;
  EXPECT_NEAR(S(CoordVector{x1}), std::abs(x1) * std::pow(2.0, 1.0 / S.exponent()), 1e-15);
  EXPECT_LE(S(CoordVector{x1}), 1.3 * std::abs(x1));
}

TEST(Smoothing, SandwichAndGradient)
{
  const auto& L = norm_q();
  Rng rng = derived_rng(32, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto& S = L.agg(n);
    for (int s = 0; s < 1000; ++s) {
      const auto x = random_box(rng, n);
      const double m = S.max_eval(x), a = S(x);
      ASSERT_LE(m, a * (1.0 + 1e-15));
      ASSERT_LE(a, (1.0 + S.eta()) * m);
    }
    std::normal_distribution<double> g(0.0, 1.0);
    for (int s = 0; s < 20; ++s) {
      CoordVector x(n);
      for (std::size_t k = 1; k <= n; ++k) x.set_coord(k, g(rng));
      x = x / x.norm2();
      const Eigen::VectorXd grad = S.gradient(x);
      for (std::size_t k = 1; k <= n; ++k) {
        const double h = 1e-6;
        CoordVector xp = x, xm = x;
        xp.set_coord(k, x.coord(k) + h);
        xm.set_coord(k, x.coord(k) - h);
        const double fd = (S(xp) - S(xm)) / (2.0 * h);
        EXPECT_NEAR(grad[static_cast<Eigen::Index>(k - 1)], fd, 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Bump, ThresholdAndNormalization)
{
  const BumpFunction B(0.1);
  const double a = 1.0 / 1.1;
  EXPECT_EQ(B.threshold(), a);
  EXPECT_EQ(B(0.0), std::make_pair(0.0, 0.0));
  EXPECT_EQ(B(a), std::make_pair(0.0, 0.0));
  EXPECT_EQ(B.value(1.0), 1.0);
  EXPECT_NEAR(B.derivative(1.0), std::exp(B.log_normalization() - 1.0 / (1.0 - a)), 1e-12 * B.derivative(1.0));
  EXPECT_GT(B.value(1.0 + 1e-9), 1.0);
  EXPECT_GT(B.value(1.5), 1.0);
  EXPECT_THROW(B.value(-0.1), std::invalid_argument);
}

TEST(Bump, MatchesDirectQuadrature)
{
  // For a moderate η the original integrand is representable; compare with a
  // composite Simpson rule on ∫_a^t exp(−1/(u−a)) du.
  const BumpFunction B(0.5);
  const double a = 1.0 / 1.5;
  auto integral = [&](double t) {
    const int m = 200000;
    const double h = (t - a) / m;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double u = a + i * h;
      const double f = u <= a ? 0.0 : std::exp(-1.0 / (u - a));
      s += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
  };
  const double z = integral(1.0);
  for (double t : {0.7, 0.8, 0.9, 1.2, 1.6}) EXPECT_NEAR(B.value(t), integral(t) / z, 1e-9);
}

TEST(Bump, MonotoneAndConvex)
{
  for (double eta : {0.02, 0.001}) {
    const BumpFunction B(eta);
    const double a = B.threshold();
    double prev_v = 0.0, prev_d = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = a + (1.05 - a) * i / 400.0;
      const auto [v, d] = B(t);
      EXPECT_GE(v, prev_v);
      EXPECT_GE(d, prev_d);
      prev_v = v;
      prev_d = d;
    }
    for (int i = 1; i < 100; ++i) {
      const double s = a * 0.9 + (1.05 - a * 0.9) * i / 100.0, t = s + 0.01;
      EXPECT_LE(B.value(0.5 * (s + t)), 0.5 * (B.value(s) + B.value(t)) + 1e-12);
    }
  }
}

TEST(LevelSet, PropertiesTwoAndThree)
{
  const auto& L = norm_q();
  const auto& P = L.schedule();
  Rng rng = derived_rng(33, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int s = 0; s < 300; ++s) {
      auto x = random_box(rng, n);
      if (s % 2 == 0) x.set_coord(n, x.coord(n) * P.delta() / 2.0 * 0.999);
      const auto ch = L.chain(x, n);
      const auto& c = ch.back();
      ASSERT_LE(c.max(), c.gauge * (1.0 + 1e-12));
      ASSERT_LE(c.gauge, (1.0 + P.eta(n)) * c.max() * (1.0 + 1e-12));
      const double inf = polyhedral_eval(P, PolyKind::inf, n, x);
      ASSERT_LE(inf, c.gauge * (1.0 + 1e-12));
      ASSERT_LE(c.gauge, P.eta_product(n) * inf * (1.0 + 1e-12));
      if (std::abs(x.coord(n)) <= P.delta() / 2.0 * x.norm_inf()) {
        ASSERT_NEAR(c.gauge, c.prev, 1e-12 * c.prev);
      }
    }
  }
}

TEST(LevelSet, SingleCoordinateAndFreeze)
{
  const auto& L = norm_q();
  for (std::size_t n = 2; n <= 8; ++n) {
    const double g = L.level(n, 0.8 * unit(8, n));
    EXPECT_GE(g, 0.8 * (1.0 - L.tol()));
    EXPECT_LE(g, 0.8 * (1.0 + L.schedule().eta(n)));
    CoordVector x = CoordVector{0.3, -0.9, 0.2, 0.5, -0.1, 0.4, 0.6, 0.0}.truncated(n);
    x.set_coord(n, 0.0);
    EXPECT_NEAR(L.level(n, x), L.level(n - 1, x), 1e-12);
  }
}

TEST(FinalNorm, BasicProperties)
{
  const auto& L = norm_q();
  EXPECT_EQ(L(unit(8, 1)), 1.0);
  EXPECT_EQ(L(CoordVector(8)), 0.0);
  Rng rng = derived_rng(34, 0);
  for (int s = 0; s < 200; ++s) {
    const auto x = random_box(rng, 8);
    const double v = L(x);
    EXPECT_LE(x.norm_inf(), v * (1.0 + 1e-12));
    EXPECT_LE(v, x.norm_inf() / (0.25 * 0.25));
    EXPECT_NEAR(L(-2.5 * x), 2.5 * v, 1e-11 * v);
    const auto short_x = x.truncated(5);
    EXPECT_EQ(L(short_x), L(short_x.padded(8)));
  }
  EXPECT_THROW(L(unit(9, 9)), std::out_of_range);
}

TEST(FinalNorm, ConvexOnSections)
{
  const auto L = std::make_shared<const SmoothC0Norm>(build_schedule(0.25, 3));
  EXPECT_LE(testkit::convexity_midpoint_scan(level_norm_oracle(L, 3), 3, 2000, 7), 1e-9);
  EXPECT_LE(testkit::convexity_midpoint_scan(final_norm_oracle(L), 3, 2000, 8), 1e-9);
}

TEST(DualWitness, ReferenceValues)
{
  const auto& P = schedule_q();
  const auto z = dual_witnesses(P, 2);
  EXPECT_EQ(z[1], (CoordVector{0.7, 1.0}));
  const auto f = dual_f(P), g = dual_g(P);
  EXPECT_EQ(g.coord(1), 0.0);
  EXPECT_NEAR(pairing(f, z[1]), P.inv_w_product(3, 8), 1e-15);
  EXPECT_NEAR(pairing(g, z[1]), P.inv_w_product(3, 8), 1e-15);
}

TEST(DualWitness, Report)
{
  ToleranceConfig cfg;
  const auto rep = dual_witness_report(norm_q(), 8, cfg, 2000);
  EXPECT_LE(rep.max_one_error, 1e-10);
  EXPECT_LE(rep.max_inf_error, 1e-10);
  EXPECT_LE(rep.max_pair_error, 1e-10);
  EXPECT_LE(rep.max_final_excess, 1e-9);
  EXPECT_EQ(rep.f_upper, 1.0);
  EXPECT_EQ(rep.g_upper, 1.0);
  EXPECT_GE(rep.mid_lower, rep.mid_reference - 1e-12);
  EXPECT_LE(rep.mid_lower, 1.0);
}
