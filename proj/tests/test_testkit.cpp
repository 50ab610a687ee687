#include "renorm/testkit.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace renorm;
using namespace renorm::testkit;

namespace {

auto ball_of(const NormOracle& n)
{
  return [n](const CoordVector& x) { return n(x) <= 1.0; };
}

} // namespace

TEST(RayScan, ReferenceValues)
{
  const auto l2 = gauge_by_ray_scan(ball_of(l2_norm()), 2.0 * unit(2, 1), 1.0, 3.0);
  EXPECT_NEAR(l2.value, 2.0, l2.error_bound);
  const auto l1 = gauge_by_ray_scan(ball_of(l1_norm(2)), CoordVector{1.0, 1.0}, 0.5, 4.0);
  EXPECT_NEAR(l1.value, 2.0, l1.error_bound);
  EXPECT_LE(l1.error_bound, 3.5e-4);
}

TEST(RayScan, RejectsBadInput)
{
  EXPECT_THROW(gauge_by_ray_scan(ball_of(l2_norm()), unit(4, 1), 0.5, 2.0), std::invalid_argument);
  EXPECT_THROW(gauge_by_ray_scan(ball_of(l2_norm()), unit(2, 1), 0.5, 2.0, 100), std::invalid_argument);
  EXPECT_THROW(gauge_by_ray_scan(ball_of(l2_norm()), unit(2, 1), 2.0, 3.0), invalid_set_error);
  EXPECT_THROW(gauge_by_ray_scan(ball_of(l2_norm()), unit(2, 1), 0.1, 0.5), invalid_set_error);
}

TEST(SphereScan, ReferenceValues)
{
  const auto a = dual_by_sphere_scan(l2_norm(), unit<CoordFunctional>(2, 1), ScanGrid{2, 256, 1.0});
  EXPECT_NEAR(a.value, 1.0, 1e-3);
  const auto b = dual_by_sphere_scan(linf_norm(2), CoordFunctional{1.0, 1.0}, ScanGrid{2, 256, 1.0});
  EXPECT_NEAR(b.value, 2.0, 1e-2);
  const auto c = dual_by_sphere_scan(l1_norm(3), CoordFunctional{1.0, -1.0, 1.0}, ScanGrid{3, 128, 1.0});
  EXPECT_NEAR(c.value, 1.0, 1e-2);
  EXPECT_GT(c.error_bound, 0.0);
  EXPECT_THROW(ScanGrid({4, 128, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW(ScanGrid({2, 32, 1.0}).validate(), std::invalid_argument);
}

TEST(HilbertQ, Values)
{
  const CoordVector x{0.2, -1.0, 3.0};
  EXPECT_EQ(hilbert_q_oracle(x, x), 0.0);
  EXPECT_NEAR(hilbert_q_oracle(unit(2, 1), -unit(2, 1)), 4.0, 1e-15);
}

TEST(ConvexityScan, BundledNormsAreConvex)
{
  for (const auto& n : {l2_norm(), l1_norm(3), linf_norm(3)}) EXPECT_LE(convexity_midpoint_scan(n, 3, 5000, 1), 1e-12);
  const NormOracle bad([](const CoordVector& x) { return std::sqrt(std::abs(x.coord(1))) + x.norm2(); }, 1.0, 2.0, "bad");
  EXPECT_GT(convexity_midpoint_scan(bad, 3, 5000, 1), 1e-3);
  EXPECT_THROW(convexity_midpoint_scan(l2_norm(), 3, 10, 1), std::invalid_argument);
}
