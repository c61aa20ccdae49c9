#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "blpc/errors.hpp"
#include "blpc/metrics.hpp"
#include "helpers.hpp"

using namespace blpc;

TEST(AngularError, KnownValues) {
  EXPECT_NEAR(angular_error(FlowVector{1, 0}, FlowVector{0, 1}), 60.0, 1e-9);
  EXPECT_EQ(angular_error(FlowVector{2.5, -1.25}, FlowVector{2.5, -1.25}), 0.0);
  EXPECT_NEAR(angular_error(FlowVector{1, 0}, FlowVector{0, 0}), 45.0, 1e-9);
}

TEST(AngularError, MatchesAcosFormula) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const FlowVector a{d(rng), d(rng)};
    const FlowVector b{d(rng), d(rng)};
    const double c = (1 + a.dx * b.dx + a.dy * b.dy) /
                     std::sqrt((1 + a.dx * a.dx + a.dy * a.dy) * (1 + b.dx * b.dx + b.dy * b.dy));
    EXPECT_NEAR(angular_error(a, b), std::acos(c) * 180.0 / std::numbers::pi, 1e-6);
  }
}

TEST(FlowErrors, IdentityIsZeroAndInvalidGtIgnored) {
  FlowField f(6, 5, {1.0, -2.0});
  FlowField gt = f;
  EXPECT_EQ(angular_error(f, gt).mean, 0.0);
  EXPECT_EQ(endpoint_error(f, gt).mean, 0.0);
  f(0, 0) = {100.0, 100.0};
  gt.set_valid(0, 0, false);
  const FlowErrorStats s = endpoint_error(f, gt);
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_EQ(s.count, 29u);
}

TEST(FlowErrors, EndpointMean) {
  FlowField f(2, 1);
  FlowField gt(2, 1);
  f(0, 0) = {3, 4};
  EXPECT_DOUBLE_EQ(endpoint_error(f, gt).mean, 2.5);
  EXPECT_THROW(endpoint_error(f, FlowField(1, 2)), DimensionError);
}

TEST(Mse, ScalarAndColour) {
  const Image a(2, 2, std::vector<double>{0, 1, 2, 3});
  const Image b(2, 2, std::vector<double>{1, 1, 0, 3});
  EXPECT_DOUBLE_EQ(mse(a, b), 5.0 / 4.0);
  RgbImage c(1, 2);
  RgbImage d(1, 2);
  c.data = {10, 0, 0, 0, 0, 0};
  d.data = {7, 4, 0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(mse(c, d), 25.0 / 2.0);
}

TEST(Psnr, FromMse) {
  const Psnr p = psnr_from_mse(1.0);
  EXPECT_FALSE(p.exact);
  EXPECT_NEAR(p.db, 20.0 * std::log10(255.0), 1e-12);
  EXPECT_TRUE(psnr_from_mse(0.0).exact);
  const Image a(2, 1, std::vector<double>{100, 50});
  const Image b(2, 1, std::vector<double>{98, 50});
  EXPECT_NEAR(psnr(a, b, true).db, 10.0 * std::log10(100.0 * 100.0 / 2.0), 1e-12);
}

TEST(Nrms, BruteForceOracle) {
  EXPECT_DOUBLE_EQ(kNrmsEpsilon, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image c = test::random_image(16, 16, 100 + seed);
    const Image t = test::random_image(16, 16, 200 + seed);
    double acc = 0.0;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const double gx = (t(std::min(x + 1, 15), y) - t(std::max(x - 1, 0), y)) / 2.0;
        const double gy = (t(x, std::min(y + 1, 15)) - t(x, std::max(y - 1, 0))) / 2.0;
        acc += std::pow(c(x, y) - t(x, y), 2) / (gx * gx + gy * gy + 1.0);
      }
    EXPECT_NEAR(nrms(c, t), std::sqrt(acc / 256.0), 1e-9);
  }
}

TEST(MotionCompensate, BackwardWarp) {
  Image f2(4, 1, std::vector<double>{0, 10, 20, 30});
  const Image out = motion_compensate(f2, FlowField(4, 1, {0.5, 0.0}));
  EXPECT_DOUBLE_EQ(out(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(out(2, 0), 25.0);
  EXPECT_DOUBLE_EQ(out(3, 0), 30.0);
  FlowField f(4, 1, {1.0, 0.0});
  f.set_valid(1, 0, false);
  EXPECT_DOUBLE_EQ(motion_compensate(f2, f)(1, 0), 10.0);
}
