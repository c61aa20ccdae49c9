#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "blpc/bilateral.hpp"
#include "blpc/errors.hpp"
#include "helpers.hpp"

using namespace blpc;

namespace {

// Periodic convolution with a unit-sum Gaussian truncated at ceil(3 sigma).
Image brute_gaussian(const Image& img, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  double total = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) total += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) * img.wrapped(x - dx, y - dy);
      out(x, y) = acc / total;
    }
  return out;
}

}  // namespace

TEST(Kernel, AnalyticNormalisation) {
  const Kernel2D k = gaussian_kernel(2.0);
  EXPECT_EQ(k.radius(), 6);
  EXPECT_NEAR(k(0, 0), 1.0 / (2.0 * std::numbers::pi * 4.0), 1e-15);
  EXPECT_NEAR(k(1, 2), std::exp(-5.0 / 8.0) / (8.0 * std::numbers::pi), 1e-15);
  double total = 0.0;
  for (int dy = -6; dy <= 6; ++dy)
    for (int dx = -6; dx <= 6; ++dx) total += std::exp(-(dx * dx + dy * dy) / 8.0) / (8.0 * std::numbers::pi);
  EXPECT_NEAR(k.sum(), total, 1e-12);
  EXPECT_THROW(gaussian_kernel(2.0, 5), ConfigError);
  EXPECT_THROW(gaussian_kernel(0.0), ConfigError);
}

TEST(RangeWeight, UnitPeak) {
  EXPECT_DOUBLE_EQ(range_weight(0.0, 5.0), 1.0);
  EXPECT_NEAR(range_weight(5.0, 5.0), std::exp(-0.5), 1e-15);
}

TEST(Params, Defaults) {
  const BilateralParams p = BilateralParams::defaults_for(32);
  EXPECT_DOUBLE_EQ(p.sigma_s1, 4.0);
  EXPECT_DOUBLE_EQ(p.sigma_s2, 16.0);
  EXPECT_DOUBLE_EQ(p.sigma_r, 30.0);
  EXPECT_EQ(p.slice_m, 3);
  EXPECT_DOUBLE_EQ(p.range_sigma(2), 30.0);
}

TEST(Params, Validation) {
  BilateralParams p = BilateralParams::defaults_for(32);
  p.sigma_s1 = 20.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = BilateralParams::defaults_for(32);
  p.slice_m = 2;
  EXPECT_THROW(p.validate(), ConfigError);
  p = BilateralParams::defaults_for(32);
  p.sigma_r = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(GaussianBlur, MatchesBruteForce) {
  const Image img = test::random_image(20, 14, 8);
  EXPECT_LT(test::max_abs_diff(gaussian_blur_wrap(img, 1.5), brute_gaussian(img, 1.5)), 1e-9);
}

TEST(Slice, EqualsReferenceAtAnchorPixels) {
  const Image img = test::random_u8_image(24, 24, 21);
  const double sigma_s = 2.0;
  const double sigma_r = 20.0;
  const Image ref = reference_bilateral(img, sigma_s, sigma_r);
  for (const double anchor : {img(3, 4), img(17, 9), img(0, 23)}) {
    const Image q = bilateral_slice(img, anchor, sigma_s, sigma_r);
    int hits = 0;
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        if (img(x, y) == anchor) {
          EXPECT_NEAR(q(x, y), ref(x, y), 1e-6);
          ++hits;
        }
    EXPECT_GE(hits, 1);
  }
}

TEST(Anchors, CentreBlockScanOrder) {
  Image w(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) w(x, y) = 10 * y + x;
  const auto a = anchor_intensities(w, 3);
  ASSERT_EQ(a.size(), 9u);
  EXPECT_EQ(a.front(), 33);
  EXPECT_EQ(a[1], 34);
  EXPECT_EQ(a.back(), 55);
  EXPECT_EQ(anchor_intensities(w, 1), std::vector<double>{44});
}

TEST(AnchorFilter, HugeRangeSigmaIsGaussian) {
  const Image img = test::random_image(16, 16, 4);
  const std::vector<double> anchors{10.0, 100.0, 200.0};
  const Image out = bilateral_filter_with_anchors(img, anchors, 2.0, 1e6);
  EXPECT_LT(test::max_abs_diff(out, brute_gaussian(img, 2.0)), 1e-6);
}

TEST(AnchorFilter, ConstantIsFixedPoint) {
  const Image img(16, 16, 77.0);
  const std::vector<double> anchors(9, 77.0);
  EXPECT_EQ(test::max_abs_diff(bilateral_filter_with_anchors(img, anchors, 3.0, 10.0), img), 0.0);
}

TEST(AnchorFilter, SuppressesDissimilarPixels) {
  Image img(32, 32, 20.0);
  for (int y = 0; y < 32; ++y)
    for (int x = 16; x < 32; ++x) img(x, y) = 220.0;
  const std::vector<double> anchors{20.0};
  const Image out = bilateral_filter_with_anchors(img, anchors, 2.0, 10.0);
  EXPECT_NEAR(out(4, 4), 20.0, 1e-6);
  EXPECT_LT(out(24, 4), 1e-6);
}

TEST(AsymmetricPair, HugeRangeSigmaIsGaussianOnBothFrames) {
  const Image f1 = test::random_image(32, 32, 1);
  const Image f2 = test::random_image(32, 32, 2);
  BilateralParams p = BilateralParams::defaults_for(32);
  p.sigma_r = 1e6;
  const Window w{{16, 16}, 32, f1};
  const BilateralPair out = asymmetric_bilateral_pair(w, f2, p);
  EXPECT_LT(test::max_abs_diff(out.first, brute_gaussian(f1, p.sigma_s1)), 1e-6);
  EXPECT_LT(test::max_abs_diff(out.second, brute_gaussian(f2, p.sigma_s2)), 1e-6);
}

TEST(AsymmetricPair, ConstantWindowsAreFixedPoints) {
  const Image c(32, 32, 140.0);
  const Window w{{16, 16}, 32, c};
  const BilateralPair out = asymmetric_bilateral_pair(w, c, BilateralParams::defaults_for(32));
  EXPECT_EQ(test::max_abs_diff(out.first, c), 0.0);
  EXPECT_EQ(test::max_abs_diff(out.second, c), 0.0);
}

TEST(AsymmetricPair, ShapeMismatch) {
  const Image a(32, 32, 1.0);
  const Window w{{16, 16}, 32, a};
  EXPECT_THROW(asymmetric_bilateral_pair(w, Image(16, 16, 1.0), BilateralParams::defaults_for(32)),
               DimensionError);
}
