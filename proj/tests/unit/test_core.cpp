#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "blpc/core.hpp"
#include "blpc/errors.hpp"
#include "helpers.hpp"

using namespace blpc;

TEST(Image, RowMajorLayout) {
  Image img(3, 2, std::vector<double>{0, 1, 2, 3, 4, 5});
  EXPECT_EQ(img(2, 0), 2);
  EXPECT_EQ(img(0, 1), 3);
  EXPECT_EQ(img.min(), 0);
  EXPECT_EQ(img.max(), 5);
}

TEST(Image, RejectsBadData) {
  EXPECT_THROW(Image(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_THROW(Image(1, 1, std::vector<double>{std::numeric_limits<double>::quiet_NaN()}), ConfigError);
}

TEST(Image, WrappedAndClampedAccess) {
  Image img(3, 2, std::vector<double>{0, 1, 2, 3, 4, 5});
  EXPECT_EQ(img.wrapped(-1, 0), 2);
  EXPECT_EQ(img.wrapped(3, 3), 3);
  EXPECT_EQ(img.wrapped(-4, -2), 2);
  EXPECT_EQ(img.clamped(-5, 9), 3);
  EXPECT_EQ(img.clamped(10, -1), 2);
}

TEST(FlowField, ValidityMask) {
  FlowField f(4, 3, {1.0, 2.0});
  EXPECT_EQ(f.valid_count(), 12u);
  f.set_valid(1, 1, false);
  EXPECT_FALSE(f.valid(1, 1));
  EXPECT_EQ(f.valid_count(), 11u);
  EXPECT_EQ(f(3, 2), (FlowVector{1.0, 2.0}));
}

TEST(Window, CentreAtHalfSizeWithWrap) {
  const Image img = test::random_image(10, 8, 3);
  const Window w = extract_window(img, {0, 0}, 4);
  EXPECT_EQ(w.pixels.width(), 4);
  EXPECT_EQ(w.pixels(2, 2), img(0, 0));
  EXPECT_EQ(w.pixels(0, 0), img(8, 6));
  EXPECT_EQ(w.pixels(3, 3), img(1, 1));
}

TEST(Bilinear, ExactAtIntegersAndLinearBetween) {
  Image img(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) img(x, y) = 3.0 * x - 2.0 * y + 1.0;
  EXPECT_DOUBLE_EQ(bilinear_sample(img, 2, 1), img(2, 1));
  EXPECT_NEAR(bilinear_sample(img, 1.25, 2.5), 3.0 * 1.25 - 2.0 * 2.5 + 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(bilinear_sample(img, -3.0, 0.0), img(0, 0));
  EXPECT_DOUBLE_EQ(bilinear_sample(img, 7.5, 3.9), img(3, 3));
}

TEST(Shape, MismatchThrows) {
  EXPECT_THROW(require_same_shape(Image(2, 3), Image(3, 2), "t"), DimensionError);
  EXPECT_NO_THROW(require_same_shape(Image(2, 3), Image(2, 3), "t"));
  EXPECT_THROW(require_same_shape(FlowField(2, 3), FlowField(2, 2), "t"), DimensionError);
}

TEST(Luma, Rec601) {
  EXPECT_NEAR(luma(255, 255, 255), 255.0, 1e-9);
  EXPECT_NEAR(luma(100, 0, 0), 29.9, 1e-12);
}
