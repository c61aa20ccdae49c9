#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "blpc/errors.hpp"
#include "blpc/spectral.hpp"
#include "blpc/synth.hpp"
#include "helpers.hpp"

using namespace blpc;

namespace {

// Direct O(N^2) DFT.
std::vector<Complex> naive_dft(const Image& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<Complex> out(static_cast<std::size_t>(w) * h);
  for (int l = 0; l < h; ++l)
    for (int k = 0; k < w; ++k) {
      Complex acc;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double ph = -2.0 * std::numbers::pi * (double(k) * x / w + double(l) * y / h);
          acc += img(x, y) * Complex(std::cos(ph), std::sin(ph));
        }
      out[static_cast<std::size_t>(l) * w + k] = acc;
    }
  return out;
}

}  // namespace

TEST(Dft, MatchesNaiveTransform) {
  const Image img = test::random_image(6, 5, 11);
  const Spectrum s = forward_dft(img);
  const auto ref = naive_dft(img);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_LT(std::abs(s.data[i] - ref[i]), 1e-9);
}

TEST(Dft, InverseRoundTrip) {
  const Image img = test::random_image(16, 12, 5);
  EXPECT_LT(test::max_abs_diff(inverse_dft(forward_dft(img)), img), 1e-10);
}

TEST(Dft, RejectsDegenerateSize) {
  EXPECT_THROW(forward_dft(Image(1, 8)), DimensionError);
}

TEST(Fft, UnalignedBufferMatchesAligned) {
  const Image img = test::random_image(8, 8, 2);
  std::vector<Complex> plain(65);
  ComplexBuffer aligned(img.data().begin(), img.data().end());
  for (std::size_t i = 0; i < 64; ++i) plain[i + 1] = aligned[i];
  fft2d(aligned, 8, 8, false);
  fft2d(std::span<Complex>(plain).subspan(1), 8, 8, false);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_LT(std::abs(aligned[i] - plain[i + 1]), 1e-12);
}

TEST(PhaseCorrelation, IntegerShiftPeaksAtShift) {
  const Image a = test::random_image(32, 32, 7);
  const Image b = test::circular_shift(a, 5, -3);
  const CorrelationSurface s = phase_correlation_surface(a, b);
  EXPECT_EQ(s.peak1.location, (Point{5, 29}));
  EXPECT_NEAR(s.peak1.value, 1.0, 1e-9);
  EXPECT_TRUE(peak_ratio(s).is_single_peak());
  const FlowVector v = subpixel_refine(s);
  EXPECT_NEAR(v.dx, 5.0, 1e-9);
  EXPECT_NEAR(v.dy, -3.0, 1e-9);
}

TEST(PhaseCorrelation, SurfaceIsRealPartOfNormalisedCrossPower) {
  const Image a = test::random_image(8, 8, 1);
  const Image b = test::random_image(8, 8, 2);
  const CorrelationSurface s = phase_correlation_surface(a, b);
  const auto fa = naive_dft(a);
  const auto fb = naive_dft(b);
  std::vector<Complex> r(fa.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Complex c = fb[i] * std::conj(fa[i]);
    r[i] = c / std::abs(c);
  }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      Complex acc;
      for (int l = 0; l < 8; ++l)
        for (int k = 0; k < 8; ++k) {
          const double ph = 2.0 * std::numbers::pi * (double(k) * x + double(l) * y) / 8.0;
          acc += r[static_cast<std::size_t>(l) * 8 + k] * Complex(std::cos(ph), std::sin(ph));
        }
      EXPECT_NEAR(s.at(x, y), acc.real() / 64.0, 1e-10);
    }
}

TEST(PhaseCorrelation, SecondPeakIsLocalMaxOutsideNeighbourhood) {
  const Image a = test::random_image(16, 16, 4);
  const Image b = test::random_image(16, 16, 9);
  const CorrelationSurface s = phase_correlation_surface(a, b);
  const Point p1 = s.peak1.location;
  double best = -1e300;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      const int ddx = std::min((x - p1.x + 16) % 16, (p1.x - x + 16) % 16);
      const int ddy = std::min((y - p1.y + 16) % 16, (p1.y - y + 16) % 16);
      if (ddx <= 1 && ddy <= 1) continue;
      bool local = true;
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i)
          if (s.at(x + i, y + j) > s.at(x, y)) local = false;
      if (local) best = std::max(best, s.at(x, y));
    }
  EXPECT_DOUBLE_EQ(s.peak2.value, std::max(best, 0.0));
  const PeakRatio r = peak_ratio(s);
  ASSERT_FALSE(r.is_single_peak());
  EXPECT_DOUBLE_EQ(r.value(), s.peak1.value / s.peak2.value);
}

TEST(PhaseCorrelation, AllZeroInputIsDegenerate) {
  EXPECT_THROW(phase_correlation_surface(Image(8, 8), test::random_image(8, 8, 1)), DegenerateInputError);
  EXPECT_THROW(phase_correlation_surface(Image(8, 8), Image(8, 4)), DimensionError);
}

TEST(PhaseCorrelation, TaperStillFindsShift) {
  const Image a = value_noise_texture({}, 64, 64, 3);
  const Image b = test::circular_shift(a, -4, 6);
  SpectralOptions o;
  o.taper = true;
  const FlowVector v = subpixel_refine(phase_correlation_surface(a, b, o));
  EXPECT_NEAR(v.dx, -4.0, 0.1);
  EXPECT_NEAR(v.dy, 6.0, 0.1);
}

TEST(Subpixel, ThreePointFormula) {
  CorrelationSurface s;
  s.width = s.height = 8;
  s.data.assign(64, 0.0);
  s.data[2 * 8 + 3] = 0.8;
  s.data[2 * 8 + 4] = 0.3;
  s.data[2 * 8 + 2] = 0.1;
  s.data[1 * 8 + 3] = 0.2;
  s.peak1 = {{3, 2}, 0.8};
  const FlowVector v = subpixel_refine(s);
  EXPECT_NEAR(v.dx, 3.0 + 0.2 / 1.0, 1e-12);
  EXPECT_NEAR(v.dy, 2.0 - 0.2 / 1.0, 1e-12);
}

TEST(Subpixel, UnwrapAtHalf) {
  EXPECT_EQ(unwrap_shift(15, 32), 15);
  EXPECT_EQ(unwrap_shift(16, 32), -16);
  EXPECT_EQ(unwrap_shift(31, 32), -1);
}

TEST(PeakRatioOrder, SinglePeakDominates) {
  const PeakRatio s = PeakRatio::single_peak();
  const PeakRatio f = PeakRatio::finite(3.0);
  EXPECT_TRUE(s.greater_than(f));
  EXPECT_FALSE(f.greater_than(s));
  EXPECT_FALSE(s.greater_than(s));
  EXPECT_TRUE(f.below(3.5));
  EXPECT_FALSE(s.below(1e300));
}
