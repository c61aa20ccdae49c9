#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "blpc/errors.hpp"
#include "blpc/flow_color.hpp"

using namespace blpc;

TEST(ColorWheel, Layout) {
  const auto& w = color_wheel();
  ASSERT_EQ(w.size(), 55u);
  EXPECT_EQ(w[0], (Rgb{255, 0, 0}));
  EXPECT_EQ(w[15], (Rgb{255, 255, 0}));
  EXPECT_EQ(w[21], (Rgb{0, 255, 0}));
  EXPECT_EQ(w[25], (Rgb{0, 255, 255}));
  EXPECT_EQ(w[36], (Rgb{0, 0, 255}));
  EXPECT_EQ(w[49], (Rgb{255, 0, 255}));
}

TEST(ColorWheel, MatchesGoldenOracle) {
  std::ifstream in(BLPC_TEST_DATA_DIR "/color_golden.txt");
  ASSERT_TRUE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double u, v;
    int r, g, b;
    ss >> u >> v >> r >> g >> b;
    const Rgb c = flow_vector_color(u, v);
    EXPECT_EQ(c, (Rgb{static_cast<unsigned char>(r), static_cast<unsigned char>(g), static_cast<unsigned char>(b)}))
        << "u=" << u << " v=" << v;
    ++n;
  }
  EXPECT_GT(n, 200);
}

TEST(FlowToColor, ZeroWhiteInvalidBlack) {
  FlowField f(2, 1);
  f.set_valid(1, 0, false);
  const RgbImage img = flow_to_color(f);
  EXPECT_EQ(img.pixel(0, 0)[0], 255);
  EXPECT_EQ(img.pixel(0, 0)[2], 255);
  EXPECT_EQ(img.pixel(1, 0)[0], 0);
  EXPECT_THROW(flow_to_color(f, 0.0), ConfigError);
}

TEST(FlowToColor, AutoMaxIsNearestRankPercentile) {
  FlowField f(100, 1);
  for (int x = 0; x < 100; ++x) f(x, 0) = {static_cast<double>(x + 1), 0.0};
  EXPECT_DOUBLE_EQ(auto_max_magnitude(f), 99.0);
  EXPECT_DOUBLE_EQ(auto_max_magnitude(FlowField(3, 3)), 1.0);
}

TEST(RatioMap, LogScale) {
  const std::vector<PeakRatio> r{PeakRatio::finite(1.0), PeakRatio::finite(10.0), PeakRatio::finite(1e4),
                                 PeakRatio::single_peak()};
  const Image m = ratio_map(r, 2, 2);
  EXPECT_EQ(m(0, 0), 0);
  EXPECT_EQ(m(1, 0), 128);
  EXPECT_EQ(m(0, 1), 255);
  EXPECT_EQ(m(1, 1), 255);
  EXPECT_THROW(ratio_map(r, 3, 1), DimensionError);
}
