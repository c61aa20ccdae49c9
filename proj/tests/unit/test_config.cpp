#include <gtest/gtest.h>

#include "blpc/config.hpp"
#include "blpc/errors.hpp"

using namespace blpc;

TEST(RunConfig, DefaultsDeriveFromWindowSize) {
  RunConfig c;
  c.window_size = 64;
  const BilateralParams b = c.bilateral();
  EXPECT_DOUBLE_EQ(b.sigma_s1, 8.0);
  EXPECT_DOUBLE_EQ(b.sigma_s2, 32.0);
  EXPECT_DOUBLE_EQ(c.trigger().threshold_for(64), 1.0 + 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(c.framework().densify_spatial_sigma(), 16.0);
}

TEST(RunConfig, ParseOverridesAndComments) {
  const RunConfig c = parse_config(
      "# header\n"
      "method = blpc   # trailing comment\n"
      "mode=dense\n"
      "\n"
      "sigma_r = 12.5\n"
      "sigma_s1 = auto\n"
      "ratio_threshold = 1.5\n"
      "taper = true\n");
  EXPECT_EQ(c.method, DenseMethod::BLPC);
  EXPECT_EQ(c.mode, RunMode::Dense);
  EXPECT_DOUBLE_EQ(c.sigma_r, 12.5);
  EXPECT_FALSE(c.sigma_s1.has_value());
  EXPECT_DOUBLE_EQ(*c.ratio_threshold, 1.5);
  EXPECT_TRUE(c.taper);
}

TEST(RunConfig, ErrorsNameTheLine) {
  auto message = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("alpha = 2\nbogus = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("alpha = 2\n\nalpha = 3\n").find("duplicate"), std::string::npos);
  EXPECT_NE(message("window_size\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("s_u = 1.5\n").find("line 1"), std::string::npos);
  EXPECT_THROW(parse_config("window_size = 48\n"), ConfigError);
  EXPECT_THROW(parse_config("sigma_s1 = 20\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = sparse\n"), ConfigError);
}

TEST(RunConfig, TextRoundTrip) {
  RunConfig c;
  c.method = DenseMethod::PC;
  c.mode = RunMode::Dense;
  c.window_size = 16;
  c.alpha = 1.2345678901234567;
  c.sigma_s1 = 1.75;
  c.sigma_r2 = 0.1;
  c.lk_min_eigenvalue = 3.3e-7;
  c.densify_sigma_spatial = 7.0;
  c.wide_frame2_region = true;
  c.threads = 3;
  c.output = "out/flow.flo";
  const RunConfig d = parse_config(c.to_text());
  EXPECT_EQ(d.to_text(), c.to_text());
  EXPECT_EQ(d.alpha, c.alpha);
  EXPECT_EQ(d.lk_min_eigenvalue, c.lk_min_eigenvalue);
  EXPECT_EQ(d.sigma_s1, c.sigma_s1);
  EXPECT_EQ(d.output, c.output);
  EXPECT_EQ(parse_config(RunConfig{}.to_text()).to_text(), RunConfig{}.to_text());
}

TEST(RunConfig, ModeNames) {
  EXPECT_EQ(parse_run_mode("framework"), RunMode::Framework);
  EXPECT_STREQ(to_string(RunMode::Dense), "dense");
}
