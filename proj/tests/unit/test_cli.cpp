#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "blpc/fileutil.hpp"
#include "blpc/flo_io.hpp"
#include "blpc/image_io.hpp"
#include "helpers.hpp"

using namespace blpc;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("blpc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(BLPC_CLI_PATH) + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("flow a.png"), 2);
  EXPECT_EQ(run("eval --flow x.flo"), 2);
  EXPECT_EQ(run("bench --suite x"), 2);
}

TEST_F(Cli, MissingInputExitsOne) {
  EXPECT_EQ(run("flow " + path("nope1.png") + " " + path("nope2.png") + " -o " + path("o.flo")), 1);
}

TEST_F(Cli, ConfigAndDimensionErrorsExitTwo) {
  write_file_atomic(path("bad.cfg"), "alpha = 2\nnot_a_key = 1\n");
  EXPECT_EQ(run("flow --print-config --config " + path("bad.cfg")), 2);
  EXPECT_NE(read_file(path("stderr")).find("line 2"), std::string::npos);
  write_image(test::random_u8_image(32, 32, 1), path("a.pgm"));
  write_image(test::random_u8_image(16, 32, 2), path("b.pgm"));
  EXPECT_EQ(run("flow " + path("a.pgm") + " " + path("b.pgm") + " -o " + path("o.flo")), 2);
}

TEST_F(Cli, PrintConfigRoundTrips) {
  ASSERT_EQ(run("flow --print-config --method pc --threads 2"), 0);
  const std::string text = read_file(path("stdout"));
  EXPECT_NE(text.find("method = pc"), std::string::npos);
  write_file_atomic(path("c.cfg"), text);
  ASSERT_EQ(run("flow --print-config --config " + path("c.cfg")), 0);
  EXPECT_EQ(read_file(path("stdout")), text);
}

TEST_F(Cli, FlowThenEval) {
  const Image a = test::random_u8_image(64, 64, 3);
  write_image(a, path("f1.png"));
  write_image(test::circular_shift(a, 2, 1), path("f2.png"));
  ASSERT_EQ(run("flow " + path("f1.png") + " " + path("f2.png") + " -o " + path("o.flo") + " --viz " +
                path("v.png") + " --ratio-map " + path("r.png") + " --timing"),
            0);
  const FlowField f = read_flo(path("o.flo"));
  EXPECT_EQ(f.width(), 64);
  EXPECT_NEAR(f(32, 32).dx, 2.0, 0.3);
  EXPECT_NEAR(f(32, 32).dy, 1.0, 0.3);
  EXPECT_TRUE(fs::exists(path("v.png")));
  EXPECT_TRUE(fs::exists(path("r.png")));
  EXPECT_NE(read_file(path("stderr")).find("estimation time"), std::string::npos);

  write_flo(FlowField(64, 64, {2.0, 1.0}), path("gt.flo"));
  ASSERT_EQ(run("eval --flow " + path("o.flo") + " --gt " + path("gt.flo") + " --frames " + path("f1.png") + " " +
                path("f2.png") + " --report " + path("r.csv") + " --name mine"),
            0);
  const std::string csv = read_file(path("r.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,MSE,PSNR,NRMS,AE,AEF,Time");
  EXPECT_NE(csv.find("\nmine,"), std::string::npos);
}

TEST_F(Cli, SynthWritesSuite) {
  ASSERT_EQ(run("synth --suite standard --seed 7 -o " + path("suite")), 0);
  int scenes = 0;
  for (const auto& e : fs::directory_iterator(path("suite"))) {
    EXPECT_TRUE(fs::exists(e.path() / "gt.flo"));
    ++scenes;
  }
  EXPECT_EQ(scenes, 9);
  EXPECT_EQ(run("synth --suite other -o " + path("x")), 2);
}
