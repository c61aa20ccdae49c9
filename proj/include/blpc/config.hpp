#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "blpc/estimator.hpp"
#include "blpc/framework.hpp"

namespace blpc {

enum class RunMode { Framework, Dense };

/// Everything a `flow` or `bench` run can be configured with.
///
/// Text form: one `key = value` per line, `#` starts a comment. Unknown or
/// repeated keys are errors. Keys whose value is `auto` derive from other
/// fields (sigma_s1 = window_size / 8, sigma_s2 = window_size / 2,
/// sigma_r2 = sigma_r, densify_sigma_spatial = s_u,
/// ratio_threshold = 1 + 1 / log2(window_size)).
struct RunConfig {
  DenseMethod method = DenseMethod::Auto;
  RunMode mode = RunMode::Framework;

  int window_size = 32;
  double alpha = 2.0;
  int s_u = 16;
  int t_p = 2000;
  int min_width = 640;
  int min_height = 360;

  std::optional<double> sigma_s1;
  std::optional<double> sigma_s2;
  double sigma_r = 30.0;
  std::optional<double> sigma_r2;
  int slice_m = 3;
  std::optional<double> ratio_threshold;

  int lk_window = 15;
  double lk_min_eigenvalue = 1e-4;
  std::optional<double> densify_sigma_spatial;
  double densify_sigma_range = 25.0;
  int densify_neighbours = 16;
  double degraded_weight = 0.5;

  bool taper = false;
  bool wide_frame2_region = false;
  int threads = 0;

  double nrms_epsilon = 1.0;
  bool psnr_per_image_max = false;

  std::string output;
  std::string viz;
  std::string ratio_map;
  std::string report_format = "csv";

  BilateralParams bilateral() const;
  TriggerPolicy trigger() const;
  EstimatorOptions estimator() const;
  FrameworkConfig framework() const;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Every key with its current value; parse_config(to_text()) round-trips.
  std::string to_text() const;
};

/// Applies a document on top of `base` (defaults when omitted). ConfigError
/// names the offending line.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

RunMode parse_run_mode(const std::string& name);
const char* to_string(RunMode m);

}  // namespace blpc
