#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blpc/config.hpp"
#include "blpc/metrics.hpp"
#include "blpc/synth.hpp"

namespace blpc {

/// `method,MSE,PSNR,NRMS,AE,AEF,Time`
std::string csv_header();
/// Metrics that were not computed are left empty; an exact PSNR is written
/// as `inf`.
std::string csv_row(const EvalReport& r);
std::string format_csv(const std::vector<EvalReport>& rows);

struct EvalOptions {
  double nrms_epsilon = kNrmsEpsilon;
  bool psnr_per_image_max = false;
};

/// AE/AEF need `gt`, MSE/PSNR/NRMS need both frames; either may be null.
/// The compensated image is motion_compensate(frame2, flow) compared
/// against frame1.
EvalReport evaluate_flow(const FlowField& flow, const FlowField* gt, const Image* frame1, const Image* frame2,
                         const EvalOptions& options = {});

/// On-disk suite layout: one directory per scene holding frame1.png,
/// frame2.png and gt.flo.
void save_suite(const std::vector<ScenePair>& scenes, const std::filesystem::path& dir);
/// Scene directories in lexicographic order.
std::vector<ScenePair> load_suite(const std::filesystem::path& dir);

struct SceneReport {
  std::string scene;
  EvalReport report;
};

struct BenchResult {
  /// One row per method, averaged over scenes. PSNR is derived from the
  /// mean MSE; Time is the total wall time of the method in seconds.
  std::vector<EvalReport> rows;
  std::vector<SceneReport> per_scene;
};

/// Runs every method on every scene with `config` (method overridden per
/// row); config.mode selects the dense per-pixel protocol or the
/// coarse-to-fine framework.
BenchResult run_bench(const std::vector<ScenePair>& scenes, const std::vector<DenseMethod>& methods,
                      const RunConfig& config);

/// Per-scene rows with a leading scene column.
std::string format_scene_csv(const std::vector<SceneReport>& rows);

}  // namespace blpc
