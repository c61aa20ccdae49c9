#include "blpc/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "blpc/errors.hpp"
#include "blpc/fileutil.hpp"
#include "blpc/flo_io.hpp"
#include "blpc/image_io.hpp"

namespace blpc {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string metric_fields(const EvalReport& r) {
  std::string s;
  if (r.has_frames) {
    s += fixed(r.mse, 6) + "," + (r.psnr.exact ? std::string("inf") : fixed(r.psnr.db, 6)) + "," +
         fixed(r.nrms, 6);
  } else {
    s += ",,";
  }
  s += ",";
  if (r.has_gt) s += fixed(r.ae, 6) + "," + fixed(r.aef, 6);
  else s += ",";
  s += "," + fixed(r.runtime, 3);
  return s;
}

FlowField run_method(const ScenePair& s, DenseMethod method, const RunConfig& config) {
  RunConfig c = config;
  c.method = method;
  if (c.mode == RunMode::Dense) {
    return dense_estimate(s.frame1, s.frame2, c.window_size, method, c.bilateral(), c.threads, c.trigger(),
                          c.estimator())
        .flow;
  }
  return estimate_flow(s.frame1, s.frame2, c.framework());
}

}  // namespace

std::string csv_header() { return "method,MSE,PSNR,NRMS,AE,AEF,Time"; }

std::string csv_row(const EvalReport& r) { return r.method_name + "," + metric_fields(r); }

std::string format_csv(const std::vector<EvalReport>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

std::string format_scene_csv(const std::vector<SceneReport>& rows) {
  std::string out = "scene," + csv_header() + "\n";
  for (const auto& r : rows) out += r.scene + "," + csv_row(r.report) + "\n";
  return out;
}

EvalReport evaluate_flow(const FlowField& flow, const FlowField* gt, const Image* frame1, const Image* frame2,
                         const EvalOptions& options) {
  EvalReport r;
  if (gt != nullptr) {
    r.ae = angular_error(flow, *gt).mean;
    const FlowErrorStats e = endpoint_error(flow, *gt);
    r.aef = e.mean;
    r.gt_pixels = e.count;
    r.has_gt = true;
  }
  if (frame1 != nullptr && frame2 != nullptr) {
    require_same_shape(*frame1, *frame2, "evaluate_flow");
    const Image compensated = motion_compensate(*frame2, flow);
    r.mse = mse(compensated, *frame1);
    r.psnr = psnr(compensated, *frame1, options.psnr_per_image_max);
    r.nrms = nrms(compensated, *frame1, options.nrms_epsilon);
    r.has_frames = true;
  }
  return r;
}

void save_suite(const std::vector<ScenePair>& scenes, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : scenes) {
    const auto sub = dir / s.name;
    std::filesystem::create_directories(sub);
    write_image(s.frame1, sub / "frame1.png");
    write_image(s.frame2, sub / "frame2.png");
    write_flo(s.gt, sub / "gt.flo");
  }
}

std::vector<ScenePair> load_suite(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("suite directory not found: " + dir.string());
  std::vector<std::filesystem::path> subs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "gt.flo")) subs.push_back(entry.path());
  }
  std::sort(subs.begin(), subs.end());
  if (subs.empty()) throw IoError("no scenes found under " + dir.string());
  std::vector<ScenePair> out;
  for (const auto& sub : subs) {
    ScenePair s;
    s.name = sub.filename().string();
    s.frame1 = read_image(sub / "frame1.png");
    s.frame2 = read_image(sub / "frame2.png");
    s.gt = read_flo(sub / "gt.flo");
    require_same_shape(s.frame1, s.frame2, "load_suite");
    if (s.gt.width() != s.frame1.width() || s.gt.height() != s.frame1.height()) {
      throw DimensionError("load_suite: " + s.name + " ground truth size differs from its frames");
    }
    out.push_back(std::move(s));
  }
  return out;
}

BenchResult run_bench(const std::vector<ScenePair>& scenes, const std::vector<DenseMethod>& methods,
                      const RunConfig& config) {
  if (scenes.empty()) throw ConfigError("bench: empty suite");
  if (methods.empty()) throw ConfigError("bench: no methods");
  const EvalOptions opts{config.nrms_epsilon, config.psnr_per_image_max};
  BenchResult out;
  for (DenseMethod m : methods) {
    EvalReport agg;
    agg.method_name = to_string(m);
    agg.has_frames = agg.has_gt = true;
    for (const auto& s : scenes) {
      const auto t0 = std::chrono::steady_clock::now();
      const FlowField flow = run_method(s, m, config);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      EvalReport r = evaluate_flow(flow, &s.gt, &s.frame1, &s.frame2, opts);
      r.method_name = agg.method_name;
      r.runtime = dt;
      agg.mse += r.mse;
      agg.nrms += r.nrms;
      agg.ae += r.ae;
      agg.aef += r.aef;
      agg.runtime += dt;
      agg.gt_pixels += r.gt_pixels;
      out.per_scene.push_back({s.name, r});
    }
    const double n = static_cast<double>(scenes.size());
    agg.mse /= n;
    agg.nrms /= n;
    agg.ae /= n;
    agg.aef /= n;
    agg.psnr = psnr_from_mse(agg.mse);
    out.rows.push_back(agg);
  }
  return out;
}

}  // namespace blpc
