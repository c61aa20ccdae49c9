// blpcflow: command line front end.
//
//   blpcflow flow  <frame1> <frame2> -o out.flo [--method pc|blpc|auto] ...
//   blpcflow eval  --flow est.flo [--gt gt.flo] [--frames f1 f2] --report out.csv
//   blpcflow synth --suite standard --seed N -o dir/
//   blpcflow bench --suite dir/ --methods pc,blpc --report table.csv
//
// Exit status: 0 on success, 2 for usage and dimension errors, 1 otherwise.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blpc/config.hpp"
#include "blpc/errors.hpp"
#include "blpc/estimator.hpp"
#include "blpc/fileutil.hpp"
#include "blpc/flo_io.hpp"
#include "blpc/flow_color.hpp"
#include "blpc/framework.hpp"
#include "blpc/image_io.hpp"
#include "blpc/report.hpp"
#include "blpc/synth.hpp"

namespace {

using namespace blpc;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowArgs {
  std::vector<std::string> frames;
  std::string output;
  std::string config;
  std::string method;
  std::string viz;
  std::string ratio_map;
  bool timing = false;
  bool print_config = false;
  bool dense = false;
  int threads = -1;
};

struct EvalArgs {
  std::string flow;
  std::string gt;
  std::vector<std::string> frames;
  std::string report;
  std::string name = "estimate";
  bool psnr_per_image_max = false;
};

struct SynthArgs {
  std::string suite = "standard";
  std::uint64_t seed = 7;
  std::string output;
};

struct BenchArgs {
  std::string suite;
  std::string methods = "pc,blpc";
  std::string report;
  std::string detail;
  std::string config;
  std::string mode;
  int threads = -1;
};

RunConfig base_config(const std::string& path) {
  return path.empty() ? RunConfig{} : load_config(path);
}

int run_flow(const FlowArgs& a) {
  RunConfig cfg = base_config(a.config);
  if (!a.method.empty()) cfg.method = parse_dense_method(a.method);
  if (a.dense) cfg.mode = RunMode::Dense;
  if (a.threads >= 0) cfg.threads = a.threads;
  if (!a.output.empty()) cfg.output = a.output;
  if (!a.viz.empty()) cfg.viz = a.viz;
  if (!a.ratio_map.empty()) cfg.ratio_map = a.ratio_map;
  cfg.validate();

  if (a.print_config) {
    std::cout << cfg.to_text();
    return 0;
  }
  if (a.frames.size() != 2) throw UsageError("flow: expected two frame paths");
  if (cfg.output.empty()) throw UsageError("flow: an output path is required (-o)");

  const Image f1 = read_image(a.frames[0]);
  const Image f2 = read_image(a.frames[1]);
  require_same_shape(f1, f2, "flow");

  const auto t0 = std::chrono::steady_clock::now();
  FlowField flow;
  std::optional<Image> ratios;
  if (cfg.mode == RunMode::Dense) {
    DenseResult r = dense_estimate(f1, f2, cfg.window_size, cfg.method, cfg.bilateral(), cfg.threads,
                                   cfg.trigger(), cfg.estimator());
    flow = std::move(r.flow);
    if (!cfg.ratio_map.empty()) ratios = ratio_map(r.used_ratio, f1.width(), f1.height());
  } else {
    FlowResult r = estimate_flow_detailed(f1, f2, cfg.framework());
    flow = std::move(r.flow);
    if (!cfg.ratio_map.empty()) {
      // Only keypoints carry a ratio; everything else stays black.
      std::vector<PeakRatio> per_pixel(f1.size(), PeakRatio::finite(1.0));
      for (const PointEstimate& e : r.final_estimates) {
        if (e.valid) per_pixel[static_cast<std::size_t>(e.location.y) * f1.width() + e.location.x] = e.ratio;
      }
      ratios = ratio_map(per_pixel, f1.width(), f1.height());
    }
    if (a.timing) {
      for (const LayerStats& l : r.layers) {
        std::fprintf(stderr,
                     "layer %dx%d (1/%d): %zu uniform, %zu difference, %zu retained, %zu dropped, "
                     "%zu spectral, %zu blpc, %zu lk, residual %.4f -> %.4f\n",
                     l.width, l.height, l.scale, l.uniform, l.difference, l.retained, l.dropped,
                     l.spectral_estimations, l.blpc_estimations, l.lk_estimations, l.residual_before,
                     l.residual_after);
      }
    }
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_flo(flow, cfg.output);
  if (!cfg.viz.empty()) write_png(flow_to_color(flow), cfg.viz);
  if (ratios) write_image(*ratios, cfg.ratio_map);
  if (a.timing) std::fprintf(stderr, "estimation time: %.3f s\n", dt);
  return 0;
}

int run_eval(const EvalArgs& a) {
  if (a.gt.empty() && a.frames.empty()) throw UsageError("eval: need --gt and/or --frames to compare against");
  if (!a.frames.empty() && a.frames.size() != 2) throw UsageError("eval: --frames takes exactly two paths");

  const FlowField flow = read_flo(a.flow);
  std::optional<FlowField> gt;
  if (!a.gt.empty()) {
    gt = read_flo(a.gt);
    require_same_shape(flow, *gt, "eval");
  }
  std::optional<Image> f1, f2;
  if (!a.frames.empty()) {
    f1 = read_image(a.frames[0]);
    f2 = read_image(a.frames[1]);
    if (f1->width() != flow.width() || f1->height() != flow.height()) {
      throw DimensionError("eval: frame size differs from flow size");
    }
  }
  EvalOptions opts;
  opts.psnr_per_image_max = a.psnr_per_image_max;
  EvalReport r = evaluate_flow(flow, gt ? &*gt : nullptr, f1 ? &*f1 : nullptr, f2 ? &*f2 : nullptr, opts);
  r.method_name = a.name;
  const std::string csv = format_csv({r});
  if (!a.report.empty()) write_file_atomic(a.report, csv);
  std::cout << csv;
  return 0;
}

int run_synth(const SynthArgs& a) {
  if (a.suite != "standard") throw UsageError("synth: only the 'standard' suite exists");
  save_suite(standard_suite(a.seed), a.output);
  return 0;
}

std::vector<DenseMethod> parse_methods(const std::string& list) {
  std::vector<DenseMethod> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_dense_method(item));
  }
  if (out.empty()) throw UsageError("bench: --methods is empty");
  return out;
}

int run_bench_cmd(const BenchArgs& a) {
  RunConfig cfg = base_config(a.config);
  if (!a.config.empty() || !a.mode.empty()) {
    if (!a.mode.empty()) cfg.mode = parse_run_mode(a.mode);
  } else {
    cfg.mode = RunMode::Dense;
  }
  if (a.threads >= 0) cfg.threads = a.threads;
  cfg.validate();
  const auto methods = parse_methods(a.methods);
  const auto scenes = load_suite(a.suite);
  const BenchResult r = run_bench(scenes, methods, cfg);
  const std::string csv = format_csv(r.rows);
  write_file_atomic(a.report, csv);
  if (!a.detail.empty()) write_file_atomic(a.detail, format_scene_csv(r.per_scene));
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilateral phase correlation optical flow"};
  app.require_subcommand(1);

  FlowArgs flow_args;
  auto* flow = app.add_subcommand("flow", "Estimate dense flow between two frames");
  flow->add_option("frames", flow_args.frames, "frame1 frame2")->expected(0, 2);
  flow->add_option("-o,--output", flow_args.output, "Output .flo path");
  flow->add_option("--config", flow_args.config, "key = value configuration file");
  flow->add_option("--method", flow_args.method, "pc, blpc or auto");
  flow->add_option("--viz", flow_args.viz, "Colour-coded flow PNG");
  flow->add_option("--ratio-map", flow_args.ratio_map, "Log-scaled peak ratio PNG");
  flow->add_flag("--timing", flow_args.timing, "Report timings and per-layer statistics on stderr");
  flow->add_flag("--print-config", flow_args.print_config, "Print the effective configuration and exit");
  flow->add_flag("--dense", flow_args.dense, "One window per pixel instead of the coarse-to-fine pipeline");
  flow->add_option("--threads", flow_args.threads, "Worker threads (0 = BLPC_THREADS or 1)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score a flow field");
  eval->add_option("--flow", eval_args.flow, "Estimated .flo")->required();
  eval->add_option("--gt", eval_args.gt, "Ground truth .flo");
  eval->add_option("--frames", eval_args.frames, "frame1 frame2")->expected(2);
  eval->add_option("--report", eval_args.report, "CSV output path");
  eval->add_option("--name", eval_args.name, "Method label for the report row");
  eval->add_flag("--psnr-per-image-max", eval_args.psnr_per_image_max, "Use max(compensated) as the PSNR peak");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write the synthetic multi-motion suite");
  synth->add_option("--suite", synth_args.suite, "Suite name");
  synth->add_option("--seed", synth_args.seed, "Texture seed");
  synth->add_option("-o,--output", synth_args.output, "Output directory")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run methods over a suite and tabulate the metrics");
  bench->add_option("--suite", bench_args.suite, "Suite directory written by synth")->required();
  bench->add_option("--methods", bench_args.methods, "Comma separated list of pc, blpc, auto");
  bench->add_option("--report", bench_args.report, "CSV output path")->required();
  bench->add_option("--detail", bench_args.detail, "Per-scene CSV output path");
  bench->add_option("--config", bench_args.config, "key = value configuration file");
  bench->add_option("--mode", bench_args.mode, "dense (default) or framework");
  bench->add_option("--threads", bench_args.threads, "Worker threads (0 = BLPC_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "blpcflow: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*flow) return run_flow(flow_args);
    if (*eval) return run_eval(eval_args);
    if (*synth) return run_synth(synth_args);
    if (*bench) return run_bench_cmd(bench_args);
  } catch (const UsageError& e) {
    std::cerr << "blpcflow: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "blpcflow: dimension mismatch: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "blpcflow: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "blpcflow: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
