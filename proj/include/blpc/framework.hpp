#pragma once

#include <optional>
#include <vector>

#include "blpc/bilateral.hpp"
#include "blpc/core.hpp"
#include "blpc/estimator.hpp"

namespace blpc {

/// Thresholds of the coarse-to-fine pipeline.
struct FrameworkConfig {
  /// Difference keypoints need residual >= alpha * stddev(residual).
  double alpha = 2.0;
  /// Uniform keypoint grid step.
  int s_u = 16;
  /// Keypoint budget per layer (uniform + retained difference points).
  int t_p = 2000;
  int window_size = 32;
  /// Decimation stops once a layer is below min_width x min_height.
  int min_width = 640;
  int min_height = 360;
  BilateralParams bilateral = BilateralParams::defaults_for(32);
  TriggerPolicy trigger;
  EstimatorOptions estimator;

  int lk_window = 15;
  double lk_min_eigenvalue = 1e-4;

  /// Spatial sigma of the densification weights; 0 means s_u.
  double densify_sigma_spatial = 0.0;
  double densify_sigma_range = 25.0;
  int densify_neighbours = 16;
  /// Weight multiplier for estimates whose bilateral pass came back empty.
  double degraded_weight = 0.5;

  /// 0 picks BLPC_THREADS, or 1 when unset.
  int threads = 0;

  double densify_spatial_sigma() const { return densify_sigma_spatial > 0.0 ? densify_sigma_spatial : s_u; }
  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

struct PyramidLayer {
  Image frame1;
  Image frame2;
  /// Decimation factor relative to the original frames (1 for the original).
  int scale = 1;
};

/// Smallest layer first, original last. At most three layers.
struct Pyramid {
  std::vector<PyramidLayer> layers;

  /// Factor between layer i and layer i + 1.
  int factor(std::size_t i) const { return layers[i].scale / layers[i + 1].scale; }
};

/// 2x2 box average; odd dimensions are padded by replicating the last
/// row/column, so the result is ceil(w/2) x ceil(h/2).
Image downsample2(const Image& image);

/// Decimates until both dimensions are below min_width x min_height. When
/// two or more decimations happen, a middle layer at 2^(D/2) is kept too.
Pyramid build_pyramid(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg);

struct KeyPointSet {
  std::vector<Point> uniform;
  std::vector<Point> difference;
  std::vector<Point> retained_difference;
  std::vector<Point> dropped;

  std::size_t spectral_count() const { return uniform.size() + retained_difference.size(); }
};

/// Keypoints from a precomputed non-negative difference image.
KeyPointSet select_keypoints(const Image& difference, const FrameworkConfig& cfg);
/// Keypoints from |frame1 - frame2|.
KeyPointSet select_keypoints(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg);

struct LucasKanadeResult {
  FlowVector flow;
  bool valid = false;
  /// Smaller eigenvalue of the pixel-averaged structure tensor.
  double min_eigenvalue = 0.0;
};

/// Iterated single-level Lucas-Kanade over a window x window patch (odd,
/// >= 5), starting from `initial`. Invalid with a zero vector when the
/// tensor is rank deficient.
LucasKanadeResult lucas_kanade_at(const Image& frame1, const Image& frame2, Point center, int window,
                                  double min_eigenvalue = 1e-4, FlowVector initial = {},
                                  int max_iterations = 10);

/// Edge-aware sparse to dense interpolation over the K nearest valid
/// estimates. Throws DegenerateInputError when no estimate is valid.
FlowField densify(const std::vector<PointEstimate>& estimates, const Image& guide, const FrameworkConfig& cfg);

struct WarpResult {
  Image warped;
  Image residual;
};

/// warped(x, y) = frame2(x + dx, y + dy) with clamped bilinear sampling;
/// residual = |frame1 - warped|.
WarpResult warp_and_residual(const Image& frame1, const Image& frame2, const FlowField& flow);

/// Bilinear resampling of each component to width x height, vectors scaled
/// by `factor`.
FlowField upsample_flow(const FlowField& flow, int width, int height, double factor);

struct LayerStats {
  int width = 0;
  int height = 0;
  int scale = 1;
  std::size_t uniform = 0;
  std::size_t difference = 0;
  std::size_t retained = 0;
  std::size_t dropped = 0;
  std::size_t spectral_estimations = 0;
  std::size_t lk_estimations = 0;
  std::size_t blpc_estimations = 0;
  double residual_before = 0.0;
  double residual_after = 0.0;
};

struct FlowResult {
  FlowField flow;
  std::vector<LayerStats> layers;
  /// Spectral estimates of the last layer, in keypoint order.
  std::vector<PointEstimate> final_estimates;
};

FlowResult estimate_flow_detailed(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg);
FlowField estimate_flow(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg);

}  // namespace blpc
