#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blpc/core.hpp"

namespace blpc {

/// Backward bilinear warp: out(x, y) = frame2(x + dx, y + dy), clamped at
/// the borders. Invalid flow pixels use a zero vector.
Image motion_compensate(const Image& frame2, const FlowField& flow);

double mse(const Image& compensated, const Image& truth);
/// Colour MSE: mean squared L2 norm of the per-pixel RGB difference.
double mse(const RgbImage& compensated, const RgbImage& truth);

/// PSNR in dB, or the exact marker when the MSE is zero.
struct Psnr {
  double db = 0.0;
  bool exact = false;
};

inline constexpr double kIntensityPeak = 255.0;

/// 10 log10(peak^2 / mse).
Psnr psnr_from_mse(double mse_value, double peak = kIntensityPeak);
/// With `per_image_max` the peak is max(compensated) instead of 255.
Psnr psnr(const Image& compensated, const Image& truth, bool per_image_max = false);

inline constexpr double kNrmsEpsilon = 1.0;

/// sqrt(mean((Ic - Igt)^2 / (|grad Igt|^2 + epsilon))), central differences
/// with replicated borders.
double nrms(const Image& compensated, const Image& truth, double epsilon = kNrmsEpsilon);

/// Per-pixel error map plus its mean over the pixels where gt is valid.
struct FlowErrorStats {
  std::vector<double> per_pixel;  // 0 where gt is invalid
  double mean = 0.0;
  std::size_t count = 0;
};

/// Angle in degrees between (u, v, 1) and (u_gt, v_gt, 1).
double angular_error(FlowVector flow, FlowVector gt);
FlowErrorStats angular_error(const FlowField& flow, const FlowField& gt);

/// Euclidean endpoint distance.
double endpoint_error(FlowVector flow, FlowVector gt);
FlowErrorStats endpoint_error(const FlowField& flow, const FlowField& gt);

struct EvalReport {
  std::string method_name;
  double mse = 0.0;
  Psnr psnr;
  double nrms = 0.0;
  double ae = 0.0;
  double aef = 0.0;
  double runtime = 0.0;
  bool has_frames = false;
  bool has_gt = false;
  std::size_t gt_pixels = 0;
};

}  // namespace blpc
