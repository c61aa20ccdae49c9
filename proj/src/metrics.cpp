#include "blpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blpc/errors.hpp"

namespace blpc {

Image motion_compensate(const Image& frame2, const FlowField& flow) {
  if (frame2.width() != flow.width() || frame2.height() != flow.height()) {
    throw DimensionError("motion_compensate: frame and flow sizes differ");
  }
  Image out(frame2.width(), frame2.height());
  for (int y = 0; y < frame2.height(); ++y) {
    for (int x = 0; x < frame2.width(); ++x) {
      const FlowVector v = flow.valid(x, y) ? flow(x, y) : FlowVector{};
      out(x, y) = bilinear_sample(frame2, x + v.dx, y + v.dy);
    }
  }
  return out;
}

double mse(const Image& compensated, const Image& truth) {
  require_same_shape(compensated, truth, "mse");
  if (truth.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = compensated.data()[i] - truth.data()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(truth.size());
}

double mse(const RgbImage& compensated, const RgbImage& truth) {
  if (compensated.width != truth.width || compensated.height != truth.height) {
    throw DimensionError("mse: colour image sizes differ");
  }
  if (truth.data.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.data.size(); ++i) {
    const double d = static_cast<double>(compensated.data[i]) - truth.data[i];
    acc += d * d;
  }
  return acc / (static_cast<double>(truth.width) * truth.height);
}

Psnr psnr_from_mse(double mse_value, double peak) {
  if (mse_value <= 0.0) return {0.0, true};
  return {10.0 * std::log10(peak * peak / mse_value), false};
}

Psnr psnr(const Image& compensated, const Image& truth, bool per_image_max) {
  return psnr_from_mse(mse(compensated, truth), per_image_max ? compensated.max() : kIntensityPeak);
}

double nrms(const Image& compensated, const Image& truth, double epsilon) {
  require_same_shape(compensated, truth, "nrms");
  if (!(epsilon > 0.0)) throw ConfigError("nrms: epsilon must be positive");
  if (truth.empty()) return 0.0;
  double acc = 0.0;
  for (int y = 0; y < truth.height(); ++y) {
    for (int x = 0; x < truth.width(); ++x) {
      const double gx = 0.5 * (truth.clamped(x + 1, y) - truth.clamped(x - 1, y));
      const double gy = 0.5 * (truth.clamped(x, y + 1) - truth.clamped(x, y - 1));
      const double d = compensated(x, y) - truth(x, y);
      acc += d * d / (gx * gx + gy * gy + epsilon);
    }
  }
  return std::sqrt(acc / static_cast<double>(truth.size()));
}

double angular_error(FlowVector flow, FlowVector gt) {
  // Angle between (u, v, 1) and (u_gt, v_gt, 1) via atan2(|a x b|, a . b).
  const double cx = flow.dy - gt.dy;
  const double cy = gt.dx - flow.dx;
  const double cz = flow.dx * gt.dy - flow.dy * gt.dx;
  const double dot = 1.0 + flow.dx * gt.dx + flow.dy * gt.dy;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot) * 180.0 / std::numbers::pi;
}

double endpoint_error(FlowVector flow, FlowVector gt) {
  return std::hypot(flow.dx - gt.dx, flow.dy - gt.dy);
}

namespace {

template <typename F>
FlowErrorStats field_error(const FlowField& flow, const FlowField& gt, F&& per_vector, const char* what) {
  require_same_shape(flow, gt, what);
  FlowErrorStats s;
  s.per_pixel.assign(gt.size(), 0.0);
  double acc = 0.0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!gt.valid(x, y)) continue;
      const FlowVector v = flow.valid(x, y) ? flow(x, y) : FlowVector{};
      const double e = per_vector(v, gt(x, y));
      s.per_pixel[static_cast<std::size_t>(y) * gt.width() + x] = e;
      acc += e;
      ++s.count;
    }
  }
  s.mean = s.count > 0 ? acc / static_cast<double>(s.count) : 0.0;
  return s;
}

}  // namespace

FlowErrorStats angular_error(const FlowField& flow, const FlowField& gt) {
  return field_error(flow, gt, [](FlowVector a, FlowVector b) { return angular_error(a, b); }, "angular_error");
}

FlowErrorStats endpoint_error(const FlowField& flow, const FlowField& gt) {
  return field_error(flow, gt, [](FlowVector a, FlowVector b) { return endpoint_error(a, b); },
                     "endpoint_error");
}

}  // namespace blpc
