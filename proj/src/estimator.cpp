#include "blpc/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "blpc/errors.hpp"
#include "blpc/parallel.hpp"

namespace blpc {

namespace {

double energy(const Image& img) {
  double e = 0.0;
  for (double v : img.data()) e += v * v;
  return e;
}

FlowVector clamp_to_window(FlowVector v, int window_size) {
  const double lim = window_size / 2.0;
  return {std::clamp(v.dx, -lim, lim), std::clamp(v.dy, -lim, lim)};
}

void check_inputs(const Image& frame1, const Image& frame2, int window_size) {
  require_same_shape(frame1, frame2, "estimator");
  if (!is_power_of_two(window_size) || window_size < 8) {
    throw ConfigError("window size must be a power of two >= 8, got " + std::to_string(window_size));
  }
}

PointEstimate from_surface(const CorrelationSurface& s, Point center, int window_size, Method method) {
  PointEstimate e;
  e.location = center;
  e.flow = clamp_to_window(subpixel_refine(s), window_size);
  e.ratio = peak_ratio(s);
  e.method = method;
  e.peak_value = s.peak1.value;
  return e;
}

// Filtered windows whose energy is below this (per pixel, in intensity^2)
// are treated as empty.
constexpr double kEnergyFloor = 1e-12;

std::optional<CorrelationSurface> filtered_surface(const Image& frame1, const Image& frame2, Point center,
                                                   int window_size, const BilateralParams& params,
                                                   const EstimatorOptions& options) {
  params.validate();
  const Window w1 = extract_window(frame1, center, window_size);
  const auto anchors = anchor_intensities(w1.pixels, params.slice_m);
  const Image first = bilateral_filter_with_anchors(w1.pixels, anchors, params.sigma_s1, params.range_sigma(1));

  Image second;
  const int wide = 2 * window_size;
  if (options.wide_frame2_region && wide <= std::min(frame2.width(), frame2.height())) {
    const Window region = extract_window(frame2, center, wide);
    const Image filtered =
        bilateral_filter_with_anchors(region.pixels, anchors, params.sigma_s2, params.range_sigma(2));
    second = Image(window_size, window_size);
    const int off = window_size / 2;
    for (int y = 0; y < window_size; ++y)
      for (int x = 0; x < window_size; ++x) second(x, y) = filtered(x + off, y + off);
  } else {
    const Window w2 = extract_window(frame2, center, window_size);
    second = bilateral_filter_with_anchors(w2.pixels, anchors, params.sigma_s2, params.range_sigma(2));
  }

  const double floor = kEnergyFloor * static_cast<double>(first.size());
  if (energy(first) <= floor || energy(second) <= floor) return std::nullopt;
  return phase_correlation_surface(first, second, options.spectral);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::PC:
      return "PC";
    case Method::BLPC:
      return "BLPC";
    case Method::LK:
      return "LK";
  }
  return "?";
}

double default_ratio_threshold(int window_size) {
  return 1.0 + 1.0 / std::log2(static_cast<double>(window_size));
}

double TriggerPolicy::threshold_for(int window_size) const {
  return threshold.value_or(default_ratio_threshold(window_size));
}

bool TriggerPolicy::fires(const PeakRatio& ratio, int window_size) const {
  switch (mode) {
    case Mode::Never:
      return false;
    case Mode::Always:
      return true;
    case Mode::Auto:
      return ratio.below(threshold_for(window_size));
  }
  return false;
}

PointEstimate pc_estimate(const Image& frame1, const Image& frame2, Point center, int window_size,
                          const EstimatorOptions& options) {
  check_inputs(frame1, frame2, window_size);
  const Window w1 = extract_window(frame1, center, window_size);
  const Window w2 = extract_window(frame2, center, window_size);
  return from_surface(phase_correlation_surface(w1.pixels, w2.pixels, options.spectral), center,
                      window_size, Method::PC);
}

PointEstimate blpc_estimate(const Image& frame1, const Image& frame2, Point center, int window_size,
                            const BilateralParams& params, const EstimatorOptions& options) {
  check_inputs(frame1, frame2, window_size);
  auto surface = filtered_surface(frame1, frame2, center, window_size, params, options);
  if (!surface) {
    PointEstimate e = pc_estimate(frame1, frame2, center, window_size, options);
    e.degraded = true;
    return e;
  }
  PointEstimate e = from_surface(*surface, center, window_size, Method::BLPC);
  e.filtered_ratio = e.ratio;
  return e;
}

PointEstimate estimate_at(const Image& frame1, const Image& frame2, Point center, int window_size,
                          const BilateralParams& params, const TriggerPolicy& policy,
                          const EstimatorOptions& options) {
  PointEstimate pc = pc_estimate(frame1, frame2, center, window_size, options);
  if (!policy.fires(pc.ratio, window_size)) return pc;

  auto surface = filtered_surface(frame1, frame2, center, window_size, params, options);
  if (!surface) {
    pc.degraded = true;
    return pc;
  }
  PointEstimate e = from_surface(*surface, center, window_size, Method::BLPC);
  e.filtered_ratio = e.ratio;
  e.ratio = pc.ratio;
  return e;
}

DenseMethod parse_dense_method(const std::string& name) {
  if (name == "pc") return DenseMethod::PC;
  if (name == "blpc") return DenseMethod::BLPC;
  if (name == "auto") return DenseMethod::Auto;
  throw ConfigError("unknown method '" + name + "' (expected pc, blpc or auto)");
}

const char* to_string(DenseMethod m) {
  switch (m) {
    case DenseMethod::PC:
      return "pc";
    case DenseMethod::BLPC:
      return "blpc";
    case DenseMethod::Auto:
      return "auto";
  }
  return "?";
}

DenseResult dense_estimate(const Image& frame1, const Image& frame2, int window_size, DenseMethod method,
                           const BilateralParams& params, int threads, const TriggerPolicy& policy,
                           const EstimatorOptions& options) {
  check_inputs(frame1, frame2, window_size);
  params.validate();
  const int w = frame1.width();
  const int h = frame1.height();
  DenseResult r;
  r.flow = FlowField(w, h);
  r.pc_ratio.assign(static_cast<std::size_t>(w) * h, PeakRatio::single_peak());
  r.used_ratio = r.pc_ratio;

  TriggerPolicy effective = policy;
  if (method == DenseMethod::PC) effective.mode = TriggerPolicy::Mode::Never;
  if (method == DenseMethod::BLPC) effective.mode = TriggerPolicy::Mode::Always;

  parallel_for(static_cast<std::size_t>(h), resolve_threads(threads), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      try {
        const PointEstimate e = estimate_at(frame1, frame2, {x, y}, window_size, params, effective, options);
        r.flow(x, y) = e.flow;
        r.pc_ratio[i] = e.ratio;
        r.used_ratio[i] = e.filtered_ratio.value_or(e.ratio);
      } catch (const DegenerateInputError&) {
        r.flow(x, y) = {};
        r.flow.set_valid(x, y, false);
      }
    }
  });
  return r;
}

}  // namespace blpc
