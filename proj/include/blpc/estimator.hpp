#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blpc/bilateral.hpp"
#include "blpc/core.hpp"
#include "blpc/spectral.hpp"

namespace blpc {

enum class Method { PC, BLPC, LK };

const char* to_string(Method m);

/// Motion estimate assigned to the centre pixel of a window.
struct PointEstimate {
  Point location;
  FlowVector flow;
  /// Peak ratio of the plain phase correlation surface.
  PeakRatio ratio = PeakRatio::single_peak();
  /// Peak ratio of the bilateral surface, when one was computed.
  std::optional<PeakRatio> filtered_ratio;
  Method method = Method::PC;
  double peak_value = 0.0;
  /// BLPC was requested but the filtered windows carried no energy, so the
  /// plain PC result was kept.
  bool degraded = false;
  bool valid = true;
};

struct EstimatorOptions {
  SpectralOptions spectral;
  /// Filter a 2 m_w frame-2 region and keep its central m_w block instead of
  /// filtering the co-sited block alone.
  bool wide_frame2_region = false;
};

/// When the plain surface looks like it carries more than one motion.
///
/// The ratio r = P1/P2 is >= 1; r close to 1 means a second peak of nearly
/// the same height. The bilateral estimator is used when r < threshold.
struct TriggerPolicy {
  enum class Mode { Auto, Never, Always };
  Mode mode = Mode::Auto;
  /// Replaces the default 1 + 1/log2(m_w).
  std::optional<double> threshold;

  double threshold_for(int window_size) const;
  bool fires(const PeakRatio& ratio, int window_size) const;
};

/// 1 + 1 / log2(window_size).
double default_ratio_threshold(int window_size);

/// Plain phase correlation on the co-sited, wrap-padded windows.
PointEstimate pc_estimate(const Image& frame1, const Image& frame2, Point center, int window_size,
                          const EstimatorOptions& options = {});

/// Phase correlation after the asymmetric bilateral prefilter.
PointEstimate blpc_estimate(const Image& frame1, const Image& frame2, Point center, int window_size,
                            const BilateralParams& params, const EstimatorOptions& options = {});

/// pc_estimate, escalated to blpc_estimate when the trigger fires.
PointEstimate estimate_at(const Image& frame1, const Image& frame2, Point center, int window_size,
                          const BilateralParams& params, const TriggerPolicy& policy,
                          const EstimatorOptions& options = {});

enum class DenseMethod { PC, BLPC, Auto };

DenseMethod parse_dense_method(const std::string& name);
const char* to_string(DenseMethod m);

struct DenseResult {
  FlowField flow;
  /// Row-major per-pixel peak ratio of the plain PC surface.
  std::vector<PeakRatio> pc_ratio;
  /// Row-major per-pixel peak ratio of the surface the estimate came from.
  std::vector<PeakRatio> used_ratio;
};

/// One window per pixel (the dense protocol): every pixel gets the estimate
/// of the m_w x m_w window centred on it, with wrap padding at the borders.
/// Results do not depend on `threads`.
DenseResult dense_estimate(const Image& frame1, const Image& frame2, int window_size, DenseMethod method,
                           const BilateralParams& params, int threads = 1,
                           const TriggerPolicy& policy = {}, const EstimatorOptions& options = {});

}  // namespace blpc
