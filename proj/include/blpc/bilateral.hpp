#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blpc/core.hpp"

namespace blpc {

/// Configuration of the asymmetric bilateral prefilter.
///
/// Anchor intensities are taken from the slice_m x slice_m neighbourhood of
/// the frame-1 window centre. Frame 1 is smoothed with the tight spatial
/// sigma_s1, frame 2 with the wide sigma_s2.
struct BilateralParams {
  double sigma_s1 = 4.0;
  double sigma_s2 = 16.0;
  double sigma_r = 30.0;
  /// Range sigma for frame 2; defaults to sigma_r.
  std::optional<double> sigma_r2;
  int slice_m = 3;

  /// m_w/8, m_w/2, 30, 3.
  static BilateralParams defaults_for(int window_size);

  double range_sigma(int frame) const { return frame == 1 ? sigma_r : sigma_r2.value_or(sigma_r); }
  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Square Gaussian kernel with the analytic 1/(2 pi sigma^2) normalisation.
class Kernel2D {
 public:
  Kernel2D(int radius, std::vector<double> taps) : radius_(radius), taps_(std::move(taps)) {}

  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  double operator()(int dx, int dy) const {
    return taps_[static_cast<std::size_t>(dy + radius_) * side() + (dx + radius_)];
  }
  double sum() const;

 private:
  int radius_;
  std::vector<double> taps_;
};

/// Requires sigma > 0 and radius >= ceil(3 sigma); throws ConfigError otherwise.
Kernel2D gaussian_kernel(double sigma, int radius);
/// Radius ceil(3 sigma).
Kernel2D gaussian_kernel(double sigma);

/// Unit-peak range weight exp(-d^2 / (2 sigma^2)).
double range_weight(double difference, double sigma);

/// Periodic convolution with a unit-sum Gaussian of radius ceil(3 sigma)
/// (taps beyond the image wrap and accumulate).
Image gaussian_blur_wrap(const Image& image, double sigma);

/// Brute-force bilateral filter with periodic boundary. Used as the oracle
/// for the slice approximation.
Image reference_bilateral(const Image& image, double sigma_s, double sigma_r);
/// reference_bilateral with the frame-1 parameters.
Image reference_bilateral(const Image& image, const BilateralParams& params);

/// Divisions whose denominator falls below this value yield 0.
inline constexpr double kDivisionFloor = 1e-8;

/// One fixed-intensity slice:
///   (G_s (*) (w . I)) / (G_s (*) w),  w(q) = range_weight(anchor - I(q), sigma_r)
/// With periodic convolution. At pixels whose intensity equals `anchor` this
/// is exactly the bilateral filter response.
Image bilateral_slice(const Image& image, double anchor, double sigma_s, double sigma_r);

/// Range-gated filter of one image against a set of anchor intensities:
///   out(p) = (1/n) sum_k range_weight(I(p) - I_k, sigma_r) . Q_k(p)
/// where Q_k is bilateral_slice(image, I_k, sigma_s, sigma_r).
Image bilateral_filter_with_anchors(const Image& image, std::span<const double> anchors,
                                    double sigma_s, double sigma_r);

struct BilateralPair {
  Image first;
  Image second;
  std::vector<double> anchors;
};

/// Anchor intensities: the slice_m x slice_m block around (size/2, size/2),
/// scan order, duplicates kept.
std::vector<double> anchor_intensities(const Image& window, int slice_m);

/// Filters a frame-1 window and the co-sited frame-2 block with the
/// constraints carried by the frame-1 centre neighbourhood.
///
/// Both frames go through bilateral_filter_with_anchors with the frame-1
/// anchors; frame 1 uses sigma_s1, frame 2 sigma_s2. Pixels unlike every
/// anchor are driven towards zero, pixels matching an anchor keep their
/// bilateral response.
BilateralPair asymmetric_bilateral_pair(const Window& window1, const Image& frame2_region,
                                        const BilateralParams& params);

}  // namespace blpc
