#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blpc/core.hpp"
#include "blpc/spectral.hpp"

namespace blpc {

struct Rgb {
  unsigned char r = 0;
  unsigned char g = 0;
  unsigned char b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// The 55-entry Middlebury colour wheel (RY 15, YG 6, GC 4, CB 11, BM 13,
/// MR 6), entry 0 is pure red.
const std::vector<Rgb>& color_wheel();

/// Colour of one vector with magnitude already divided by the maximum.
/// Direction (1, 0) maps to red; saturation grows with magnitude; vectors
/// beyond the maximum are darkened to 75%.
Rgb flow_vector_color(double u, double v);

/// 99th percentile (nearest rank) of the valid vector magnitudes, or 1 when
/// every valid vector is zero.
double auto_max_magnitude(const FlowField& flow);

/// Zero vectors render white, invalid pixels black.
RgbImage flow_to_color(const FlowField& flow, std::optional<double> max_magnitude = std::nullopt);

/// Peak ratios at or above this value map to white in the ratio map.
inline constexpr double kRatioMapCeiling = 100.0;

/// 255 * log(r) / log(kRatioMapCeiling), clamped; single-peak surfaces are
/// white.
Image ratio_map(std::span<const PeakRatio> ratios, int width, int height);

}  // namespace blpc
