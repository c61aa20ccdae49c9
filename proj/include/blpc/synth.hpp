#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blpc/core.hpp"

namespace blpc {

/// Two-octave value noise, band-limited with a small Gaussian so that
/// subpixel displacements do not alias.
struct TextureSpec {
  double mean = 128.0;
  double amplitude = 40.0;
  int fine_cell = 2;
  int coarse_cell = 5;
  double fine_weight = 0.7;
  double smoothing_sigma = 0.5;
};

enum class ShapeKind { Rectangle, Disk };

struct SceneObject {
  ShapeKind shape = ShapeKind::Rectangle;
  /// Centre in frame-1 pixel coordinates.
  double cx = 0.0;
  double cy = 0.0;
  /// Rectangle: full width/height. Disk: width is the diameter.
  double width = 0.0;
  double height = 0.0;
  TextureSpec texture;
  FlowVector motion;
};

struct SceneSpec {
  std::string name;
  int width = 256;
  int height = 256;
  TextureSpec background;
  FlowVector background_motion;
  /// Back to front; later objects occlude earlier ones.
  std::vector<SceneObject> objects;
  std::uint64_t seed = 0;
  /// Motion components must stay within +-max_motion (half the window size).
  double max_motion = 16.0;
  /// Tile size for the texture energy check.
  int energy_tile = 32;
  double min_tile_variance = 100.0;
};

struct ScenePair {
  std::string name;
  Image frame1;
  Image frame2;
  FlowField gt;
};

/// Throws SpecError for out-of-range motions, objects entirely off canvas,
/// or textures whose tile variance falls below the minimum.
void validate(const SceneSpec& spec);

/// Renders both frames and the frame-1 anchored ground truth.
/// Deterministic in spec.seed.
ScenePair render_pair(const SceneSpec& spec);

/// The nine scene descriptions of the standard multi-motion suite.
std::vector<SceneSpec> standard_suite_specs(std::uint64_t seed);
std::vector<ScenePair> standard_suite(std::uint64_t seed);

/// Seeded band-limited value noise covering width x height.
Image value_noise_texture(const TextureSpec& texture, int width, int height, std::uint64_t seed);

/// Exact periodic translation by (dx, dy) through a phase ramp:
/// out(m) = in(m - d). Integer shifts reproduce a circular shift.
Image fourier_shift(const Image& image, FlowVector shift);

}  // namespace blpc
