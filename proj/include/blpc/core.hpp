#pragma once

// Shared raster types.
//
// Conventions used throughout the library:
//  * x grows rightward, y grows downward, origin at the top-left pixel.
//  * Pixel storage is row-major: index = y * width + x.
//  * A flow vector (dx, dy) attached to pixel p of frame 1 is the forward
//    displacement of that pixel, i.e. frame2(p + d) ~= frame1(p). Equivalently
//    frame2(m) = frame1(m - d) for a pure translation d.

#include <cstddef>
#include <span>
#include <vector>

namespace blpc {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct FlowVector {
  double dx = 0.0;
  double dy = 0.0;

  friend bool operator==(const FlowVector&, const FlowVector&) = default;
};

/// Single-channel floating point raster, nominal intensity range [0, 255].
class Image {
 public:
  Image() = default;
  explicit Image(int width, int height, double fill = 0.0);
  /// Takes ownership of row-major `data`; throws DimensionError on a size
  /// mismatch and ConfigError on non-finite samples.
  Image(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator()(int x, int y) { return data_[index(x, y)]; }

  /// Periodic (wrap) access; any integer coordinate is valid.
  double wrapped(int x, int y) const;
  /// Clamped access; coordinates are clipped to the border.
  double clamped(int x, int y) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double min() const;
  double max() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Interleaved 8-bit RGB raster used for visualisations and colour metrics.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> data;  // r, g, b per pixel

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  unsigned char* pixel(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const unsigned char* pixel(int x, int y) const {
    return &data[(static_cast<std::size_t>(y) * width + x) * 3];
  }
};

/// Dense per-pixel displacement field with a validity mask.
class FlowField {
 public:
  FlowField() = default;
  explicit FlowField(int width, int height, FlowVector fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  const FlowVector& operator()(int x, int y) const { return vectors_[index(x, y)]; }
  FlowVector& operator()(int x, int y) { return vectors_[index(x, y)]; }

  bool valid(int x, int y) const { return valid_[index(x, y)] != 0; }
  void set_valid(int x, int y, bool v) { valid_[index(x, y)] = v ? 1 : 0; }

  std::span<const FlowVector> vectors() const noexcept { return vectors_; }
  std::span<FlowVector> vectors() noexcept { return vectors_; }
  std::span<const unsigned char> mask() const noexcept { return valid_; }
  std::span<unsigned char> mask() noexcept { return valid_; }

  std::size_t valid_count() const;

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<FlowVector> vectors_;
  std::vector<unsigned char> valid_;
};

/// A square block of a parent image, extracted with periodic padding.
struct Window {
  Point center;
  int size = 0;
  Image pixels;
};

constexpr bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

/// Rec. 601 luma.
constexpr double luma(double r, double g, double b) noexcept {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

/// The size x size block whose pixel (size/2, size/2) is `center`.
/// Coordinates outside the image wrap modulo its dimensions.
Window extract_window(const Image& image, Point center, int size);

/// Bilinear interpolation with border clamping. Exact at integer coordinates.
double bilinear_sample(const Image& image, double x, double y);

/// Throws DimensionError unless both images have the same shape.
void require_same_shape(const Image& a, const Image& b, const char* what);
void require_same_shape(const FlowField& a, const FlowField& b, const char* what);

}  // namespace blpc
