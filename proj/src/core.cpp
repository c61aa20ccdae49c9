#include "blpc/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blpc/errors.hpp"

namespace blpc {

namespace {

int wrap_index(int i, int n) noexcept {
  int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw DimensionError("negative image dimensions");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) throw DimensionError("negative image dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("image data length " + std::to_string(data_.size()) + " != " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw ConfigError("image contains a non-finite sample");
  }
}

double Image::wrapped(int x, int y) const {
  return data_[index(wrap_index(x, width_), wrap_index(y, height_))];
}

double Image::clamped(int x, int y) const {
  return data_[index(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1))];
}

double Image::min() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double Image::max() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

FlowField::FlowField(int width, int height, FlowVector fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw DimensionError("negative flow field dimensions");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  vectors_.assign(n, fill);
  valid_.assign(n, 1);
}

std::size_t FlowField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), 1));
}

Window extract_window(const Image& image, Point center, int size) {
  if (!is_power_of_two(size)) {
    throw ConfigError("window size " + std::to_string(size) + " is not a power of two");
  }
  if (size > std::min(image.width(), image.height())) {
    throw DimensionError("window size " + std::to_string(size) + " exceeds image " +
                         std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  const int half = size / 2;
  Image block(size, size);
  const int w = image.width();
  const int h = image.height();
  const int x0 = center.x - half;
  const int y0 = center.y - half;
  for (int j = 0; j < size; ++j) {
    const int sy = wrap_index(y0 + j, h);
    for (int i = 0; i < size; ++i) {
      block(i, j) = image(wrap_index(x0 + i, w), sy);
    }
  }
  return Window{center, size, std::move(block)};
}

double bilinear_sample(const Image& image, double x, double y) {
  const int w = image.width();
  const int h = image.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  if (fx == 0.0 && fy == 0.0) return image(x0, y0);
  const double top = image(x0, y0) + fx * (image(x1, y0) - image(x0, y0));
  const double bottom = image(x0, y1) + fx * (image(x1, y1) - image(x0, y1));
  return top + fy * (bottom - top);
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                         "x" + std::to_string(b.height()));
  }
}

void require_same_shape(const FlowField& a, const FlowField& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                         "x" + std::to_string(b.height()));
  }
}

}  // namespace blpc
