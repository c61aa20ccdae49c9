#include "blpc/bilateral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>

#include "blpc/errors.hpp"
#include "blpc/spectral.hpp"

namespace blpc {

namespace {

int radius_for(double sigma) { return static_cast<int>(std::ceil(3.0 * sigma)); }

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

// Spectrum of the unit-sum Gaussian folded onto a width x height torus,
// premultiplied by the 1/N of the inverse transform.
// Cached per thread; entries are never invalidated.
const ComplexBuffer& kernel_spectrum(double sigma, int width, int height) {
  thread_local std::map<std::tuple<double, int, int>, ComplexBuffer> cache;
  const auto key = std::make_tuple(sigma, width, height);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const Kernel2D k = gaussian_kernel(sigma);
  const double total = k.sum();
  ComplexBuffer folded(static_cast<std::size_t>(width) * height);
  const int r = k.radius();
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      folded[static_cast<std::size_t>(wrap(dy, height)) * width + wrap(dx, width)] +=
          k(dx, dy) / total;
  fft2d(folded, width, height, false);
  const double inv_n = 1.0 / static_cast<double>(folded.size());
  for (auto& c : folded) c *= inv_n;
  return cache.emplace(key, std::move(folded)).first->second;
}

// Periodic convolution of two real maps with the same kernel in one complex
// transform: returns (K * re, K * im) packed back into the buffer.
void convolve_packed(ComplexBuffer& buf, int width, int height, double sigma) {
  const auto& kernel = kernel_spectrum(sigma, width, height);
  fft2d(buf, width, height, false);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = mul(buf[i], kernel[i]);
  fft2d_unscaled_inverse(buf, width, height);
}

struct SliceAccumulator {
  ComplexBuffer buf;
  std::vector<double> weight;
};

// Adds count * w_k(p) * Q_k(p) for one anchor into `out`.
void accumulate_slice(const Image& img, double anchor, double count, double sigma_s, double sigma_r,
                      SliceAccumulator& scratch, std::vector<double>& out) {
  const std::size_t n = img.size();
  scratch.buf.resize(n);
  scratch.weight.resize(n);
  const auto data = img.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = range_weight(anchor - data[i], sigma_r);
    scratch.weight[i] = w;
    scratch.buf[i] = {w * data[i], w};
  }
  convolve_packed(scratch.buf, img.width(), img.height(), sigma_s);
  for (std::size_t i = 0; i < n; ++i) {
    const double den = scratch.buf[i].imag();
    if (den < kDivisionFloor) continue;
    out[i] += count * scratch.weight[i] * (scratch.buf[i].real() / den);
  }
}

}  // namespace

BilateralParams BilateralParams::defaults_for(int window_size) {
  BilateralParams p;
  p.sigma_s1 = window_size / 8.0;
  p.sigma_s2 = window_size / 2.0;
  p.sigma_r = 30.0;
  p.slice_m = 3;
  return p;
}

void BilateralParams::validate() const {
  if (!(sigma_s1 > 0.0) || !(sigma_s2 > 0.0)) throw ConfigError("spatial sigmas must be positive");
  if (!(sigma_s1 < sigma_s2)) {
    throw ConfigError("sigma_s1 (" + std::to_string(sigma_s1) + ") must be smaller than sigma_s2 (" +
                      std::to_string(sigma_s2) + ")");
  }
  if (!(sigma_r > 0.0)) throw ConfigError("sigma_r must be positive");
  if (sigma_r2 && !(*sigma_r2 > 0.0)) throw ConfigError("sigma_r2 must be positive");
  if (slice_m < 1 || slice_m % 2 == 0) throw ConfigError("slice_m must be odd and >= 1");
}

double Kernel2D::sum() const {
  double s = 0.0;
  for (double t : taps_) s += t;
  return s;
}

Kernel2D gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian_kernel: sigma must be positive");
  if (radius < radius_for(sigma)) {
    throw ConfigError("gaussian_kernel: radius " + std::to_string(radius) + " < ceil(3 sigma)");
  }
  const int side = 2 * radius + 1;
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> taps(static_cast<std::size_t>(side) * side);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      taps[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] =
          norm * std::exp(-(dx * dx + dy * dy) * inv);
  return Kernel2D(radius, std::move(taps));
}

Kernel2D gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian_kernel: sigma must be positive");
  return gaussian_kernel(sigma, radius_for(sigma));
}

double range_weight(double difference, double sigma) {
  return std::exp(-(difference * difference) / (2.0 * sigma * sigma));
}

Image gaussian_blur_wrap(const Image& image, double sigma) {
  ComplexBuffer buf(image.data().begin(), image.data().end());
  convolve_packed(buf, image.width(), image.height(), sigma);
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return Image(image.width(), image.height(), std::move(out));
}

Image reference_bilateral(const Image& image, double sigma_s, double sigma_r) {
  if (image.empty()) throw DimensionError("reference_bilateral: empty image");
  if (!(sigma_r > 0.0)) throw ConfigError("reference_bilateral: sigma_r must be positive");
  const Kernel2D k = gaussian_kernel(sigma_s);
  const int r = k.radius();
  Image out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double ip = image(x, y);
      double num = 0.0;
      double den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double iq = image.wrapped(x + dx, y + dy);
          const double wgt = k(dx, dy) * range_weight(ip - iq, sigma_r);
          num += wgt * iq;
          den += wgt;
        }
      }
      out(x, y) = den > 0.0 ? num / den : 0.0;
    }
  }
  return out;
}

Image reference_bilateral(const Image& image, const BilateralParams& params) {
  return reference_bilateral(image, params.sigma_s1, params.sigma_r);
}

Image bilateral_slice(const Image& image, double anchor, double sigma_s, double sigma_r) {
  if (image.empty()) throw DimensionError("bilateral_slice: empty image");
  const std::size_t n = image.size();
  ComplexBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = range_weight(anchor - image.data()[i], sigma_r);
    buf[i] = {w * image.data()[i], w};
  }
  convolve_packed(buf, image.width(), image.height(), sigma_s);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (buf[i].imag() >= kDivisionFloor) out[i] = buf[i].real() / buf[i].imag();
  return Image(image.width(), image.height(), std::move(out));
}

std::vector<double> anchor_intensities(const Image& window, int slice_m) {
  if (slice_m < 1 || slice_m % 2 == 0) throw ConfigError("slice_m must be odd and >= 1");
  const int cx = window.width() / 2;
  const int cy = window.height() / 2;
  const int h = slice_m / 2;
  std::vector<double> anchors;
  anchors.reserve(static_cast<std::size_t>(slice_m) * slice_m);
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx) anchors.push_back(window.wrapped(cx + dx, cy + dy));
  return anchors;
}

Image bilateral_filter_with_anchors(const Image& image, std::span<const double> anchors,
                                    double sigma_s, double sigma_r) {
  if (image.empty()) throw DimensionError("bilateral_filter_with_anchors: empty image");
  if (anchors.empty()) throw ConfigError("bilateral_filter_with_anchors: no anchors");

  // Equal anchors produce equal slices; evaluate each distinct value once.
  std::vector<std::pair<double, int>> distinct;
  for (double a : anchors) {
    auto it = std::find_if(distinct.begin(), distinct.end(), [a](const auto& d) { return d.first == a; });
    if (it == distinct.end()) {
      distinct.emplace_back(a, 1);
    } else {
      ++it->second;
    }
  }

  thread_local SliceAccumulator scratch;
  std::vector<double> out(image.size(), 0.0);
  for (const auto& [anchor, count] : distinct) {
    accumulate_slice(image, anchor, count, sigma_s, sigma_r, scratch, out);
  }
  const double inv_n = 1.0 / static_cast<double>(anchors.size());
  for (double& v : out) v *= inv_n;
  return Image(image.width(), image.height(), std::move(out));
}

BilateralPair asymmetric_bilateral_pair(const Window& window1, const Image& frame2_region,
                                        const BilateralParams& params) {
  params.validate();
  const Image& first = window1.pixels;
  require_same_shape(first, frame2_region, "asymmetric_bilateral_pair");
  if (first.empty()) throw DimensionError("asymmetric_bilateral_pair: empty window");

  BilateralPair result;
  result.anchors = anchor_intensities(first, params.slice_m);
  result.first = bilateral_filter_with_anchors(first, result.anchors, params.sigma_s1, params.range_sigma(1));
  result.second =
      bilateral_filter_with_anchors(frame2_region, result.anchors, params.sigma_s2, params.range_sigma(2));
  return result;
}

}  // namespace blpc
