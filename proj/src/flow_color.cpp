#include "blpc/flow_color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blpc/errors.hpp"

namespace blpc {

const std::vector<Rgb>& color_wheel() {
  static const std::vector<Rgb> wheel = [] {
    constexpr int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
    std::vector<Rgb> w;
    auto ramp = [](int i, int n) { return static_cast<unsigned char>(255 * i / n); };
    for (int i = 0; i < RY; ++i) w.push_back({255, ramp(i, RY), 0});
    for (int i = 0; i < YG; ++i) w.push_back({static_cast<unsigned char>(255 - ramp(i, YG)), 255, 0});
    for (int i = 0; i < GC; ++i) w.push_back({0, 255, ramp(i, GC)});
    for (int i = 0; i < CB; ++i) w.push_back({0, static_cast<unsigned char>(255 - ramp(i, CB)), 255});
    for (int i = 0; i < BM; ++i) w.push_back({ramp(i, BM), 0, 255});
    for (int i = 0; i < MR; ++i) w.push_back({255, 0, static_cast<unsigned char>(255 - ramp(i, MR))});
    return w;
  }();
  return wheel;
}

Rgb flow_vector_color(double u, double v) {
  const auto& wheel = color_wheel();
  const int ncols = static_cast<int>(wheel.size());
  const double rad = std::sqrt(u * u + v * v);
  double a = std::atan2(-v, -u) / std::numbers::pi;
  // +pi and -pi are the same direction; pin it to the start of the wheel.
  if (a >= 1.0) a = -1.0;
  const double fk = (a + 1.0) / 2.0 * (ncols - 1);
  const int k0 = static_cast<int>(std::floor(fk));
  const int k1 = (k0 + 1) % ncols;
  const double f = fk - k0;
  auto channel = [&](unsigned char c0, unsigned char c1) {
    double col = ((1.0 - f) * c0 + f * c1) / 255.0;
    col = rad <= 1.0 ? 1.0 - rad * (1.0 - col) : col * 0.75;
    return static_cast<unsigned char>(std::floor(255.0 * col));
  };
  const Rgb c0 = wheel[static_cast<std::size_t>(k0)];
  const Rgb c1 = wheel[static_cast<std::size_t>(k1)];
  return {channel(c0.r, c1.r), channel(c0.g, c1.g), channel(c0.b, c1.b)};
}

double auto_max_magnitude(const FlowField& flow) {
  std::vector<double> mags;
  mags.reserve(flow.size());
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      if (!flow.valid(x, y)) continue;
      const FlowVector v = flow(x, y);
      if (std::isfinite(v.dx) && std::isfinite(v.dy)) mags.push_back(std::hypot(v.dx, v.dy));
    }
  if (mags.empty()) return 1.0;
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(mags.size())));
  const std::size_t idx = std::max<std::size_t>(rank, 1) - 1;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(idx), mags.end());
  return mags[idx] > 0.0 ? mags[idx] : 1.0;
}

RgbImage flow_to_color(const FlowField& flow, std::optional<double> max_magnitude) {
  if (max_magnitude && !(*max_magnitude > 0.0)) throw ConfigError("flow_to_color: max magnitude must be positive");
  const double maxm = max_magnitude.value_or(auto_max_magnitude(flow));
  RgbImage out(flow.width(), flow.height());
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      unsigned char* p = out.pixel(x, y);
      const FlowVector v = flow(x, y);
      if (!flow.valid(x, y) || !std::isfinite(v.dx) || !std::isfinite(v.dy)) continue;  // black
      const Rgb c = flow_vector_color(v.dx / maxm, v.dy / maxm);
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
    }
  return out;
}

Image ratio_map(std::span<const PeakRatio> ratios, int width, int height) {
  if (ratios.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("ratio_map: ratio count does not match dimensions");
  }
  Image out(width, height);
  const double denom = std::log(kRatioMapCeiling);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const PeakRatio& r = ratios[i];
    const double v = r.is_single_peak() ? 255.0 : 255.0 * std::log(std::max(r.value(), 1.0)) / denom;
    out.data()[i] = std::round(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

}  // namespace blpc
