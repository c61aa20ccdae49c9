#include "blpc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "blpc/bilateral.hpp"
#include "blpc/errors.hpp"
#include "blpc/spectral.hpp"

namespace blpc {

namespace {

// Room around the visible canvas so that shifted layers never wrap into view.
constexpr int kMargin = 32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [-1, 1] from the raw engine output, independent of the
// standard library's distribution implementation.
double signed_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

std::vector<double> value_noise_octave(int cell, int width, int height, std::mt19937_64& rng) {
  const int gw = width / cell + 2;
  const int gh = height / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (double& v : lattice) v = signed_unit(rng);
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int gy = y / cell;
    const double fy = smoothstep(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < width; ++x) {
      const int gx = x / cell;
      const double fx = smoothstep(static_cast<double>(x % cell) / cell);
      auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
      const double top = at(gx, gy) + fx * (at(gx + 1, gy) - at(gx, gy));
      const double bottom = at(gx, gy + 1) + fx * (at(gx + 1, gy + 1) - at(gx, gy + 1));
      out[static_cast<std::size_t>(y) * width + x] = top + fy * (bottom - top);
    }
  }
  return out;
}

// Signed DFT frequency of bin k. Bins above n/2 are negative; the even-size
// Nyquist bin stays at -n/2.
int signed_frequency(int k, int n) { return 2 * k < n ? k : k - n; }

bool covers(const SceneObject& o, double x, double y) {
  if (o.shape == ShapeKind::Rectangle) {
    return std::abs(x - o.cx) <= o.width / 2.0 && std::abs(y - o.cy) <= o.height / 2.0;
  }
  const double r = o.width / 2.0;
  const double ddx = x - o.cx;
  const double ddy = y - o.cy;
  return ddx * ddx + ddy * ddy <= r * r;
}

bool motion_in_range(FlowVector v, double limit) {
  return std::isfinite(v.dx) && std::isfinite(v.dy) && std::abs(v.dx) <= limit && std::abs(v.dy) <= limit;
}

std::uint64_t layer_seed(std::uint64_t seed, std::size_t layer) {
  return splitmix64(seed ^ splitmix64(0xb1f0c0deULL + layer));
}

void check_tile_variance(const Image& canvas, const SceneSpec& spec, const std::string& layer) {
  const int tile = spec.energy_tile;
  for (int ty = 0; ty + tile <= spec.height; ty += tile) {
    for (int tx = 0; tx + tile <= spec.width; tx += tile) {
      double sum = 0.0;
      double sq = 0.0;
      for (int y = 0; y < tile; ++y)
        for (int x = 0; x < tile; ++x) {
          const double v = canvas(kMargin + tx + x, kMargin + ty + y);
          sum += v;
          sq += v * v;
        }
      const double n = static_cast<double>(tile) * tile;
      const double var = sq / n - (sum / n) * (sum / n);
      if (var <= spec.min_tile_variance) {
        throw SpecError(spec.name + ": texture of " + layer + " has tile variance " + std::to_string(var) +
                        " <= " + std::to_string(spec.min_tile_variance));
      }
    }
  }
}

}  // namespace

Image value_noise_texture(const TextureSpec& texture, int width, int height, std::uint64_t seed) {
  if (texture.fine_cell < 1 || texture.coarse_cell < 1) throw SpecError("texture cell sizes must be >= 1");
  std::mt19937_64 rng(seed);
  const auto fine = value_noise_octave(texture.fine_cell, width, height, rng);
  const auto coarse = value_noise_octave(texture.coarse_cell, width, height, rng);
  std::vector<double> data(fine.size());
  const double wf = texture.fine_weight;
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = texture.mean + texture.amplitude * (wf * fine[i] + (1.0 - wf) * coarse[i]);
  }
  Image img(width, height, std::move(data));
  if (texture.smoothing_sigma > 0.0) img = gaussian_blur_wrap(img, texture.smoothing_sigma);
  return img;
}

Image fourier_shift(const Image& image, FlowVector shift) {
  const int w = image.width();
  const int h = image.height();
  ComplexBuffer buf(image.data().begin(), image.data().end());
  fft2d(buf, w, h, false);
  for (int l = 0; l < h; ++l) {
    const double fl = static_cast<double>(signed_frequency(l, h)) / h;
    for (int k = 0; k < w; ++k) {
      const double fk = static_cast<double>(signed_frequency(k, w)) / w;
      const double phase = -2.0 * std::numbers::pi * (fk * shift.dx + fl * shift.dy);
      buf[static_cast<std::size_t>(l) * w + k] *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  fft2d(buf, w, h, true);
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return Image(w, h, std::move(out));
}

void validate(const SceneSpec& spec) {
  if (spec.width < 8 || spec.height < 8) throw SpecError(spec.name + ": canvas too small");
  if (!motion_in_range(spec.background_motion, spec.max_motion)) {
    throw SpecError(spec.name + ": background motion exceeds +-" + std::to_string(spec.max_motion));
  }
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    if (!(o.width > 0.0) || (o.shape == ShapeKind::Rectangle && !(o.height > 0.0))) {
      throw SpecError(spec.name + ": object " + std::to_string(i) + " has no extent");
    }
    if (!motion_in_range(o.motion, spec.max_motion)) {
      throw SpecError(spec.name + ": object " + std::to_string(i) + " motion exceeds +-" +
                      std::to_string(spec.max_motion));
    }
    const double hw = o.width / 2.0;
    const double hh = (o.shape == ShapeKind::Disk ? o.width : o.height) / 2.0;
    if (o.cx + hw < 0.0 || o.cx - hw > spec.width - 1 || o.cy + hh < 0.0 || o.cy - hh > spec.height - 1) {
      throw SpecError(spec.name + ": object " + std::to_string(i) + " lies entirely outside the canvas");
    }
  }
}

ScenePair render_pair(const SceneSpec& spec) {
  validate(spec);
  const int w = spec.width;
  const int h = spec.height;
  const int cw = w + 2 * kMargin;
  const int ch = h + 2 * kMargin;

  ScenePair out;
  out.name = spec.name;
  out.frame1 = Image(w, h);
  out.frame2 = Image(w, h);
  out.gt = FlowField(w, h, spec.background_motion);

  auto paint = [&](const Image& canvas, FlowVector motion, const SceneObject* object) {
    const Image moved = fourier_shift(canvas, motion);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (object == nullptr || covers(*object, x, y)) {
          out.frame1(x, y) = canvas(x + kMargin, y + kMargin);
          if (object != nullptr) out.gt(x, y) = motion;
        }
        if (object == nullptr || covers(*object, x - motion.dx, y - motion.dy)) {
          out.frame2(x, y) = moved(x + kMargin, y + kMargin);
        }
      }
    }
  };

  const Image background = value_noise_texture(spec.background, cw, ch, layer_seed(spec.seed, 0));
  check_tile_variance(background, spec, "background");
  paint(background, spec.background_motion, nullptr);
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    const Image layer = value_noise_texture(o.texture, cw, ch, layer_seed(spec.seed, i + 1));
    check_tile_variance(layer, spec, "object " + std::to_string(i));
    paint(layer, o.motion, &o);
  }

  for (double& v : out.frame1.data()) v = std::clamp(v, 0.0, 255.0);
  for (double& v : out.frame2.data()) v = std::clamp(v, 0.0, 255.0);
  return out;
}

std::vector<SceneSpec> standard_suite_specs(std::uint64_t seed) {
  auto tex = [](double mean, double amplitude) {
    TextureSpec t;
    t.mean = mean;
    t.amplitude = amplitude;
    return t;
  };
  auto rect = [](double cx, double cy, double width, double height, TextureSpec t, FlowVector v) {
    return SceneObject{ShapeKind::Rectangle, cx, cy, width, height, t, v};
  };
  auto disk = [](double cx, double cy, double diameter, TextureSpec t, FlowVector v) {
    return SceneObject{ShapeKind::Disk, cx, cy, diameter, diameter, t, v};
  };

  const TextureSpec dark = tex(60.0, 50.0);
  const TextureSpec bright = tex(195.0, 50.0);
  const TextureSpec mid = tex(128.0, 45.0);

  std::vector<SceneSpec> suite;
  auto add = [&](std::string name, TextureSpec bg, FlowVector bg_motion, std::vector<SceneObject> objects) {
    SceneSpec s;
    s.name = std::move(name);
    s.background = bg;
    s.background_motion = bg_motion;
    s.objects = std::move(objects);
    s.seed = splitmix64(seed + suite.size());
    suite.push_back(std::move(s));
  };

  add("two_motion_square", dark, {1, 0}, {rect(128, 128, 96, 96, bright, {-2, 3})});
  add("two_motion_disk", bright, {0, -2}, {disk(120, 136, 110, dark, {3, 1})});
  add("three_motion", dark, {1, 1},
      {rect(80, 90, 80, 70, bright, {-3, 0}), disk(180, 170, 80, mid, {2, -3})});
  add("three_motion_overlap", mid, {0, 0},
      {rect(100, 110, 90, 80, dark, {4, 0}), rect(160, 150, 80, 90, bright, {-1, -4})});
  add("thin_bar", dark, {-1, 0}, {rect(128, 128, 12, 200, bright, {3, 2})});
  add("thin_cross", bright, {2, 0},
      {rect(128, 100, 220, 10, dark, {0, 3}), rect(90, 128, 10, 220, mid, {-3, 0})});
  add("low_contrast", tex(100.0, 45.0), {1, -1}, {rect(128, 128, 100, 90, tex(160.0, 45.0), {-3, 2})});
  add("subpixel_two", dark, {0.5, -0.25}, {rect(128, 128, 96, 96, bright, {-1.5, 2.25})});
  add("subpixel_three", bright, {-0.75, 0.5},
      {disk(90, 100, 90, dark, {2.5, 1.25}), rect(175, 165, 80, 80, mid, {-2.25, -1.75})});
  return suite;
}

std::vector<ScenePair> standard_suite(std::uint64_t seed) {
  std::vector<ScenePair> out;
  for (const auto& spec : standard_suite_specs(seed)) out.push_back(render_pair(spec));
  return out;
}

}  // namespace blpc
