#include "blpc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "blpc/errors.hpp"

namespace blpc {

namespace {

// FFTW's planner is not thread-safe but executing an existing plan on new
// arrays is. Plans are created once per (width, height, direction) under a
// lock and reused. FFTW_ESTIMATE keeps the chosen algorithm, and therefore
// every rounding decision, identical from run to run.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int width, int height, bool inverse, bool aligned) {
    const auto key = std::make_tuple(width, height, inverse, aligned);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* scratch = fftw_alloc_complex(static_cast<std::size_t>(width) * height);
    fftw_plan plan = fftw_plan_dft_2d(height, width, scratch, scratch,
                                      inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      aligned ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, bool, bool>, fftw_plan> plans_;
};

std::vector<double> hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  return w;
}

bool all_zero(const Image& img) {
  for (double v : img.data())
    if (v != 0.0) return false;
  return true;
}

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

void locate_peaks(CorrelationSurface& s) {
  const int w = s.width;
  const int h = s.height;
  const double* d = s.data.data();
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.data.size(); ++i)
    if (d[i] > d[best]) best = i;
  const Point p1{static_cast<int>(best % w), static_cast<int>(best / w)};
  s.peak1 = {p1, d[best]};

  auto near_p1 = [&](int x, int y) {
    const int ddx = std::min(wrap(x - p1.x, w), wrap(p1.x - x, w));
    const int ddy = std::min(wrap(y - p1.y, h), wrap(p1.y - y, h));
    return ddx <= 1 && ddy <= 1;
  };

  bool found = false;
  Peak second{p1, 0.0};
  for (int y = 0; y < h; ++y) {
    const double* rows[3] = {d + static_cast<std::size_t>(y == 0 ? h - 1 : y - 1) * w,
                             d + static_cast<std::size_t>(y) * w,
                             d + static_cast<std::size_t>(y == h - 1 ? 0 : y + 1) * w};
    for (int x = 0; x < w; ++x) {
      const double v = rows[1][x];
      if (found && v <= second.value) continue;
      const int xl = x == 0 ? w - 1 : x - 1;
      const int xr = x == w - 1 ? 0 : x + 1;
      if (rows[0][xl] > v || rows[0][x] > v || rows[0][xr] > v || rows[1][xl] > v || rows[1][xr] > v ||
          rows[2][xl] > v || rows[2][x] > v || rows[2][xr] > v) {
        continue;
      }
      if (near_p1(x, y)) continue;
      second = {{x, y}, v};
      found = true;
    }
  }
  if (!found || second.value < 0.0) second = {p1, 0.0};
  s.peak2 = second;
}

void execute(std::span<Complex> data, int width, int height, bool inverse) {
  if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("fft2d: buffer length does not match dimensions");
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(buf)) == 0;
  fftw_plan plan = PlanCache::instance().get(width, height, inverse, aligned);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft2d_unscaled_inverse(std::span<Complex> data, int width, int height) {
  execute(data, width, height, true);
}

void fft2d(std::span<Complex> data, int width, int height, bool inverse) {
  execute(data, width, height, inverse);
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& c : data) c *= scale;
  }
}

Spectrum forward_dft(const Image& image) {
  if (image.width() < 2 || image.height() < 2) {
    throw DimensionError("forward_dft: dimensions must be at least 2x2");
  }
  Spectrum s{image.width(), image.height(), {}};
  s.data.assign(image.data().begin(), image.data().end());
  fft2d(s.data, s.width, s.height, false);
  return s;
}

Image inverse_dft(const Spectrum& spectrum) {
  if (spectrum.width < 2 || spectrum.height < 2) {
    throw DimensionError("inverse_dft: dimensions must be at least 2x2");
  }
  ComplexBuffer buf = spectrum.data;
  fft2d(buf, spectrum.width, spectrum.height, true);
  std::vector<double> real(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) real[i] = buf[i].real();
  return Image(spectrum.width, spectrum.height, std::move(real));
}

double CorrelationSurface::at(int x, int y) const {
  return data[static_cast<std::size_t>(wrap(y, height)) * width + wrap(x, width)];
}

CorrelationSurface phase_correlation_surface(const Image& a, const Image& b,
                                             const SpectralOptions& options) {
  require_same_shape(a, b, "phase_correlation_surface");
  const int w = a.width();
  const int h = a.height();
  if (w < 2 || h < 2) throw DimensionError("phase_correlation_surface: degenerate dimensions");
  if (all_zero(a) || all_zero(b)) {
    throw DegenerateInputError("phase_correlation_surface: all-zero input");
  }

  // Both real inputs go through one complex transform: z = a + i b.
  const std::size_t n = static_cast<std::size_t>(w) * h;
  thread_local ComplexBuffer z;
  thread_local ComplexBuffer cross;
  thread_local std::vector<double> magnitude;
  z.resize(n);
  cross.resize(n);
  magnitude.resize(n);
  if (options.taper) {
    const auto wx = hann(w);
    const auto wy = hann(h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double t = wx[x] * wy[y];
        z[static_cast<std::size_t>(y) * w + x] = {a(x, y) * t, b(x, y) * t};
      }
  } else {
    for (std::size_t i = 0; i < n; ++i) z[i] = {a.data()[i], b.data()[i]};
  }
  fft2d(z, w, h, false);

  double mean = 0.0;
  for (int l = 0; l < h; ++l) {
    const int ml = (h - l) % h;
    for (int k = 0; k < w; ++k) {
      const int mk = (w - k) % w;
      const Complex zk = z[static_cast<std::size_t>(l) * w + k];
      const Complex zm = std::conj(z[static_cast<std::size_t>(ml) * w + mk]);
      const Complex fa = 0.5 * (zk + zm);
      const Complex fb = Complex(0.0, -0.5) * (zk - zm);
      const std::size_t i = static_cast<std::size_t>(l) * w + k;
      cross[i] = mul(fb, std::conj(fa));
      magnitude[i] = std::sqrt(std::norm(fa) * std::norm(fb));
      mean += magnitude[i];
    }
  }
  mean /= static_cast<double>(n);
  const double floor = 1e-12 * mean;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = magnitude[i];
    cross[i] = m < floor || m == 0.0 ? Complex{} : Complex(cross[i].real() / m, cross[i].imag() / m);
  }
  fft2d_unscaled_inverse(cross, w, h);

  CorrelationSurface s;
  s.width = w;
  s.height = h;
  s.data.resize(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) s.data[i] = cross[i].real() * scale;
  locate_peaks(s);
  return s;
}

bool PeakRatio::greater_than(const PeakRatio& other) const noexcept {
  if (single_) return !other.single_;
  if (other.single_) return false;
  return value_ > other.value_;
}

PeakRatio peak_ratio(const CorrelationSurface& surface) {
  if (surface.peak2.value <= PeakRatio::kPeakFloor) return PeakRatio::single_peak();
  return PeakRatio::finite(surface.peak1.value / surface.peak2.value);
}

FlowVector subpixel_refine(const CorrelationSurface& surface) {
  const Point p = surface.peak1.location;
  const double c0 = surface.at(p.x, p.y);
  const double dx = surface.at(p.x + 1, p.y) - surface.at(p.x - 1, p.y);
  const double dy = surface.at(p.x, p.y + 1) - surface.at(p.x, p.y - 1);
  auto offset = [c0](double d) {
    const double denom = c0 + std::abs(d);
    return denom > 0.0 ? d / denom : 0.0;
  };
  return {unwrap_shift(p.x, surface.width) + offset(dx),
          unwrap_shift(p.y, surface.height) + offset(dy)};
}

}  // namespace blpc
