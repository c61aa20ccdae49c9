#pragma once

#include <complex>
#include <limits>
#include <new>
#include <span>
#include <vector>

#include "blpc/core.hpp"

namespace blpc {

using Complex = std::complex<double>;

/// Allocator giving 64-byte aligned storage so FFTW can use its SIMD
/// code paths on the buffer.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlignment)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Unnormalised 2D DFT of a real image, stored row-major (l rows, k columns).
struct Spectrum {
  int width = 0;
  int height = 0;
  ComplexBuffer data;

  const Complex& operator()(int k, int l) const { return data[static_cast<std::size_t>(l) * width + k]; }
};

Spectrum forward_dft(const Image& image);
/// Inverse of forward_dft (1/N normalisation), real part.
Image inverse_dft(const Spectrum& spectrum);

/// In-place 2D complex FFT on a row-major width x height buffer.
/// `inverse` applies the 1/(width*height) normalisation. Buffers from
/// ComplexBuffer take the faster aligned path.
void fft2d(std::span<Complex> data, int width, int height, bool inverse);
/// Inverse transform without the 1/N factor.
void fft2d_unscaled_inverse(std::span<Complex> data, int width, int height);

/// a * b without the C99 Annex G inf/nan recovery.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

struct Peak {
  Point location;  // integer surface coordinates in [0, W) x [0, H)
  double value = 0.0;
};

/// Real-valued phase correlation surface with its two dominant maxima.
/// peak2 is the largest local maximum outside the 3x3 (wrapped)
/// neighbourhood of peak1; when no such maximum exists it has value 0.
struct CorrelationSurface {
  int width = 0;
  int height = 0;
  std::vector<double> data;
  Peak peak1;
  Peak peak2;

  double at(int x, int y) const;  // wrapped access
};

struct SpectralOptions {
  /// Multiply both inputs by a separable raised-cosine window before the DFT.
  bool taper = false;
};

/// Inverse DFT of the unit-magnitude cross-power spectrum
/// (B . conj(A)) / (|B| |A|), real part. Bins whose magnitude product falls
/// below 1e-12 x (mean magnitude product) are zeroed.
/// For b(m) = a(m - t) the surface peaks at t.
CorrelationSurface phase_correlation_surface(const Image& a, const Image& b,
                                             const SpectralOptions& options = {});

/// Highest over second-highest peak. A surface whose second peak is at or
/// below `kPeakFloor` has no competing motion and reports single_peak().
class PeakRatio {
 public:
  static constexpr double kPeakFloor = 1e-6;

  static PeakRatio finite(double r) { return PeakRatio(r, false); }
  static PeakRatio single_peak() { return PeakRatio(std::numeric_limits<double>::max(), true); }

  bool is_single_peak() const noexcept { return single_; }
  /// Only meaningful when !is_single_peak().
  double value() const noexcept { return value_; }
  /// Ordering where single_peak() is larger than any finite ratio.
  bool below(double threshold) const noexcept { return !single_ && value_ < threshold; }
  bool greater_than(const PeakRatio& other) const noexcept;

 private:
  PeakRatio(double v, bool s) : value_(v), single_(s) {}
  double value_;
  bool single_;
};

PeakRatio peak_ratio(const CorrelationSurface& surface);

/// Three-point refinement around peak1:
///   dx = Dx / (C(0,0) + |Dx|),  Dx = C(1,0) - C(-1,0)
/// (and likewise in y), with C read around the integer peak using wrap
/// indexing. The integer peak is unwrapped to a signed shift in [-N/2, N/2).
FlowVector subpixel_refine(const CorrelationSurface& surface);

/// Signed shift for a surface coordinate: values >= n/2 map to negative.
constexpr int unwrap_shift(int coord, int n) noexcept { return coord >= n / 2 ? coord - n : coord; }

}  // namespace blpc
