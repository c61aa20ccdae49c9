#pragma once

#include <cstdint>
#include <random>

#include "blpc/core.hpp"

namespace blpc::test {

inline Image random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 255.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Image img(w, h);
  for (double& v : img.data()) v = d(rng);
  return img;
}

inline Image random_u8_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  Image img(w, h);
  for (double& v : img.data()) v = d(rng);
  return img;
}

// Integer circular shift: out(m) = in(m - t).
inline Image circular_shift(const Image& in, int tx, int ty) {
  Image out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) out(x, y) = in.wrapped(x - tx, y - ty);
  return out;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace blpc::test
