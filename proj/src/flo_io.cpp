#include "blpc/flo_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

#include "blpc/errors.hpp"
#include "blpc/fileutil.hpp"

namespace blpc {

namespace {

std::uint32_t load_u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

float load_f32(std::string_view b, std::size_t at) { return std::bit_cast<float>(load_u32(b, at)); }
void store_f32(std::string& out, float v) { store_u32(out, std::bit_cast<std::uint32_t>(v)); }

bool unknown(float v) { return !std::isfinite(v) || std::abs(v) > kFloUnknownThreshold; }

}  // namespace

FlowField decode_flo(std::string_view bytes) {
  if (bytes.size() < 4) throw LengthError("flo: file shorter than the tag");
  if (load_f32(bytes, 0) != kFloTag) throw FormatError("flo: wrong sanity tag");
  if (bytes.size() < 12) throw LengthError("flo: truncated header");
  const auto w = static_cast<std::int32_t>(load_u32(bytes, 4));
  const auto h = static_cast<std::int32_t>(load_u32(bytes, 8));
  if (w <= 0 || h <= 0 || w > (1 << 20) || h > (1 << 20)) {
    throw FormatError("flo: implausible dimensions " + std::to_string(w) + "x" + std::to_string(h));
  }
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const std::size_t expected = 12 + n * 8;
  if (bytes.size() != expected) {
    throw LengthError("flo: payload is " + std::to_string(bytes.size() - 12) + " bytes, header implies " +
                      std::to_string(n * 8));
  }
  FlowField f(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    const float u = load_f32(bytes, 12 + 8 * i);
    const float v = load_f32(bytes, 16 + 8 * i);
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    if (unknown(u) || unknown(v)) {
      f.set_valid(x, y, false);
    } else {
      f(x, y) = {u, v};
    }
  }
  return f;
}

std::string encode_flo(const FlowField& flow) {
  if (flow.width() <= 0 || flow.height() <= 0) throw DimensionError("flo: empty flow field");
  std::string out;
  out.reserve(12 + flow.size() * 8);
  store_f32(out, kFloTag);
  store_u32(out, static_cast<std::uint32_t>(flow.width()));
  store_u32(out, static_cast<std::uint32_t>(flow.height()));
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      const FlowVector v = flow(x, y);
      const float u = static_cast<float>(v.dx);
      const float w = static_cast<float>(v.dy);
      if (!flow.valid(x, y) || unknown(u) || unknown(w)) {
        store_f32(out, kFloUnknownValue);
        store_f32(out, kFloUnknownValue);
      } else {
        store_f32(out, u);
        store_f32(out, w);
      }
    }
  return out;
}

FlowField read_flo(const std::filesystem::path& path) { return decode_flo(read_file(path)); }

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
  write_file_atomic(path, encode_flo(flow));
}

}  // namespace blpc
