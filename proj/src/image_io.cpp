#include "blpc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <memory>

#include "blpc/errors.hpp"
#include "blpc/fileutil.hpp"

namespace blpc {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : b_(bytes) {}

  std::size_t pos() const { return pos_; }

  // Skips whitespace and '#' comments that run to the end of the line.
  void skip_separators() {
    while (pos_ < b_.size()) {
      const char c = b_[pos_];
      if (c == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n' && b_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError(std::string("pgm: expected ") + what, start);
    if (pos_ - start > 9) throw ParseError(std::string("pgm: ") + what + " too large", start);
    long v = 0;
    std::from_chars(b_.data() + start, b_.data() + pos_, v);
    return v;
  }

  unsigned char byte() { return static_cast<unsigned char>(b_[pos_++]); }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  std::string_view b_;
  std::size_t pos_ = 0;
};

bool has_png_signature(std::string_view bytes) {
  return bytes.size() >= 8 &&
         png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0;
}

std::string png_to_memory(png_image& img, const void* pixels, int row_stride) {
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, row_stride, nullptr)) {
    throw IoError(std::string("png encode failed: ") + img.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, row_stride, nullptr)) {
    throw IoError(std::string("png encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

unsigned char quantize8(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
}

Image decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("pgm: missing P2/P5 magic", 0);
  }
  const bool binary = bytes[1] == '5';
  PgmReader r(bytes);
  r.byte();
  r.byte();
  const std::size_t after_magic = r.pos();
  if (r.remaining() == 0 || !(std::isspace(static_cast<unsigned char>(bytes[after_magic])) || bytes[after_magic] == '#')) {
    throw ParseError("pgm: expected whitespace after magic", after_magic);
  }
  const std::size_t wpos = r.pos();
  const long w = r.number("width");
  const long h = r.number("height");
  const std::size_t mpos = r.pos();
  const long maxval = r.number("maxval");
  if (w <= 0 || h <= 0) throw ParseError("pgm: dimensions must be positive", wpos);
  if (maxval <= 0 || maxval > 65535) throw ParseError("pgm: maxval out of range", mpos);
  if (maxval > 255) throw UnsupportedFormatError("pgm: 16-bit samples are not supported");

  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const double scale = 255.0 / static_cast<double>(maxval);
  std::vector<double> data(n);
  if (binary) {
    if (r.remaining() == 0 || !std::isspace(static_cast<unsigned char>(bytes[r.pos()]))) {
      throw ParseError("pgm: expected single whitespace after maxval", r.pos());
    }
    r.byte();
    if (r.remaining() < n) throw ParseError("pgm: truncated pixel data", bytes.size());
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned char v = r.byte();
      if (v > maxval) throw ParseError("pgm: sample exceeds maxval", r.pos() - 1);
      data[i] = maxval == 255 ? v : v * scale;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = r.pos();
      const long v = r.number("sample");
      if (v > maxval) throw ParseError("pgm: sample exceeds maxval", at);
      data[i] = maxval == 255 ? static_cast<double>(v) : v * scale;
    }
  }
  return Image(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

Image decode_png(std::string_view bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw ParseError(std::string("png: ") + img.message, 0);
  }
  if (img.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&img);
    throw UnsupportedFormatError("png: 16-bit samples are not supported");
  }
  const bool colour = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = colour ? 3 : 1;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ParseError("png: " + msg, 0);
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const unsigned char* p = &buf[i * channels];
    data[i] = colour ? luma(p[0], p[1], p[2]) : p[0];
  }
  return Image(w, h, std::move(data));
}

Image decode_image(std::string_view bytes) {
  if (has_png_signature(bytes)) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '2' || bytes[1] == '5') return decode_pgm(bytes);
    throw UnsupportedFormatError(std::string("netpbm variant P") + bytes[1] + " is not supported");
  }
  throw ParseError("unrecognised image format", 0);
}

Image read_image(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

std::string encode_pgm(const Image& image) {
  if (image.empty()) throw DimensionError("encode_pgm: empty image");
  std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double v : image.data()) out.push_back(static_cast<char>(quantize8(v)));
  return out;
}

std::string encode_png(const Image& image) {
  if (image.empty()) throw DimensionError("encode_png: empty image");
  std::vector<unsigned char> px(image.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = quantize8(image.data()[i]);
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  return png_to_memory(img, px.data(), image.width());
}

std::string encode_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0) throw DimensionError("encode_png: empty image");
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  return png_to_memory(img, image.data.data(), image.width * 3);
}

void write_image(const Image& image, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  write_file_atomic(path, ext == ".png" ? encode_png(image) : encode_pgm(image));
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
  write_file_atomic(path, encode_png(image));
}

}  // namespace blpc
