#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "blpc/core.hpp"

namespace blpc {

/// Reads an 8-bit PGM (P2 or P5) or PNG; the format is taken from the
/// file's magic bytes. Colour PNGs are converted to Rec. 601 luma.
/// Maxvals other than 255 are rescaled to [0, 255].
Image read_image(const std::filesystem::path& path);
Image decode_image(std::string_view bytes);

/// Header-level PGM decoder. ParseError carries the byte offset;
/// UnsupportedFormatError for maxval > 255.
Image decode_pgm(std::string_view bytes);
Image decode_png(std::string_view bytes);

/// Rounds and clamps to 8 bits. The extension picks the format: ".png"
/// writes PNG, anything else binary PGM.
void write_image(const Image& image, const std::filesystem::path& path);
std::string encode_pgm(const Image& image);
std::string encode_png(const Image& image);
std::string encode_png(const RgbImage& image);
void write_png(const RgbImage& image, const std::filesystem::path& path);

/// Intensity after 8-bit quantisation.
unsigned char quantize8(double v);

}  // namespace blpc
