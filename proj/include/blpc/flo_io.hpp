#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "blpc/core.hpp"

namespace blpc {

/// Middlebury .flo: float tag 202021.25, int32 width, int32 height, then
/// interleaved float32 (u, v), all little-endian.
inline constexpr float kFloTag = 202021.25f;
/// Components with a larger magnitude mark an unknown vector.
inline constexpr float kFloUnknownThreshold = 1e9f;
/// Written for invalid pixels.
inline constexpr float kFloUnknownValue = 1e10f;

/// FormatError for a bad tag or dimensions, LengthError when the payload
/// does not match the header.
FlowField decode_flo(std::string_view bytes);
std::string encode_flo(const FlowField& flow);

FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

}  // namespace blpc
