#pragma once

#include <filesystem>

#include "hmot/perturb/image.h"

namespace hmot::io {

/// Reads an 8-bit (or 16-bit, narrowed) grayscale or color PNG into [0, 1]
/// values. Palette images are expanded to RGB and alpha is dropped.
perturb::Image ReadPng(const std::filesystem::path& path);

/// Writes 8-bit grayscale or RGB, rounding value * 255. No timestamp or text
/// chunks, so equal images give equal files.
void WritePng(const std::filesystem::path& path, const perturb::Image& img);

}  // namespace hmot::io
