#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmot/grid.h"

namespace hmot::io {

/// In-memory image of an HMF1 file: `count` heatmaps of one shape stored as
/// 32-bit floats, row-major, heatmap-major.
///
/// On disk: "HMF1", then little-endian uint32 count, height, width, then
/// count * height * width little-endian IEEE-754 floats.
struct HeatmapStack {
  GridShape shape;
  std::size_t count = 0;
  std::vector<float> data;

  std::span<const float> slice(std::size_t k) const { return std::span<const float>(data).subspan(k * shape.cells(), shape.cells()); }
  Heatmap At(std::size_t k) const;
  std::vector<Heatmap> ToHeatmaps() const;

  /// Narrows to float. Heatmaps must share one shape.
  static HeatmapStack FromHeatmaps(std::span<const Heatmap> hms);
};

std::string EncodeHeatmapFile(const HeatmapStack& stack);
/// Throws FormatError on a bad magic, a payload of the wrong length or a
/// non-finite value. `source` names the input in messages.
HeatmapStack DecodeHeatmapFile(std::string_view bytes, std::string_view source = "heatmap file");

void WriteHeatmapFile(const std::filesystem::path& path, const HeatmapStack& stack);
HeatmapStack ReadHeatmapFile(const std::filesystem::path& path);

/// Whole-file helpers shared by the readers and writers.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace hmot::io
