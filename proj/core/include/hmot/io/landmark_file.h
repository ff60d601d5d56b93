#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmot/landmarks.h"
#include "hmot/metrics/metrics.h"

namespace hmot::io {

struct LandmarkRecord {
  std::string id;
  std::optional<std::string> image;
  LandmarkSet landmarks;
  std::optional<metrics::NormalizationRule> normalization;
};

/// JSON annotation document:
///
///   {
///     "version": 1,
///     "format": "uniform",            // optional; "mixed" allows varying counts
///     "normalization": {...},         // optional default for every record
///     "images": [
///       {"id": "img_0", "image": "img_0.png", "points": [[x, y], ...],
///        "visible": [true, ...], "normalization": {...}}
///     ]
///   }
///
/// Normalization objects are {"kind": "inter-ocular", "left_eye": [36],
/// "right_eye": [45]}, {"kind": "bbox-width", "value": w} or
/// {"kind": "explicit", "value": d}. Coordinates are image-frame pixels.
/// Unknown keys are rejected.
struct LandmarkFile {
  int version = 1;
  std::string format = "uniform";
  std::optional<metrics::NormalizationRule> normalization;
  std::vector<LandmarkRecord> images;

  /// Normalization rule for record `k`: its own, else the file default.
  const metrics::NormalizationRule* RuleFor(std::size_t k) const;
};

LandmarkFile ParseLandmarkFile(std::string_view text, std::string_view source = "landmark file");
std::string SerializeLandmarkFile(const LandmarkFile& file);
LandmarkFile ReadLandmarkFile(const std::filesystem::path& path);
void WriteLandmarkFile(const std::filesystem::path& path, const LandmarkFile& file);

/// {"pairs": [[pred_index, gt_index], ...]}
metrics::LandmarkMapping ParseMappingFile(std::string_view text, std::string_view source = "mapping file");
metrics::LandmarkMapping ReadMappingFile(const std::filesystem::path& path);

}  // namespace hmot::io
