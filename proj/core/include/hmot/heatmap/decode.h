#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hmot/grid.h"
#include "hmot/landmarks.h"

namespace hmot::heatmap {

enum class DecodeMethod { kGetMax, kGetBc };

std::string_view ToString(DecodeMethod method);
/// Accepts "get-max" / "get_max" / "max" and "get-bc" / "get_bc" / "bc".
DecodeMethod ParseDecodeMethod(std::string_view name);

struct Decoded {
  Point point;
  /// Set when the input carried no location information (constant map); the
  /// point is then the grid center.
  bool degenerate = false;
};

/// Maximum cell, moved a quarter pixel along each axis toward the larger of
/// its two neighbours on that axis. No shift on ties or on the grid border.
/// The first maximum in row-major order wins.
Decoded DecodeGetMax(const Heatmap& hm);

/// Barycenter sum_q q * hm(q) of a normalized heatmap. Rejects anything that
/// is not normalized; softmax raw outputs first.
Point DecodeGetBc(const Heatmap& hm);

Point Decode(const Heatmap& hm, DecodeMethod method);

/// Decodes every heatmap and multiplies the coordinates by `scale` (heatmap
/// frame to image frame). Heatmaps must share one shape.
LandmarkSet DecodeBatch(std::span<const Heatmap> hms, DecodeMethod method, double scale, int threads = 1);

}  // namespace hmot::heatmap
