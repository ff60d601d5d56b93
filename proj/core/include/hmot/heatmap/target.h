#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hmot/grid.h"

namespace hmot::heatmap {

enum class AmplitudeMode {
  /// Maximum scaled to 1, the usual L2 regression target.
  kPeakOne,
  /// Divided by its sum; input for distribution losses.
  kNormalized,
};

std::string_view ToString(AmplitudeMode mode);
AmplitudeMode ParseAmplitudeMode(std::string_view name);

struct TargetSpec {
  double sigma = 1.0;  ///< pixels
  int height = 64;
  int width = 64;
  AmplitudeMode mode = AmplitudeMode::kNormalized;

  GridShape shape() const { return {height, width}; }
  void Validate() const;
};

/// Isotropic Gaussian sampled at the cell centers, exp(-|q - center|^2 / (2 sigma^2)),
/// scaled per `spec.mode`. `center` is in heatmap pixels and must lie inside
/// the grid.
Heatmap MakeGaussianTarget(const Point& center, const TargetSpec& spec);

/// Human-readable warning when the Gaussian comes within 3 sigma of a grid
/// edge, nullopt otherwise.
std::optional<std::string> BoundaryWarning(const Point& center, const TargetSpec& spec);

bool InsideGrid(const Point& p, const GridShape& shape);

}  // namespace hmot::heatmap
