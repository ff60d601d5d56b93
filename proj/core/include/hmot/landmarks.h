#pragma once

#include <cstddef>
#include <vector>

#include "hmot/grid.h"

namespace hmot {

/// Ordered landmarks of one face. `visible` is either empty (all visible) or
/// has one flag per point.
struct LandmarkSet {
  std::vector<Point> points;
  std::vector<bool> visible;

  std::size_t size() const { return points.size(); }
  bool IsVisible(std::size_t i) const { return visible.empty() || visible[i]; }

  /// Throws InvalidInput on an empty set, non-finite coordinates or a
  /// visibility vector of the wrong length.
  void Validate(const char* what) const;

  bool operator==(const LandmarkSet&) const = default;
};

}  // namespace hmot
