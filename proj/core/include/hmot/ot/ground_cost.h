#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmot/grid.h"

namespace hmot::ot {

/// Euclidean distance between grid cells, measured in units of
/// max(H - 1, W - 1) so that the farthest pair along the long side costs 1.
///
/// The cost only depends on the offset between two cells, so it is stored
/// as a (2H - 1) x (2W - 1) offset table instead of a dense (HW)^2 matrix.
class GroundCost {
 public:
  explicit GroundCost(GridShape shape);

  const GridShape& shape() const { return shape_; }
  std::size_t cells() const { return shape_.cells(); }

  /// Pixel length of one normalized cost unit.
  double unit() const { return unit_; }

  /// Largest cost on the grid (the diagonal).
  double max_cost() const { return max_cost_; }

  double operator()(std::size_t source, std::size_t target) const;
  double AtOffset(int drow, int dcol) const {
    return offsets_[static_cast<std::size_t>((drow + shape_.height - 1) * offset_width_ + dcol + shape_.width - 1)];
  }

  /// Normalized distance between two arbitrary points in the grid frame.
  double Between(const Point& a, const Point& b) const;

  /// Row-major (2H-1) x (2W-1) table; entry (drow + H - 1, dcol + W - 1).
  std::span<const double> offsets() const { return offsets_; }
  int offset_width() const { return offset_width_; }

  /// Dense source-major cost matrix. Intended for small grids only.
  std::vector<double> Dense() const;

 private:
  GridShape shape_;
  double unit_ = 1.0;
  double max_cost_ = 0.0;
  int offset_width_ = 0;
  std::vector<double> offsets_;
};

}  // namespace hmot::ot
