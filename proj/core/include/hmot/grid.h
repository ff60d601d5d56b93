#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hmot {

struct GridShape {
  int height = 0;
  int width = 0;

  std::size_t cells() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  bool operator==(const GridShape&) const = default;
};

std::string ToString(const GridShape& shape);

/// Sub-pixel position in heatmap (or image) frame. x is the column, y the row;
/// integer values sit on cell centers.
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// Row-major H x W grid of reals. Used for logits, activations, gradients and
/// normalized distributions alike; operations that need a distribution check
/// for it with RequireNormalized().
class Heatmap {
 public:
  Heatmap() = default;
  Heatmap(GridShape shape, double fill = 0.0);
  Heatmap(GridShape shape, std::vector<double> values);
  Heatmap(int height, int width, double fill = 0.0) : Heatmap(GridShape{height, width}, fill) {}

  const GridShape& shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return values_.size(); }

  double& at(int row, int col) { return values_[Index(row, col)]; }
  double at(int row, int col) const { return values_[Index(row, col)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(shape_.width) + static_cast<std::size_t>(col);
  }

  double Sum() const;
  double Max() const;

  bool operator==(const Heatmap&) const = default;

 private:
  GridShape shape_;
  std::vector<double> values_;
};

/// Tolerance on the total mass of a normalized heatmap.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Throws InvalidInput naming the first non-finite cell.
void RequireFinite(const Heatmap& hm, const char* what);

/// Throws InvalidInput unless every cell is finite and >= 0 and the sum is 1
/// within kNormalizationTolerance.
void RequireNormalized(const Heatmap& hm, const char* what);

/// Mass tolerance for distributions that went through 32-bit floats.
inline constexpr double kFloatNormalizationTolerance = 1e-5;

/// Divides by the sum after checking that the heatmap is finite, non-negative
/// and sums to 1 within `tolerance`. Restores exact normalization for data
/// read back from float storage.
Heatmap Renormalized(const Heatmap& hm, double tolerance, const char* what);

bool IsNormalized(const Heatmap& hm, double tolerance = kNormalizationTolerance);

void RequireSameShape(const Heatmap& a, const Heatmap& b, const char* what);

/// Throws InvalidInput unless the grid has at least two cells.
void RequireUsableShape(const GridShape& shape, const char* what);

}  // namespace hmot
