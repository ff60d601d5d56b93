#include "hmot/ot/ground_cost.h"

#include <algorithm>
#include <cmath>

#include "hmot/error.h"

namespace hmot::ot {

GroundCost::GroundCost(GridShape shape) : shape_(shape) {
  RequireUsableShape(shape, "ground cost");
  unit_ = static_cast<double>(std::max(shape.height - 1, shape.width - 1));
  offset_width_ = 2 * shape.width - 1;
  const int offset_height = 2 * shape.height - 1;
  offsets_.resize(static_cast<std::size_t>(offset_height) * static_cast<std::size_t>(offset_width_));
  for (int dr = -(shape.height - 1); dr <= shape.height - 1; ++dr) {
    for (int dc = -(shape.width - 1); dc <= shape.width - 1; ++dc) {
      offsets_[static_cast<std::size_t>((dr + shape.height - 1) * offset_width_ + dc + shape.width - 1)] =
          std::hypot(static_cast<double>(dr), static_cast<double>(dc)) / unit_;
    }
  }
  max_cost_ = AtOffset(shape.height - 1, shape.width - 1);
}

double GroundCost::operator()(std::size_t source, std::size_t target) const {
  const auto w = static_cast<std::size_t>(shape_.width);
  const int dr = static_cast<int>(target / w) - static_cast<int>(source / w);
  const int dc = static_cast<int>(target % w) - static_cast<int>(source % w);
  return AtOffset(dr, dc);
}

double GroundCost::Between(const Point& a, const Point& b) const {
  return std::hypot(a.x - b.x, a.y - b.y) / unit_;
}

std::vector<double> GroundCost::Dense() const {
  const std::size_t n = cells();
  std::vector<double> dense(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = (*this)(i, j);
  }
  return dense;
}

}  // namespace hmot::ot
