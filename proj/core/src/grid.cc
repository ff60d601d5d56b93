#include "hmot/grid.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hmot/error.h"

namespace hmot {

std::string ToString(const GridShape& shape) {
  std::ostringstream os;
  os << shape.height << "x" << shape.width;
  return os.str();
}

Heatmap::Heatmap(GridShape shape, double fill) : shape_(shape) {
  if (shape.height < 1 || shape.width < 1) {
    throw InvalidInput("heatmap dimensions must be positive, got " + ToString(shape));
  }
  values_.assign(shape.cells(), fill);
}

Heatmap::Heatmap(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  if (shape.height < 1 || shape.width < 1) {
    throw InvalidInput("heatmap dimensions must be positive, got " + ToString(shape));
  }
  if (values_.size() != shape.cells()) {
    throw InvalidInput("heatmap " + ToString(shape) + " needs " + std::to_string(shape.cells()) +
                       " values, got " + std::to_string(values_.size()));
  }
}

double Heatmap::Sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double Heatmap::Max() const {
  if (values_.empty()) return -std::numeric_limits<double>::infinity();
  return *std::max_element(values_.begin(), values_.end());
}

void RequireFinite(const Heatmap& hm, const char* what) {
  for (int r = 0; r < hm.height(); ++r) {
    for (int c = 0; c < hm.width(); ++c) {
      if (!std::isfinite(hm.at(r, c))) {
        std::ostringstream os;
        os << what << ": non-finite value " << hm.at(r, c) << " at cell (row " << r << ", col " << c << ")";
        throw InvalidInput(os.str());
      }
    }
  }
}

bool IsNormalized(const Heatmap& hm, double tolerance) {
  double sum = 0.0;
  for (double v : hm.values()) {
    if (!std::isfinite(v) || v < 0.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

void RequireNormalized(const Heatmap& hm, const char* what) {
  RequireFinite(hm, what);
  double sum = 0.0;
  for (int r = 0; r < hm.height(); ++r) {
    for (int c = 0; c < hm.width(); ++c) {
      double v = hm.at(r, c);
      if (v < 0.0) {
        std::ostringstream os;
        os << what << ": negative mass " << v << " at cell (row " << r << ", col " << c << ")";
        throw InvalidInput(os.str());
      }
      sum += v;
    }
  }
  if (sum == 0.0) {
    throw InvalidInput(std::string(what) + ": distribution has zero total mass");
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": not normalized (sum = " << sum << ")";
    throw InvalidInput(os.str());
  }
}

Heatmap Renormalized(const Heatmap& hm, double tolerance, const char* what) {
  RequireFinite(hm, what);
  double sum = 0.0;
  for (double v : hm.values()) {
    if (v < 0.0) throw InvalidInput(std::string(what) + ": negative mass");
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": not normalized (sum = " << sum << ")";
    throw InvalidInput(os.str());
  }
  Heatmap out = hm;
  for (double& v : out.values()) v /= sum;
  return out;
}

void RequireSameShape(const Heatmap& a, const Heatmap& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw InvalidInput(std::string(what) + ": shape mismatch " + ToString(a.shape()) + " vs " + ToString(b.shape()));
  }
}

void RequireUsableShape(const GridShape& shape, const char* what) {
  if (shape.height < 1 || shape.width < 1 || shape.cells() < 2) {
    throw InvalidInput(std::string(what) + ": grid must have at least two cells, got " + ToString(shape));
  }
}

}  // namespace hmot
