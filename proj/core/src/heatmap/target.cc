#include "hmot/heatmap/target.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmot/error.h"

namespace hmot::heatmap {

std::string_view ToString(AmplitudeMode mode) {
  return mode == AmplitudeMode::kPeakOne ? "peak-one" : "normalized";
}

AmplitudeMode ParseAmplitudeMode(std::string_view name) {
  if (name == "peak-one") return AmplitudeMode::kPeakOne;
  if (name == "normalized") return AmplitudeMode::kNormalized;
  throw InvalidInput("unknown amplitude mode '" + std::string(name) + "' (expected peak-one or normalized)");
}

void TargetSpec::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidInput("target spec: sigma must be positive, got " + std::to_string(sigma));
  }
  if (height < 1 || width < 1) {
    throw InvalidInput("target spec: grid must be at least 1x1, got " + ToString(shape()));
  }
}

bool InsideGrid(const Point& p, const GridShape& shape) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.y >= 0.0 && p.x <= shape.width - 1 &&
         p.y <= shape.height - 1;
}

Heatmap MakeGaussianTarget(const Point& center, const TargetSpec& spec) {
  spec.Validate();
  if (!InsideGrid(center, spec.shape())) {
    std::ostringstream os;
    os << "gaussian target: center (" << center.x << ", " << center.y << ") lies outside the "
       << ToString(spec.shape()) << " grid";
    throw InvalidInput(os.str());
  }
  Heatmap hm(spec.shape());
  const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
  for (int r = 0; r < spec.height; ++r) {
    const double dy = r - center.y;
    for (int c = 0; c < spec.width; ++c) {
      const double dx = c - center.x;
      hm.at(r, c) = std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
  const double scale = spec.mode == AmplitudeMode::kPeakOne ? hm.Max() : hm.Sum();
  for (double& v : hm.values()) v /= scale;
  return hm;
}

std::optional<std::string> BoundaryWarning(const Point& center, const TargetSpec& spec) {
  const double clearance = std::min({center.x, center.y, spec.width - 1 - center.x, spec.height - 1 - center.y});
  if (clearance >= 3.0 * spec.sigma) return std::nullopt;
  std::ostringstream os;
  os << "gaussian target at (" << center.x << ", " << center.y << ") is " << clearance
     << " px from the grid edge, closer than 3 sigma (" << 3.0 * spec.sigma << " px)";
  return os.str();
}

}  // namespace hmot::heatmap
