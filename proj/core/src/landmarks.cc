#include "hmot/landmarks.h"

#include <cmath>
#include <string>

#include "hmot/error.h"

namespace hmot {

void LandmarkSet::Validate(const char* what) const {
  if (points.empty()) throw InvalidInput(std::string(what) + ": landmark set is empty");
  if (!visible.empty() && visible.size() != points.size()) {
    throw InvalidInput(std::string(what) + ": " + std::to_string(visible.size()) + " visibility flags for " +
                       std::to_string(points.size()) + " points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw InvalidInput(std::string(what) + ": landmark " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace hmot
