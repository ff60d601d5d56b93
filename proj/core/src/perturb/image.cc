#include "hmot/perturb/image.h"

#include <algorithm>
#include <string>

#include "hmot/error.h"

namespace hmot::perturb {

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1) {
    throw InvalidInput("image dimensions must be positive, got " + std::to_string(height) + "x" +
                       std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidInput("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  values_.assign(pixels() * static_cast<std::size_t>(channels), fill);
}

double Image::Energy() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

void Image::Clamp() {
  for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace hmot::perturb
