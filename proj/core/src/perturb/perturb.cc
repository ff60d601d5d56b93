#include "hmot/perturb/perturb.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "hmot/error.h"
#include "hmot/random.h"

namespace hmot::perturb {

std::string_view ToString(PerturbKind kind) {
  return kind == PerturbKind::kOcclusion ? "occlusion" : "motion-blur";
}

std::string_view ToString(Protocol protocol) {
  return protocol == Protocol::kLarge ? "large" : "medium";
}

PerturbKind ParsePerturbKind(std::string_view name) {
  if (name == "occlusion") return PerturbKind::kOcclusion;
  if (name == "motion-blur" || name == "blur") return PerturbKind::kMotionBlur;
  throw InvalidInput("unknown perturbation '" + std::string(name) + "' (expected occlusion or motion-blur)");
}

Protocol ParseProtocol(std::string_view name) {
  if (name == "large") return Protocol::kLarge;
  if (name == "medium") return Protocol::kMedium;
  throw InvalidInput("unknown protocol '" + std::string(name) + "' (expected large or medium)");
}

PerturbSpec PerturbSpec::Defaults(PerturbKind kind, Protocol protocol, std::uint64_t seed) {
  PerturbSpec s;
  s.kind = kind;
  s.protocol = protocol;
  s.seed = seed;
  if (protocol == Protocol::kLarge) {
    s.occlusion = {0.15, 0.30};
    s.blur = {1.0, 31};
  } else {
    s.occlusion = {0.08, 0.15};
    s.blur = {0.5, 15};
  }
  return s;
}

void PerturbSpec::Validate() const {
  const auto& o = occlusion;
  if (!(o.min_axis >= 0.0 && o.min_axis <= o.max_axis && o.max_axis <= 0.5)) {
    std::ostringstream os;
    os << "perturb spec: occlusion semi-axis range [" << o.min_axis << ", " << o.max_axis
       << "] must satisfy 0 <= min <= max <= 0.5";
    throw InvalidInput(os.str());
  }
  if (!(blur.multiplier > 0.0) || !std::isfinite(blur.multiplier)) {
    throw InvalidInput("perturb spec: blur multiplier must be positive");
  }
  if (blur.cap < 1) throw InvalidInput("perturb spec: blur cap must be at least 1 px");
  if (nose_index < 0) throw InvalidInput("perturb spec: nose index must be non-negative");
}

bool Ellipse::Contains(double x, double y) const {
  if (semi_a <= 0.0 || semi_b <= 0.0) return false;
  const double dx = x - cx, dy = y - cy;
  const double c = std::cos(angle), s = std::sin(angle);
  const double u = (dx * c + dy * s) / semi_a;
  const double v = (-dx * s + dy * c) / semi_b;
  return u * u + v * v <= 1.0;
}

double Ellipse::Area() const {
  return std::numbers::pi * semi_a * semi_b;
}

Ellipse DrawEllipse(int height, int width, const PerturbSpec& spec) {
  Rng rng(spec.seed);
  const double side = std::min(height, width);
  Ellipse e;
  e.semi_a = side * rng.Uniform(spec.occlusion.min_axis, spec.occlusion.max_axis);
  e.semi_b = side * rng.Uniform(spec.occlusion.min_axis, spec.occlusion.max_axis);
  e.cx = rng.Uniform(-0.5, width - 0.5);
  e.cy = rng.Uniform(-0.5, height - 0.5);
  e.angle = rng.Uniform(0.0, std::numbers::pi);
  return e;
}

OcclusionResult Occlude(const Image& img, const PerturbSpec& spec) {
  spec.Validate();
  if (spec.kind != PerturbKind::kOcclusion) throw InvalidInput("occlude: spec is not an occlusion spec");
  OcclusionResult out{img, DrawEllipse(img.height(), img.width(), spec), 0, 0.0};
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!out.ellipse.Contains(c, r)) continue;
      for (int ch = 0; ch < img.channels(); ++ch) out.image.at(r, c, ch) = 0.0;
      ++out.occluded_pixels;
    }
  }
  out.clipped_area = ClippedEllipseArea(out.ellipse, img.height(), img.width());
  return out;
}

double ClippedEllipseArea(const Ellipse& e, int height, int width, int samples) {
  if (e.semi_a <= 0.0 || e.semi_b <= 0.0) return 0.0;
  // Only pixels within the bounding circle can contribute.
  const double reach = std::max(e.semi_a, e.semi_b) + 1.0;
  const int r0 = std::max(0, static_cast<int>(std::floor(e.cy - reach)));
  const int r1 = std::min(height - 1, static_cast<int>(std::ceil(e.cy + reach)));
  const int c0 = std::max(0, static_cast<int>(std::floor(e.cx - reach)));
  const int c1 = std::min(width - 1, static_cast<int>(std::ceil(e.cx + reach)));
  std::size_t inside = 0;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
          const double x = c - 0.5 + (j + 0.5) / samples;
          const double y = r - 0.5 + (i + 0.5) / samples;
          if (e.Contains(x, y)) ++inside;
        }
      }
    }
  }
  return static_cast<double>(inside) / (static_cast<double>(samples) * samples);
}

Image LinearBlur(const Image& img, double dx, double dy, int length) {
  const double norm = std::hypot(dx, dy);
  if (length <= 1 || norm == 0.0) return img;
  const double ux = dx / norm, uy = dy / norm;
  const int h = img.height(), w = img.width(), channels = img.channels();
  Image out(h, w, channels);
  auto sample = [&](double x, double y, int ch) {
    x = std::clamp(x, 0.0, w - 1.0);
    y = std::clamp(y, 0.0, h - 1.0);
    const int x0 = std::min(static_cast<int>(x), w - 1), y0 = std::min(static_cast<int>(y), h - 1);
    const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
    const double fx = x - x0, fy = y - y0;
    const double top = img.at(y0, x0, ch) * (1.0 - fx) + img.at(y0, x1, ch) * fx;
    const double bottom = img.at(y1, x0, ch) * (1.0 - fx) + img.at(y1, x1, ch) * fx;
    return top * (1.0 - fy) + bottom * fy;
  };
  const double half = (length - 1) / 2.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        double acc = 0.0;
        for (int k = 0; k < length; ++k) {
          const double t = k - half;
          acc += sample(c + t * ux, r + t * uy, ch);
        }
        out.at(r, c, ch) = acc / length;
      }
    }
  }
  out.Clamp();
  return out;
}

BlurResult MotionBlurSequence(const std::vector<Image>& frames, const std::vector<Point>& nose_track,
                              const PerturbSpec& spec) {
  spec.Validate();
  if (spec.kind != PerturbKind::kMotionBlur) throw InvalidInput("motion blur: spec is not a motion-blur spec");
  if (frames.size() != nose_track.size()) {
    throw InvalidInput("motion blur: " + std::to_string(frames.size()) + " frames but " +
                       std::to_string(nose_track.size()) + " nose-track points");
  }
  if (frames.size() < 3) throw InvalidInput("motion blur: need at least 3 frames");
  const std::size_t n = frames.size();
  BlurResult out;
  out.frames.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t before = t == 0 ? 0 : t - 1;
    const std::size_t after = t + 1 == n ? t : t + 1;
    BlurFrame k;
    k.dx = nose_track[after].x - nose_track[before].x;
    k.dy = nose_track[after].y - nose_track[before].y;
    if (!std::isfinite(k.dx) || !std::isfinite(k.dy)) {
      throw InvalidInput("motion blur: nose track point is not finite near frame " + std::to_string(t));
    }
    const double displacement = std::hypot(k.dx, k.dy);
    k.length = std::min(static_cast<int>(std::lround(spec.blur.multiplier * displacement)), spec.blur.cap);
    k.angle = std::atan2(k.dy, k.dx);
    out.frames.push_back(LinearBlur(frames[t], k.dx, k.dy, k.length));
    out.kernels.push_back(k);
  }
  return out;
}

}  // namespace hmot::perturb
