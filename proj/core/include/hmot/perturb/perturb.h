#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "hmot/grid.h"
#include "hmot/perturb/image.h"

namespace hmot::perturb {

enum class PerturbKind { kOcclusion, kMotionBlur };
enum class Protocol { kLarge, kMedium };

std::string_view ToString(PerturbKind kind);
std::string_view ToString(Protocol protocol);
PerturbKind ParsePerturbKind(std::string_view name);
Protocol ParseProtocol(std::string_view name);

/// Semi-axis range as fractions of min(H, W).
struct OcclusionParams {
  double min_axis = 0.08;
  double max_axis = 0.15;
};

struct BlurParams {
  /// Kernel length per pixel of nose-tip displacement.
  double multiplier = 0.5;
  /// Longest kernel, in pixels.
  int cap = 15;
};

struct PerturbSpec {
  PerturbKind kind = PerturbKind::kOcclusion;
  Protocol protocol = Protocol::kMedium;
  std::uint64_t seed = 0;
  OcclusionParams occlusion;
  BlurParams blur;
  /// Zero-based index of the landmark whose motion orients the blur.
  int nose_index = 33;

  /// Defaults for a protocol: large occluders span 15-30 % of the short image
  /// side and large blur uses multiplier 1 capped at 31 px; medium uses
  /// 8-15 % and multiplier 0.5 capped at 15 px.
  static PerturbSpec Defaults(PerturbKind kind, Protocol protocol, std::uint64_t seed = 0);

  void Validate() const;
};

/// Oriented ellipse in pixel coordinates (x = column, y = row, pixel centers
/// on integers). `angle` rotates the `semi_a` axis away from +x.
struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double semi_a = 0.0;
  double semi_b = 0.0;
  double angle = 0.0;

  bool Contains(double x, double y) const;
  double Area() const;
};

/// Draws the ellipse for an image of the given size: semi-axes uniform in the
/// protocol range, center uniform over the image area, angle uniform in [0, pi).
Ellipse DrawEllipse(int height, int width, const PerturbSpec& spec);

struct OcclusionResult {
  Image image;
  Ellipse ellipse;
  /// Pixels whose center lies inside the ellipse (and were set to 0).
  std::size_t occluded_pixels = 0;
  /// Area of the ellipse clipped to the image rectangle, in pixels.
  double clipped_area = 0.0;
};

/// Sets every pixel whose center is inside a random ellipse to 0. Other
/// pixels are copied unchanged.
OcclusionResult Occlude(const Image& img, const PerturbSpec& spec);

/// Area of the ellipse inside [-0.5, W - 0.5] x [-0.5, H - 0.5], by
/// supersampling each pixel on a `samples` x `samples` grid.
double ClippedEllipseArea(const Ellipse& e, int height, int width, int samples = 16);

struct BlurFrame {
  double dx = 0.0;
  double dy = 0.0;
  int length = 0;      ///< 0 or 1 means the frame was left unchanged
  double angle = 0.0;  ///< atan2(dy, dx), radians
};

struct BlurResult {
  std::vector<Image> frames;
  std::vector<BlurFrame> kernels;
};

/// Averages `length` samples spaced one pixel apart along (dx, dy), centered
/// on each pixel, with bilinear interpolation and edge replication.
Image LinearBlur(const Image& img, double dx, double dy, int length);

/// Blurs each frame along the nose-tip motion between its neighbours
/// (one-sided at the first and last frame).
BlurResult MotionBlurSequence(const std::vector<Image>& frames, const std::vector<Point>& nose_track,
                              const PerturbSpec& spec);

}  // namespace hmot::perturb
