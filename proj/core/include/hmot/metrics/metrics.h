#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmot/landmarks.h"

namespace hmot::metrics {

/// |pred - gt|_2 / d.
double NmeLandmark(const Point& pred, const Point& gt, double d);

enum class NormalizationKind {
  /// Distance between the centroids of two landmark index groups of the
  /// ground truth (outer eye corners, or all eye points).
  kInterOcular,
  /// Face bounding-box width, supplied per image.
  kBboxWidth,
  /// A distance supplied directly.
  kExplicit,
};

std::string_view ToString(NormalizationKind kind);
NormalizationKind ParseNormalizationKind(std::string_view name);

struct NormalizationRule {
  NormalizationKind kind = NormalizationKind::kExplicit;
  std::vector<int> left_eye;
  std::vector<int> right_eye;
  double value = 1.0;  ///< bbox width or explicit distance

  /// Normalization distance d_i for one image. Throws InvalidInput when the
  /// indices are out of range or the distance is not positive.
  double Resolve(const LandmarkSet& gt) const;
};

struct EvalEntry {
  std::string id;
  LandmarkSet pred;
  LandmarkSet gt;  ///< its visibility flags decide which landmarks count
  double norm = 1.0;
};

using EvalPairing = std::vector<EvalEntry>;

/// Pred-format index -> gt-format index pairs.
struct LandmarkMapping {
  std::vector<std::pair<int, int>> pairs;

  static LandmarkMapping Identity(int count);
};

/// Mapping from format A to C through B: for each (b, c) of `second` whose b
/// appears in `first` as (a, b), emits (a, c). Order follows `second`.
LandmarkMapping Compose(const LandmarkMapping& first, const LandmarkMapping& second);

/// Moves landmarks into the destination format: out[b] = in[a] for each pair
/// (a, b). Destination points without a source are marked invisible.
LandmarkSet Remap(const LandmarkSet& in, const LandmarkMapping& mapping, int dest_count);

/// Restricts each entry to the mapped landmarks: the k-th landmark of the
/// result compares pred[pairs[k].first] with gt[pairs[k].second].
EvalPairing ProjectCommon(const EvalPairing& pairing, const LandmarkMapping& mapping);

enum class CedMode { kLandmarkWise, kImageWise };

struct EvalOptions {
  std::vector<double> thresholds{0.08, 0.1};
  /// CED sample positions. Defaults to 0, 0.001, ..., 0.1.
  std::vector<double> ced_grid;
  /// Upper integration limits for AUC. Defaults to the largest CED grid point.
  std::vector<double> auc_ceilings;
  CedMode ced_mode = CedMode::kLandmarkWise;

  /// Fills in the documented defaults for empty fields and validates.
  EvalOptions Resolved() const;
};

/// 0, step, 2 step, ..., max (max included when it lands on the grid within
/// rounding).
std::vector<double> UniformGrid(double max, double step);

struct ThresholdValue {
  double threshold = 0.0;
  double value = 0.0;
};

struct EvalReport {
  std::vector<std::string> ids;
  /// N x M. Invisible ground-truth landmarks hold NaN and are skipped by
  /// every aggregate.
  std::vector<std::vector<double>> nme_per_landmark;
  std::vector<double> nme_per_image;
  double nme = 0.0;
  std::vector<ThresholdValue> fr_image;
  std::vector<ThresholdValue> fr_landmark;
  std::vector<ThresholdValue> ced;
  std::vector<ThresholdValue> auc;
  CedMode ced_mode = CedMode::kLandmarkWise;
  int images = 0;
  int landmarks = 0;
};

/// Image NME, failure rates (strict NME > theta), CED and trapezoidal AUC.
EvalReport Evaluate(const EvalPairing& pairing, const EvalOptions& options = {});

/// FR^I at one threshold, straight from a report's per-image NMEs.
double FailureRateImage(const EvalReport& report, double theta);
/// FR^L: the mean over landmarks of the fraction of images whose NME exceeds theta.
double FailureRateLandmark(const EvalReport& report, double theta);
/// Normalized area under the CED on [0, ceiling], trapezoidal over the grid
/// points inside the range plus both end points.
double Auc(const EvalReport& report, const std::vector<double>& grid, double ceiling);

}  // namespace hmot::metrics
