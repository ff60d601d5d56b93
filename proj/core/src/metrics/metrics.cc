#include "hmot/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "hmot/error.h"

namespace hmot::metrics {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Point Centroid(const LandmarkSet& set, const std::vector<int>& indices, const char* side) {
  if (indices.empty()) throw InvalidInput(std::string("inter-ocular normalization: no ") + side + " eye indices");
  double x = 0.0, y = 0.0;
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= set.size()) {
      throw InvalidInput("inter-ocular normalization: " + std::string(side) + " eye index " + std::to_string(i) +
                         " out of range for " + std::to_string(set.size()) + " landmarks");
    }
    x += set.points[static_cast<std::size_t>(i)].x;
    y += set.points[static_cast<std::size_t>(i)].y;
  }
  const double n = static_cast<double>(indices.size());
  return {x / n, y / n};
}

void RequireIndex(int index, std::size_t size, const char* side, const std::string& id) {
  if (index < 0 || static_cast<std::size_t>(index) >= size) {
    throw InvalidInput("landmark mapping: " + std::string(side) + " index " + std::to_string(index) +
                       " out of range for " + std::to_string(size) + " landmarks (image '" + id + "')");
  }
}

double CedAt(const EvalReport& report, double theta) {
  return 1.0 - (report.ced_mode == CedMode::kLandmarkWise ? FailureRateLandmark(report, theta)
                                                            : FailureRateImage(report, theta));
}

}  // namespace

double NmeLandmark(const Point& pred, const Point& gt, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw InvalidInput("nme: normalization distance must be positive, got " + std::to_string(d));
  }
  return std::hypot(pred.x - gt.x, pred.y - gt.y) / d;
}

std::string_view ToString(NormalizationKind kind) {
  switch (kind) {
    case NormalizationKind::kInterOcular:
      return "inter-ocular";
    case NormalizationKind::kBboxWidth:
      return "bbox-width";
    case NormalizationKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

NormalizationKind ParseNormalizationKind(std::string_view name) {
  if (name == "inter-ocular") return NormalizationKind::kInterOcular;
  if (name == "bbox-width") return NormalizationKind::kBboxWidth;
  if (name == "explicit") return NormalizationKind::kExplicit;
  throw InvalidInput("unknown normalization '" + std::string(name) +
                     "' (expected inter-ocular, bbox-width or explicit)");
}

double NormalizationRule::Resolve(const LandmarkSet& gt) const {
  double d = value;
  if (kind == NormalizationKind::kInterOcular) {
    const Point l = Centroid(gt, left_eye, "left");
    const Point r = Centroid(gt, right_eye, "right");
    d = std::hypot(l.x - r.x, l.y - r.y);
  }
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw InvalidInput(std::string(ToString(kind)) + " normalization distance must be positive, got " +
                       std::to_string(d));
  }
  return d;
}

LandmarkMapping LandmarkMapping::Identity(int count) {
  LandmarkMapping m;
  for (int i = 0; i < count; ++i) m.pairs.emplace_back(i, i);
  return m;
}

LandmarkMapping Compose(const LandmarkMapping& first, const LandmarkMapping& second) {
  std::unordered_map<int, int> to_source;
  for (const auto& [a, b] : first.pairs) to_source.emplace(b, a);
  LandmarkMapping out;
  for (const auto& [b, c] : second.pairs) {
    if (auto it = to_source.find(b); it != to_source.end()) out.pairs.emplace_back(it->second, c);
  }
  return out;
}

LandmarkSet Remap(const LandmarkSet& in, const LandmarkMapping& mapping, int dest_count) {
  if (mapping.pairs.empty()) throw InvalidInput("landmark mapping is empty");
  LandmarkSet out;
  out.points.assign(static_cast<std::size_t>(dest_count), Point{});
  out.visible.assign(static_cast<std::size_t>(dest_count), false);
  for (const auto& [a, b] : mapping.pairs) {
    RequireIndex(a, in.size(), "source", "");
    RequireIndex(b, static_cast<std::size_t>(dest_count), "destination", "");
    out.points[static_cast<std::size_t>(b)] = in.points[static_cast<std::size_t>(a)];
    out.visible[static_cast<std::size_t>(b)] = in.IsVisible(static_cast<std::size_t>(a));
  }
  if (std::all_of(out.visible.begin(), out.visible.end(), [](bool v) { return v; })) out.visible.clear();
  return out;
}

EvalPairing ProjectCommon(const EvalPairing& pairing, const LandmarkMapping& mapping) {
  if (mapping.pairs.empty()) throw InvalidInput("project common: mapping is empty");
  EvalPairing out;
  out.reserve(pairing.size());
  for (const auto& e : pairing) {
    EvalEntry p{e.id, {}, {}, e.norm};
    bool any_hidden = false;
    for (const auto& [a, b] : mapping.pairs) {
      RequireIndex(a, e.pred.size(), "prediction", e.id);
      RequireIndex(b, e.gt.size(), "ground-truth", e.id);
      p.pred.points.push_back(e.pred.points[static_cast<std::size_t>(a)]);
      p.gt.points.push_back(e.gt.points[static_cast<std::size_t>(b)]);
      const bool visible = e.gt.IsVisible(static_cast<std::size_t>(b));
      p.gt.visible.push_back(visible);
      any_hidden = any_hidden || !visible;
    }
    if (!any_hidden) p.gt.visible.clear();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> UniformGrid(double max, double step) {
  if (!(step > 0.0) || !(max > 0.0) || !std::isfinite(max) || !std::isfinite(step)) {
    throw InvalidInput("uniform grid: max and step must be positive and finite");
  }
  const auto n = static_cast<long>(std::floor(max / step + 1e-9));
  if (n > 10'000'000) throw InvalidInput("uniform grid: more than 1e7 points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * step);
  return grid;
}

EvalOptions EvalOptions::Resolved() const {
  EvalOptions o = *this;
  if (o.ced_grid.empty()) o.ced_grid = UniformGrid(0.1, 0.001);
  if (o.auc_ceilings.empty()) o.auc_ceilings.push_back(*std::max_element(o.ced_grid.begin(), o.ced_grid.end()));
  auto check = [](const std::vector<double>& xs, const char* what) {
    for (double x : xs) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "eval options: " << what << " must be finite and non-negative, got " << x;
        throw InvalidInput(os.str());
      }
    }
  };
  check(o.thresholds, "thresholds");
  check(o.ced_grid, "ced grid");
  check(o.auc_ceilings, "auc ceilings");
  for (double c : o.auc_ceilings) {
    if (!(c > 0.0)) throw InvalidInput("eval options: auc ceiling must be positive");
  }
  if (!std::is_sorted(o.ced_grid.begin(), o.ced_grid.end())) {
    throw InvalidInput("eval options: ced grid must be sorted ascending");
  }
  return o;
}

EvalReport Evaluate(const EvalPairing& pairing, const EvalOptions& options) {
  if (pairing.empty()) throw InvalidInput("evaluate: pairing is empty");
  const EvalOptions opt = options.Resolved();
  EvalReport report;
  report.ced_mode = opt.ced_mode;
  report.images = static_cast<int>(pairing.size());
  report.landmarks = static_cast<int>(pairing.front().gt.size());
  for (const auto& e : pairing) {
    e.pred.Validate(("prediction '" + e.id + "'").c_str());
    e.gt.Validate(("ground truth '" + e.id + "'").c_str());
    if (e.pred.size() != e.gt.size()) {
      throw InvalidInput("evaluate: image '" + e.id + "' has " + std::to_string(e.pred.size()) +
                         " predicted and " + std::to_string(e.gt.size()) + " ground-truth landmarks");
    }
    if (static_cast<int>(e.gt.size()) != report.landmarks) {
      throw InvalidInput("evaluate: image '" + e.id + "' has " + std::to_string(e.gt.size()) +
                         " landmarks, expected " + std::to_string(report.landmarks));
    }
    std::vector<double> row(e.gt.size(), kNaN);
    double sum = 0.0;
    int counted = 0;
    for (std::size_t j = 0; j < e.gt.size(); ++j) {
      if (!e.gt.IsVisible(j)) continue;
      row[j] = NmeLandmark(e.pred.points[j], e.gt.points[j], e.norm);
      sum += row[j];
      ++counted;
    }
    report.ids.push_back(e.id);
    report.nme_per_image.push_back(counted > 0 ? sum / counted : kNaN);
    report.nme_per_landmark.push_back(std::move(row));
  }
  double total = 0.0;
  int images = 0;
  for (double v : report.nme_per_image) {
    if (std::isnan(v)) continue;
    total += v;
    ++images;
  }
  if (images == 0) throw InvalidInput("evaluate: no visible ground-truth landmarks");
  report.nme = total / images;
  for (double t : opt.thresholds) {
    report.fr_image.push_back({t, FailureRateImage(report, t)});
    report.fr_landmark.push_back({t, FailureRateLandmark(report, t)});
  }
  for (double t : opt.ced_grid) report.ced.push_back({t, CedAt(report, t)});
  for (double c : opt.auc_ceilings) report.auc.push_back({c, Auc(report, opt.ced_grid, c)});
  return report;
}

double FailureRateImage(const EvalReport& report, double theta) {
  int failed = 0, counted = 0;
  for (double v : report.nme_per_image) {
    if (std::isnan(v)) continue;
    ++counted;
    if (v > theta) ++failed;
  }
  return counted > 0 ? static_cast<double>(failed) / counted : 0.0;
}

double FailureRateLandmark(const EvalReport& report, double theta) {
  if (report.nme_per_landmark.empty()) return 0.0;
  const std::size_t m = report.nme_per_landmark.front().size();
  double sum = 0.0;
  int landmarks = 0;
  for (std::size_t j = 0; j < m; ++j) {
    int failed = 0, counted = 0;
    for (const auto& row : report.nme_per_landmark) {
      if (std::isnan(row[j])) continue;
      ++counted;
      if (row[j] > theta) ++failed;
    }
    if (counted == 0) continue;
    sum += static_cast<double>(failed) / counted;
    ++landmarks;
  }
  return landmarks > 0 ? sum / landmarks : 0.0;
}

double Auc(const EvalReport& report, const std::vector<double>& grid, double ceiling) {
  if (!(ceiling > 0.0)) throw InvalidInput("auc: ceiling must be positive");
  std::vector<double> xs{0.0};
  for (double t : grid) {
    if (t > 0.0 && t < ceiling) xs.push_back(t);
  }
  xs.push_back(ceiling);
  double area = 0.0;
  double prev = CedAt(report, xs.front());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double cur = CedAt(report, xs[k]);
    area += 0.5 * (prev + cur) * (xs[k] - xs[k - 1]);
    prev = cur;
  }
  return std::clamp(area / ceiling, 0.0, 1.0);
}

}  // namespace hmot::metrics
