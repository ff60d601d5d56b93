#include "hmot/io/report.h"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json_util.h"

namespace hmot::io {
namespace {

using detail::Json;

Json Number(double v) {
  return std::isnan(v) ? Json(nullptr) : Json(v);
}

Json Curve(const std::vector<metrics::ThresholdValue>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back({{"theta", x.threshold}, {"value", x.value}});
  return out;
}

}  // namespace

std::string EvalReportJson(const metrics::EvalReport& report) {
  Json j;
  j["images"] = report.images;
  j["landmarks"] = report.landmarks;
  j["nme"] = report.nme;
  j["fr_image"] = Curve(report.fr_image);
  j["fr_landmark"] = Curve(report.fr_landmark);
  j["auc"] = Curve(report.auc);
  j["ced_mode"] = report.ced_mode == metrics::CedMode::kLandmarkWise ? "landmark" : "image";
  j["ced"] = Curve(report.ced);
  Json per_image = Json::array();
  for (std::size_t i = 0; i < report.ids.size(); ++i) {
    Json row = Json::array();
    for (double v : report.nme_per_landmark[i]) row.push_back(Number(v));
    per_image.push_back({{"id", report.ids[i]}, {"nme", Number(report.nme_per_image[i])}, {"nme_per_landmark", row}});
  }
  j["per_image"] = std::move(per_image);
  return j.dump(2) + "\n";
}

std::string CedCsv(const metrics::EvalReport& report) {
  std::ostringstream os;
  os << std::setprecision(17) << "theta,ced\n";
  for (const auto& x : report.ced) os << x.threshold << ',' << x.value << '\n';
  return os.str();
}

std::string CedSvg(const metrics::EvalReport& report) {
  constexpr double kW = 480, kH = 320, kPad = 40;
  double max_theta = 0.0;
  for (const auto& x : report.ced) max_theta = std::max(max_theta, x.threshold);
  if (max_theta <= 0.0) max_theta = 1.0;
  auto px = [&](double theta) { return kPad + (kW - 2 * kPad) * theta / max_theta; };
  auto py = [&](double ced) { return kH - kPad - (kH - 2 * kPad) * ced; };
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << kPad << "\" y1=\"" << py(0) << "\" x2=\"" << kW - kPad << "\" y2=\"" << py(0)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kPad << "\" y1=\"" << py(0) << "\" x2=\"" << kPad << "\" y2=\"" << py(1)
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" text-anchor=\"middle\" font-size=\"12\">NME threshold (0 to "
     << std::setprecision(4) << max_theta << std::setprecision(2) << ")</text>\n";
  os << "<text x=\"12\" y=\"" << kH / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 " << kH / 2
     << ")\" text-anchor=\"middle\">CED</text>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < report.ced.size(); ++k) {
    if (k > 0) os << ' ' << px(report.ced[k].threshold) << ',' << py(report.ced[k - 1].value);
    os << (k > 0 ? " " : "") << px(report.ced[k].threshold) << ',' << py(report.ced[k].value);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string PerturbManifestJson(const perturb::PerturbSpec& spec, const std::vector<ManifestEntry>& entries) {
  Json j;
  j["kind"] = std::string(perturb::ToString(spec.kind));
  j["protocol"] = std::string(perturb::ToString(spec.protocol));
  j["seed"] = spec.seed;
  if (spec.kind == perturb::PerturbKind::kOcclusion) {
    j["min_axis"] = spec.occlusion.min_axis;
    j["max_axis"] = spec.occlusion.max_axis;
  } else {
    j["multiplier"] = spec.blur.multiplier;
    j["cap"] = spec.blur.cap;
    j["nose_index"] = spec.nose_index;
  }
  Json items = Json::array();
  for (const auto& e : entries) {
    Json item;
    item["input"] = e.input;
    item["output"] = e.output;
    if (spec.kind == perturb::PerturbKind::kOcclusion) {
      item["seed"] = e.seed;
      item["ellipse"] = {{"cx", e.ellipse.cx},         {"cy", e.ellipse.cy},
                         {"semi_a", e.ellipse.semi_a}, {"semi_b", e.ellipse.semi_b},
                         {"angle", e.ellipse.angle},   {"area", e.ellipse.Area()},
                         {"clipped_area", e.clipped_area}};
      item["occluded_pixels"] = e.occluded_pixels;
    } else {
      item["kernel"] = {{"dx", e.kernel.dx},
                        {"dy", e.kernel.dy},
                        {"length", e.kernel.length},
                        {"angle", e.kernel.angle}};
    }
    items.push_back(std::move(item));
  }
  j["images"] = std::move(items);
  return j.dump(2) + "\n";
}

}  // namespace hmot::io
