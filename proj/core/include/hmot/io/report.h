#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmot/metrics/metrics.h"
#include "hmot/perturb/perturb.h"

namespace hmot::io {

/// JSON rendering of an EvalReport; NaN entries (invisible landmarks) become null.
std::string EvalReportJson(const metrics::EvalReport& report);

/// "theta,ced" header, then one row per CED sample.
std::string CedCsv(const metrics::EvalReport& report);

/// Step plot of the CED samples, for eyeballing only.
std::string CedSvg(const metrics::EvalReport& report);

struct ManifestEntry {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  /// Occlusion only.
  perturb::Ellipse ellipse;
  std::size_t occluded_pixels = 0;
  double clipped_area = 0.0;
  /// Motion blur only.
  perturb::BlurFrame kernel;
};

/// JSON manifest of a perturbation run: the spec and the parameters drawn for
/// each image.
std::string PerturbManifestJson(const perturb::PerturbSpec& spec, const std::vector<ManifestEntry>& entries);

}  // namespace hmot::io
