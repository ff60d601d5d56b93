#include "hmot/fit/spurious.h"

#include <cmath>
#include <ostream>
#include <sstream>

#include "hmot/error.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"

namespace hmot::fit {
namespace {

heatmap::TargetSpec Spec(const SpuriousStudyConfig& cfg, double sigma) {
  return {sigma, cfg.height, cfg.width, heatmap::AmplitudeMode::kNormalized};
}

Point BlobCenter(const SpuriousStudyConfig& cfg) {
  return {cfg.target_center.x + cfg.blob_offset.x, cfg.target_center.y + cfg.blob_offset.y};
}

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

void SpuriousStudyConfig::Validate() const {
  const GridShape shape{height, width};
  if (!heatmap::InsideGrid(target_center, shape) || !heatmap::InsideGrid(BlobCenter(*this), shape)) {
    throw InvalidInput("spurious study: target and blob centers must lie inside the " + ToString(shape) + " grid");
  }
  if (!(target_sigma > 0.0) || !(blob_sigma > 0.0)) throw InvalidInput("spurious study: sigmas must be positive");
}

Heatmap SpuriousHeatmap(const SpuriousStudyConfig& cfg, double mass_fraction) {
  cfg.Validate();
  if (!(mass_fraction >= 0.0 && mass_fraction < 1.0)) {
    throw InvalidInput("spurious study: mass fraction must lie in [0, 1)");
  }
  const Heatmap target = heatmap::MakeGaussianTarget(cfg.target_center, Spec(cfg, cfg.target_sigma));
  const Heatmap blob = heatmap::MakeGaussianTarget(BlobCenter(cfg), Spec(cfg, cfg.blob_sigma));
  Heatmap mix(target.shape());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = (1.0 - mass_fraction) * target[i] + mass_fraction * blob[i];
  return mix;
}

SpuriousStudy SpuriousActivationStudy(const std::vector<double>& mass_fractions, const SpuriousStudyConfig& cfg) {
  cfg.Validate();
  SpuriousStudy study;
  study.config = cfg;
  const Heatmap target = heatmap::MakeGaussianTarget(cfg.target_center, Spec(cfg, cfg.target_sigma));
  const Heatmap blob = heatmap::MakeGaussianTarget(BlobCenter(cfg), Spec(cfg, cfg.blob_sigma));
  // Peaks are equal when (1 - m) max(target) = m max(blob).
  study.crossover = target.Max() / (target.Max() + blob.Max());
  for (double m : mass_fractions) {
    if (!(m >= 0.0 && m < 0.5)) {
      std::ostringstream os;
      os << "spurious study: mass fraction " << m << " outside [0, 0.5)";
      throw InvalidInput(os.str());
    }
    const Heatmap mix = SpuriousHeatmap(cfg, m);
    SpuriousRow row;
    row.mass_fraction = m;
    row.bc = heatmap::DecodeGetBc(mix);
    row.max = heatmap::DecodeGetMax(mix).point;
    row.bc_displacement = Distance(row.bc, cfg.target_center);
    row.max_displacement = Distance(row.max, cfg.target_center);
    row.analytic_bc_displacement = m * std::hypot(cfg.blob_offset.x, cfg.blob_offset.y);
    study.rows.push_back(row);
  }
  return study;
}

void WriteSpuriousCsv(std::ostream& os, const SpuriousStudy& study) {
  const auto old_precision = os.precision(17);
  os << "mass_fraction,bc_displacement,analytic_bc_displacement,max_displacement\n";
  for (const auto& r : study.rows) {
    os << r.mass_fraction << ',' << r.bc_displacement << ',' << r.analytic_bc_displacement << ','
       << r.max_displacement << '\n';
  }
  os.precision(old_precision);
}

}  // namespace hmot::fit
