#pragma once

#include <iosfwd>
#include <vector>

#include "hmot/grid.h"

namespace hmot::fit {

/// Geometry of the spurious-activation study: a normalized Gaussian target
/// plus a narrower normalized Gaussian blob far away.
struct SpuriousStudyConfig {
  int height = 64;
  int width = 64;
  Point target_center{17.0, 32.0};
  double target_sigma = 2.0;
  /// Blob center relative to the target center, in pixels.
  Point blob_offset{30.0, 0.0};
  double blob_sigma = 1.0;

  void Validate() const;
};

struct SpuriousRow {
  double mass_fraction = 0.0;
  /// Distance from the target center to each decode, in pixels.
  double bc_displacement = 0.0;
  double max_displacement = 0.0;
  /// m times the blob offset: where the barycenter of the mixture sits if
  /// each Gaussian's barycenter is its center.
  double analytic_bc_displacement = 0.0;
  Point bc;
  Point max;
};

struct SpuriousStudy {
  SpuriousStudyConfig config;
  /// Smallest mass fraction at which the blob's peak reaches the target's peak.
  double crossover = 0.0;
  std::vector<SpuriousRow> rows;
};

/// (1 - m) * target + m * blob.
Heatmap SpuriousHeatmap(const SpuriousStudyConfig& cfg, double mass_fraction);

/// Decodes the mixture with GET_BC and GET_MAX for every fraction in [0, 0.5).
SpuriousStudy SpuriousActivationStudy(const std::vector<double>& mass_fractions,
                                      const SpuriousStudyConfig& cfg = {});

/// Columns: mass_fraction, bc_displacement, analytic_bc_displacement, max_displacement.
void WriteSpuriousCsv(std::ostream& os, const SpuriousStudy& study);

}  // namespace hmot::fit
