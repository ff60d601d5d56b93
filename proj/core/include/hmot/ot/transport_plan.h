#pragma once

#include <cstddef>
#include <vector>

#include "hmot/grid.h"
#include "hmot/ot/ground_cost.h"

namespace hmot::ot {

/// Dense coupling between two distributions on the same grid. Row index is
/// the source cell, column index the target cell.
struct TransportPlan {
  GridShape shape;
  std::vector<double> coupling;

  std::size_t cells() const { return shape.cells(); }
  double at(std::size_t source, std::size_t target) const { return coupling[source * cells() + target]; }

  std::vector<double> SourceMarginal() const;
  std::vector<double> TargetMarginal() const;
  double Cost(const GroundCost& cost) const;

  /// L1 distance of the plan's marginals from u and v, plus the most negative entry.
  struct Feasibility {
    double source_error = 0.0;
    double target_error = 0.0;
    double min_entry = 0.0;
  };
  Feasibility Check(const Heatmap& u, const Heatmap& v) const;
};

}  // namespace hmot::ot
