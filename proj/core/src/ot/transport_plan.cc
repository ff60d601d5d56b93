#include "hmot/ot/transport_plan.h"

#include <algorithm>
#include <cmath>

namespace hmot::ot {

std::vector<double> TransportPlan::SourceMarginal() const {
  const std::size_t n = cells();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += coupling[i * n + j];
  }
  return out;
}

std::vector<double> TransportPlan::TargetMarginal() const {
  const std::size_t n = cells();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j] += coupling[i * n + j];
  }
  return out;
}

double TransportPlan::Cost(const GroundCost& cost) const {
  const std::size_t n = cells();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = coupling[i * n + j];
      if (p != 0.0) total += p * cost(i, j);
    }
  }
  return total;
}

TransportPlan::Feasibility TransportPlan::Check(const Heatmap& u, const Heatmap& v) const {
  Feasibility f;
  const auto rows = SourceMarginal();
  const auto cols = TargetMarginal();
  for (std::size_t i = 0; i < cells(); ++i) {
    f.source_error += std::abs(rows[i] - u[i]);
    f.target_error += std::abs(cols[i] - v[i]);
  }
  f.min_entry = coupling.empty() ? 0.0 : *std::min_element(coupling.begin(), coupling.end());
  return f;
}

}  // namespace hmot::ot
