#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmot/grid.h"
#include "hmot/ot/transport_plan.h"

namespace hmot::ot {

/// Largest grid (in cells) accepted by ExactW1. The dense cost matrix is
/// kExactMaxCells^2 entries.
inline constexpr std::size_t kExactMaxCells = 256;

/// Solution of a balanced dense transportation problem.
struct TransportationSolution {
  std::vector<double> flow;           ///< supply.size() x demand.size(), row-major
  std::vector<double> row_potential;  ///< u_i with u_i + v_j <= c_ij, equality on the basis
  std::vector<double> col_potential;
  double cost = 0.0;
  std::size_t pivots = 0;
};

/// Transportation simplex (least-cost start, MODI pricing, Bland's rule after
/// a run of degenerate pivots). Supplies and demands must be non-negative and
/// balanced within 1e-9 of each other; `cost` is supply-major.
TransportationSolution SolveTransportation(std::span<const double> supply, std::span<const double> demand,
                                           std::span<const double> cost);

struct ExactResult {
  double distance = 0.0;
  TransportPlan plan;
  std::size_t pivots = 0;
};

/// Exact first Wasserstein distance between two normalized heatmaps on the
/// same grid under the normalized Euclidean ground cost. Refuses grids with
/// more than kExactMaxCells cells.
ExactResult ExactW1(const Heatmap& u, const Heatmap& v);

}  // namespace hmot::ot
