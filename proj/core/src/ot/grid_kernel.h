#pragma once

// Internal: translation-invariant kernel sums on a pixel grid.

#include <cstddef>
#include <span>
#include <vector>

#include "hmot/grid.h"
#include "hmot/ot/ground_cost.h"

namespace hmot::ot::detail {

/// Largest cost/epsilon ratio for which exp(-cost/epsilon) stays a normal
/// double; above it the solver falls back to per-entry log-sum-exp.
inline constexpr double kMaxKernelExponent = 600.0;

/// exp(-C/eps) and C * exp(-C/eps) over the offset table of a ground cost.
struct GibbsKernel {
  GibbsKernel(const GroundCost& cost, double epsilon);

  const GroundCost* cost;
  double epsilon;
  bool representable;  ///< max_cost / epsilon <= kMaxKernelExponent
  std::vector<double> kernel;
  std::vector<double> weighted;  ///< cost * kernel
};

/// out[j] = sum_i table(j - i) * weights[i] for every j with wanted[j].
/// Rows of `weights` that are entirely zero are skipped. Summation order is
/// fixed, so results are reproducible bit for bit.
void Correlate(const GridShape& shape, std::span<const double> table, int table_width,
               std::span<const double> weights, std::span<const char> wanted, std::span<double> out);

}  // namespace hmot::ot::detail
