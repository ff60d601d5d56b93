#include "grid_kernel.h"

#include <algorithm>
#include <cmath>

namespace hmot::ot::detail {
namespace {

inline void Axpy(double s, const double* __restrict x, double* __restrict y, int n) {
  for (int k = 0; k < n; ++k) y[k] += s * x[k];
}

}  // namespace

GibbsKernel::GibbsKernel(const GroundCost& ground, double eps)
    : cost(&ground), epsilon(eps), representable(ground.max_cost() / eps <= kMaxKernelExponent) {
  const auto offsets = ground.offsets();
  kernel.resize(offsets.size());
  weighted.resize(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    kernel[k] = std::exp(-offsets[k] / eps);
    weighted[k] = offsets[k] * kernel[k];
  }
}

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
void Correlate(const GridShape& shape, std::span<const double> table, int table_width,
               std::span<const double> weights, std::span<const char> wanted, std::span<double> out) {
  const int h = shape.height, w = shape.width;
  std::vector<char> row_live(static_cast<std::size_t>(h), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (weights[static_cast<std::size_t>(r * w + c)] != 0.0) {
        row_live[static_cast<std::size_t>(r)] = 1;
        break;
      }
    }
  }
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int rj = 0; rj < h; ++rj) {
    bool any = false;
    for (int cj = 0; cj < w; ++cj) any = any || wanted[static_cast<std::size_t>(rj * w + cj)];
    if (!any) continue;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int r = 0; r < h; ++r) {
      if (!row_live[static_cast<std::size_t>(r)]) continue;
      // The table is symmetric in the column offset, so entry (cj - c) can be
      // read in place of (c - cj) and the inner loop runs forward.
      const double* krow = table.data() + (r - rj + h - 1) * table_width + (w - 1);
      const double* wrow = weights.data() + r * w;
      for (int c = 0; c < w; ++c) {
        const double s = wrow[c];
        if (s == 0.0) continue;
        Axpy(s, krow - c, acc.data(), w);
      }
    }
    for (int cj = 0; cj < w; ++cj) {
      const auto j = static_cast<std::size_t>(rj * w + cj);
      if (wanted[j]) out[j] = acc[static_cast<std::size_t>(cj)];
    }
  }
}

}  // namespace hmot::ot::detail
