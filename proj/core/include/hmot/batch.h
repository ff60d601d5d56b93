#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmot/grid.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"
#include "hmot/ot/losses.h"

namespace hmot {

/// Shape of a contiguous count x height x width buffer, row-major,
/// heatmap-major (the HMF1 payload layout).
struct BatchShape {
  std::size_t count = 0;
  int height = 0;
  int width = 0;

  GridShape grid() const { return {height, width}; }
  std::size_t size() const { return count * grid().cells(); }
};

/// Per-heatmap loss values and logit gradients over borrowed buffers.
/// `pred_logits` and `targets` hold shape.size() values; `values` receives
/// shape.count losses and `grads` shape.size() gradients. Each slot equals
/// ot::EvaluateLoss on the same heatmap, whatever the thread count.
template <typename T>
void LossAndGradBatch(ot::LossKind kind, std::span<const T> pred_logits, std::span<const T> targets,
                      const BatchShape& shape, const ot::SinkhornConfig& cfg, std::span<double> values,
                      std::span<T> grads, int threads = 1);

/// Decodes each heatmap of the buffer; returns count points scaled by `scale`.
template <typename T>
std::vector<Point> DecodeBuffer(std::span<const T> heatmaps, const BatchShape& shape, heatmap::DecodeMethod method,
                                double scale, int threads = 1);

/// Writes one target per center into `out` (centers.size() heatmaps of
/// spec's shape).
template <typename T>
void MakeTargetsBuffer(std::span<const Point> centers, const heatmap::TargetSpec& spec, std::span<T> out);

}  // namespace hmot
