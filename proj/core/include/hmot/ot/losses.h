#pragma once

#include <string_view>

#include "hmot/grid.h"
#include "hmot/ot/sinkhorn.h"

namespace hmot::ot {

struct LossAndGradient {
  double value = 0.0;
  Heatmap gradient;
};

/// sum (pred - target)^2 and its gradient 2 (pred - target). Raw arrays, no softmax.
LossAndGradient L2Loss(const Heatmap& pred, const Heatmap& target);

/// L2Loss(softmax(logits), target), gradient with respect to the logits.
LossAndGradient L2SoftmaxLoss(const Heatmap& logits, const Heatmap& target);

/// Jensen-Shannon divergence between softmax(logits) and a normalized target,
/// natural log, so the value lies in [0, ln 2].
LossAndGradient JsDivergenceLoss(const Heatmap& logits, const Heatmap& target);

/// Squared distance between the barycenter of softmax(logits) and `gt`, in
/// normalized grid units (pixels / max(H - 1, W - 1)). `gt` must lie inside
/// the grid.
LossAndGradient SoftArgMaxLoss(const Heatmap& logits, const Point& gt);

enum class LossKind {
  kWasserstein,
  /// L2 on softmax(pred) against a normalized target.
  kL2Softmax,
  /// L2 on raw pred against a peak-one target.
  kL2Raw,
  kJensenShannon,
  kSoftArgMax,
};

std::string_view ToString(LossKind kind);
/// Accepts the names produced by ToString(LossKind). Throws InvalidInput otherwise.
LossKind ParseLossKind(std::string_view name);

/// Loss of `pred_logits` against `target` for any LossKind. For kSoftArgMax the
/// target heatmap is reduced to its barycenter; for kWasserstein the Sinkhorn
/// details are written to `sinkhorn` when given, and `warm_start` seeds the
/// solver.
LossAndGradient EvaluateLoss(LossKind kind, const Heatmap& pred_logits, const Heatmap& target,
                             const SinkhornConfig& cfg = {}, LossResult* sinkhorn = nullptr,
                             const SinkhornPotentials* warm_start = nullptr);

}  // namespace hmot::ot
