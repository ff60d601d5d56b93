#pragma once

#include "hmot/grid.h"

namespace hmot::ot {

/// exp(l - max) / sum exp(l - max). Rejects non-finite logits, naming the cell.
Heatmap Softmax(const Heatmap& logits);

/// Pulls a gradient with respect to the probabilities back through the
/// softmax: probs * (grad - <grad, probs>).
Heatmap SoftmaxBackward(const Heatmap& probs, const Heatmap& grad_probs);

/// Logits whose softmax is `probs` (log, with zero cells mapped to
/// `floor_logit`). Inverse of Softmax up to an additive constant.
Heatmap LogitsFromDistribution(const Heatmap& probs, double floor_logit = -700.0);

}  // namespace hmot::ot
