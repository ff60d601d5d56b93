#include "hmot/ot/softmax.h"

#include <algorithm>
#include <cmath>

#include "hmot/error.h"

namespace hmot::ot {

Heatmap Softmax(const Heatmap& logits) {
  RequireFinite(logits, "softmax");
  const double peak = logits.Max();
  Heatmap out(logits.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= total;
  return out;
}

Heatmap SoftmaxBackward(const Heatmap& probs, const Heatmap& grad_probs) {
  RequireSameShape(probs, grad_probs, "softmax backward");
  double mean = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) mean += probs[i] * grad_probs[i];
  Heatmap out(probs.shape());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] * (grad_probs[i] - mean);
  return out;
}

Heatmap LogitsFromDistribution(const Heatmap& probs, double floor_logit) {
  Heatmap out(probs.shape());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0 || !std::isfinite(probs[i])) {
      throw InvalidInput("logits from distribution: invalid probability at index " + std::to_string(i));
    }
    out[i] = probs[i] > 0.0 ? std::max(std::log(probs[i]), floor_logit) : floor_logit;
  }
  return out;
}

}  // namespace hmot::ot
