#include "hmot/ot/losses.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hmot/error.h"
#include "hmot/ot/softmax.h"

namespace hmot::ot {
namespace {

double GridUnit(const GridShape& shape) {
  return static_cast<double>(std::max(std::max(shape.height, shape.width) - 1, 1));
}

Point Barycenter(const Heatmap& p) {
  double sx = 0.0, sy = 0.0, total = 0.0;
  for (int r = 0; r < p.height(); ++r) {
    for (int c = 0; c < p.width(); ++c) {
      const double m = p.at(r, c);
      sx += m * c;
      sy += m * r;
      total += m;
    }
  }
  return {sx / total, sy / total};
}

}  // namespace

LossAndGradient L2Loss(const Heatmap& pred, const Heatmap& target) {
  RequireSameShape(pred, target, "l2 loss");
  RequireFinite(pred, "l2 loss prediction");
  RequireFinite(target, "l2 loss target");
  LossAndGradient out{0.0, Heatmap(pred.shape())};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    out.value += d * d;
    out.gradient[i] = 2.0 * d;
  }
  return out;
}

LossAndGradient L2SoftmaxLoss(const Heatmap& logits, const Heatmap& target) {
  RequireSameShape(logits, target, "l2 softmax loss");
  const Heatmap p = Softmax(logits);
  auto raw = L2Loss(p, target);
  raw.gradient = SoftmaxBackward(p, raw.gradient);
  return raw;
}

LossAndGradient JsDivergenceLoss(const Heatmap& logits, const Heatmap& target) {
  RequireSameShape(logits, target, "js divergence");
  RequireNormalized(target, "js divergence target");
  const Heatmap p = Softmax(logits);
  Heatmap d_p(p.shape());
  double value = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + target[i]);
    if (m == 0.0) continue;
    if (p[i] > 0.0) {
      const double log_pm = std::log(p[i] / m);
      value += 0.5 * p[i] * log_pm;
      // d/dp_i of the divergence; the constant parts cancel against the
      // midpoint's dependence on p.
      d_p[i] = 0.5 * log_pm;
    }
    if (target[i] > 0.0) value += 0.5 * target[i] * std::log(target[i] / m);
  }
  return {std::clamp(value, 0.0, std::log(2.0)), SoftmaxBackward(p, d_p)};
}

LossAndGradient SoftArgMaxLoss(const Heatmap& logits, const Point& gt) {
  const GridShape& shape = logits.shape();
  if (!std::isfinite(gt.x) || !std::isfinite(gt.y) || gt.x < 0.0 || gt.y < 0.0 || gt.x > shape.width - 1 ||
      gt.y > shape.height - 1) {
    std::ostringstream os;
    os << "soft-argmax loss: ground-truth point (" << gt.x << ", " << gt.y << ") lies outside the "
       << ToString(shape) << " grid";
    throw InvalidInput(os.str());
  }
  const Heatmap p = Softmax(logits);
  const Point bc = Barycenter(p);
  const double unit = GridUnit(shape);
  const double dx = (bc.x - gt.x) / unit, dy = (bc.y - gt.y) / unit;
  Heatmap d_p(shape);
  for (int r = 0; r < shape.height; ++r) {
    for (int c = 0; c < shape.width; ++c) d_p.at(r, c) = 2.0 * (dx * c + dy * r) / unit;
  }
  return {dx * dx + dy * dy, SoftmaxBackward(p, d_p)};
}

std::string_view ToString(LossKind kind) {
  switch (kind) {
    case LossKind::kWasserstein:
      return "wasserstein";
    case LossKind::kL2Softmax:
      return "l2";
    case LossKind::kL2Raw:
      return "l2-raw";
    case LossKind::kJensenShannon:
      return "js";
    case LossKind::kSoftArgMax:
      return "soft-argmax";
  }
  return "unknown";
}

LossKind ParseLossKind(std::string_view name) {
  for (LossKind k : {LossKind::kWasserstein, LossKind::kL2Softmax, LossKind::kL2Raw, LossKind::kJensenShannon,
                     LossKind::kSoftArgMax}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidInput("unknown loss '" + std::string(name) +
                     "' (expected wasserstein, l2, l2-raw, js or soft-argmax)");
}

LossAndGradient EvaluateLoss(LossKind kind, const Heatmap& pred_logits, const Heatmap& target,
                             const SinkhornConfig& cfg, LossResult* sinkhorn, const SinkhornPotentials* warm_start) {
  switch (kind) {
    case LossKind::kWasserstein: {
      RequireSameShape(pred_logits, target, "wasserstein loss");
      SinkhornConfig c = cfg;
      if (c.gradient == GradientMode::kNone) c.gradient = GradientMode::kImplicit;
      auto result = SinkhornW1(Softmax(pred_logits), target, c, warm_start);
      LossAndGradient out{result.value, result.gradient};
      if (sinkhorn != nullptr) *sinkhorn = std::move(result);
      return out;
    }
    case LossKind::kL2Softmax:
      return L2SoftmaxLoss(pred_logits, target);
    case LossKind::kL2Raw:
      return L2Loss(pred_logits, target);
    case LossKind::kJensenShannon:
      return JsDivergenceLoss(pred_logits, target);
    case LossKind::kSoftArgMax: {
      RequireSameShape(pred_logits, target, "soft-argmax loss");
      RequireFinite(target, "soft-argmax target");
      for (double t : target.values()) {
        if (t < 0.0) throw InvalidInput("soft-argmax loss: target heatmap has negative values");
      }
      if (!(target.Sum() > 0.0)) throw InvalidInput("soft-argmax loss: target heatmap has zero mass");
      return SoftArgMaxLoss(pred_logits, Barycenter(target));
    }
  }
  throw InvalidInput("unknown loss kind");
}

}  // namespace hmot::ot
