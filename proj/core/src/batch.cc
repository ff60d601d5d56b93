#include "hmot/batch.h"

#include <string>
#include <type_traits>

#include "hmot/error.h"
#include "hmot/parallel.h"

namespace hmot {
namespace {

template <typename T>
Heatmap Slot(std::span<const T> buffer, const BatchShape& shape, std::size_t k) {
  const std::size_t cells = shape.grid().cells();
  const auto s = buffer.subspan(k * cells, cells);
  return Heatmap(shape.grid(), std::vector<double>(s.begin(), s.end()));
}

// Float storage cannot hold a distribution normalized to 1e-9, so float
// slots that must be distributions are renormalized after a looser check.
template <typename T>
Heatmap DistributionSlot(std::span<const T> buffer, const BatchShape& shape, std::size_t k, const char* what) {
  Heatmap hm = Slot(buffer, shape, k);
  if constexpr (std::is_same_v<T, float>) return Renormalized(hm, kFloatNormalizationTolerance, what);
  return hm;
}

bool NeedsDistributionTarget(ot::LossKind kind) {
  return kind == ot::LossKind::kWasserstein || kind == ot::LossKind::kJensenShannon;
}

void RequireLength(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InvalidInput(std::string(what) + ": buffer holds " + std::to_string(got) + " values, expected " +
                       std::to_string(want));
  }
}

void RequireShape(const BatchShape& shape) {
  if (shape.height < 1 || shape.width < 1) throw InvalidInput("batch: heatmap dimensions must be positive");
}

}  // namespace

template <typename T>
void LossAndGradBatch(ot::LossKind kind, std::span<const T> pred_logits, std::span<const T> targets,
                      const BatchShape& shape, const ot::SinkhornConfig& cfg, std::span<double> values,
                      std::span<T> grads, int threads) {
  RequireShape(shape);
  RequireLength(pred_logits.size(), shape.size(), "loss batch predictions");
  RequireLength(targets.size(), shape.size(), "loss batch targets");
  RequireLength(values.size(), shape.count, "loss batch values");
  RequireLength(grads.size(), shape.size(), "loss batch gradients");
  const std::size_t cells = shape.grid().cells();
  ParallelFor(shape.count, threads, [&](std::size_t k) {
    const Heatmap target = NeedsDistributionTarget(kind) ? DistributionSlot(targets, shape, k, "loss batch target")
                                                         : Slot(targets, shape, k);
    const auto lg = ot::EvaluateLoss(kind, Slot(pred_logits, shape, k), target, cfg);
    values[k] = lg.value;
    for (std::size_t i = 0; i < cells; ++i) grads[k * cells + i] = static_cast<T>(lg.gradient[i]);
  });
}

template <typename T>
std::vector<Point> DecodeBuffer(std::span<const T> heatmaps, const BatchShape& shape, heatmap::DecodeMethod method,
                                double scale, int threads) {
  RequireShape(shape);
  RequireLength(heatmaps.size(), shape.size(), "decode batch");
  std::vector<Heatmap> hms;
  hms.reserve(shape.count);
  for (std::size_t k = 0; k < shape.count; ++k) {
    hms.push_back(method == heatmap::DecodeMethod::kGetBc ? DistributionSlot(heatmaps, shape, k, "decode batch")
                                                         : Slot(heatmaps, shape, k));
  }
  return heatmap::DecodeBatch(hms, method, scale, threads).points;
}

template <typename T>
void MakeTargetsBuffer(std::span<const Point> centers, const heatmap::TargetSpec& spec, std::span<T> out) {
  const std::size_t cells = spec.shape().cells();
  RequireLength(out.size(), centers.size() * cells, "target batch");
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const Heatmap hm = heatmap::MakeGaussianTarget(centers[k], spec);
    for (std::size_t i = 0; i < cells; ++i) out[k * cells + i] = static_cast<T>(hm[i]);
  }
}

template void LossAndGradBatch<float>(ot::LossKind, std::span<const float>, std::span<const float>,
                                      const BatchShape&, const ot::SinkhornConfig&, std::span<double>,
                                      std::span<float>, int);
template void LossAndGradBatch<double>(ot::LossKind, std::span<const double>, std::span<const double>,
                                       const BatchShape&, const ot::SinkhornConfig&, std::span<double>,
                                       std::span<double>, int);
template std::vector<Point> DecodeBuffer<float>(std::span<const float>, const BatchShape&, heatmap::DecodeMethod,
                                                double, int);
template std::vector<Point> DecodeBuffer<double>(std::span<const double>, const BatchShape&, heatmap::DecodeMethod,
                                                 double, int);
template void MakeTargetsBuffer<float>(std::span<const Point>, const heatmap::TargetSpec&, std::span<float>);
template void MakeTargetsBuffer<double>(std::span<const Point>, const heatmap::TargetSpec&, std::span<double>);

}  // namespace hmot
