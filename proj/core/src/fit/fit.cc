#include "hmot/fit/fit.h"

#include <cmath>
#include <ostream>
#include <string>

#include "hmot/error.h"
#include "hmot/heatmap/decode.h"
#include "hmot/ot/softmax.h"
#include "hmot/random.h"

namespace hmot::fit {
namespace {

constexpr double kStopGradNorm = 1e-10;

double Norm(const Heatmap& g) {
  double s = 0.0;
  for (double v : g.values()) s += v * v;
  return std::sqrt(s);
}

bool AllFinite(const Heatmap& g) {
  for (double v : g.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

double DefaultStep(ot::LossKind kind) {
  switch (kind) {
    case ot::LossKind::kWasserstein:
      return 0.5;
    case ot::LossKind::kL2Softmax:
    case ot::LossKind::kL2Raw:
      return 10.0;
    case ot::LossKind::kJensenShannon:
      return 1.0;
    case ot::LossKind::kSoftArgMax:
      return 1.0;
  }
  return 1.0;
}

void FitProblem::Validate() const {
  if (iterations < 1) throw InvalidInput("fit: iteration budget must be at least 1");
  if (step < 0.0 || !std::isfinite(step)) throw InvalidInput("fit: step size must be positive");
  RequireSameShape(init_logits, target, "fit");
  RequireFinite(init_logits, "fit init logits");
  if (loss == ot::LossKind::kWasserstein) sinkhorn.Validate();
}

FitTrace Fit(const FitProblem& problem) {
  problem.Validate();
  const double step = problem.step > 0.0 ? problem.step : DefaultStep(problem.loss);
  FitTrace trace;
  Heatmap logits = problem.init_logits;
  ot::LossResult solve;
  bool have_potentials = false;
  for (int it = 0; it < problem.iterations; ++it) {
    const ot::SinkhornPotentials* warm = problem.warm_start && have_potentials ? &solve.potentials : nullptr;
    ot::LossAndGradient lg;
    try {
      lg = ot::EvaluateLoss(problem.loss, logits, problem.target, problem.sinkhorn, &solve, warm);
    } catch (const InvalidInput&) {
      // Logits drifted out of the representable range.
      trace.diverged = true;
      break;
    }
    if (problem.loss == ot::LossKind::kWasserstein) {
      have_potentials = true;
      trace.solver_iterations.push_back(solve.iterations_used);
      if (!solve.converged) ++trace.unconverged_solves;
    }
    if (!std::isfinite(lg.value) || !AllFinite(lg.gradient)) {
      trace.diverged = true;
      break;
    }
    const double norm = Norm(lg.gradient);
    trace.loss.push_back(lg.value);
    trace.grad_norm.push_back(norm);
    trace.bc.push_back(heatmap::DecodeGetBc(ot::Softmax(logits)));
    trace.max.push_back(heatmap::DecodeGetMax(logits).point);
    if (norm < kStopGradNorm) break;
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] -= step * lg.gradient[i];
  }
  trace.final_bc = heatmap::DecodeGetBc(ot::Softmax(logits));
  trace.final_max = heatmap::DecodeGetMax(logits).point;
  trace.final_logits = std::move(logits);
  return trace;
}

void WriteFitCsv(std::ostream& os, const FitTrace& trace) {
  const auto old_precision = os.precision(17);
  os << "iteration,loss,grad_norm,bc_x,bc_y,max_x,max_y\n";
  for (std::size_t k = 0; k < trace.loss.size(); ++k) {
    os << k << ',' << trace.loss[k] << ',' << trace.grad_norm[k] << ',' << trace.bc[k].x << ',' << trace.bc[k].y
       << ',' << trace.max[k].x << ',' << trace.max[k].y << '\n';
  }
  os.precision(old_precision);
}

Heatmap ZeroInit(const GridShape& shape) {
  return Heatmap(shape, 0.0);
}

Heatmap RandomInit(const GridShape& shape, std::uint64_t seed, double scale) {
  Rng rng(seed);
  Heatmap hm(shape);
  for (double& v : hm.values()) v = scale * rng.Normal();
  return hm;
}

Heatmap BlobInit(const GridShape& shape, const Point& center, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("blob init: sigma must be positive");
  Heatmap hm(shape);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int r = 0; r < shape.height; ++r) {
    for (int c = 0; c < shape.width; ++c) {
      const double dx = c - center.x, dy = r - center.y;
      hm.at(r, c) = -(dx * dx + dy * dy) * inv;
    }
  }
  return hm;
}

double TranslationDerivative(ot::LossKind kind, const Heatmap& target, const Point& source_center, double sigma,
                             const Point& direction, const ot::SinkhornConfig& cfg, double h) {
  const double len = std::hypot(direction.x, direction.y);
  if (!(len > 0.0)) throw InvalidInput("translation derivative: direction must be non-zero");
  const double ex = direction.x / len, ey = direction.y / len;
  auto loss_at = [&](double t) {
    const Heatmap logits =
        BlobInit(target.shape(), {source_center.x + t * ex, source_center.y + t * ey}, sigma);
    ot::SinkhornConfig c = cfg;
    c.gradient = ot::GradientMode::kNone;
    if (kind == ot::LossKind::kWasserstein) return ot::SinkhornW1(ot::Softmax(logits), target, c).value;
    return ot::EvaluateLoss(kind, logits, target, c).value;
  };
  return (loss_at(h) - loss_at(-h)) / (2.0 * h);
}

}  // namespace hmot::fit
