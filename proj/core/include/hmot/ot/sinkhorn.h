#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hmot/grid.h"
#include "hmot/ot/transport_plan.h"

namespace hmot::ot {

/// How LossResult::gradient is produced.
enum class GradientMode {
  /// Leave the gradient zero.
  kNone,
  /// Exact derivative of the reported (sharp) transport cost, obtained by
  /// differentiating the Sinkhorn fixed point. Dense solve up to
  /// kDenseGradientCells support cells, conjugate gradients beyond.
  kImplicit,
  /// Centered source dual potential: the envelope gradient of the
  /// entropy-regularized objective. Cheap; matches kImplicit as epsilon -> 0.
  kDualPotential,
};

inline constexpr std::size_t kDenseGradientCells = 1024;

struct SinkhornConfig {
  /// Entropic regularization, in normalized ground-cost units.
  double epsilon = 0.01;
  int max_iterations = 1000;
  /// Stop once the L1 violation of the source marginal falls below this.
  double marginal_tolerance = 1e-6;
  /// Potentials are always kept in the log domain; the flag is informational.
  bool log_domain = true;
  /// Warm up on a geometric schedule of larger epsilons before solving at
  /// `epsilon`. Same fixed point, fewer iterations for small epsilon.
  bool epsilon_scaling = true;
  /// Over-relaxation factor for the source update, in [1, 2). Applied only
  /// while the marginal violation decreases; 1 is plain Sinkhorn.
  double relaxation = 1.8;
  GradientMode gradient = GradientMode::kImplicit;

  /// Throws InvalidInput on non-positive epsilon / tolerance or max_iterations < 1.
  void Validate() const;
};

/// Dual potentials of an entropic transport problem. Cells without mass carry
/// -infinity. Can be fed back as a warm start.
struct SinkhornPotentials {
  GridShape shape;
  double epsilon = 0.0;
  std::vector<double> source;
  std::vector<double> target;
};

struct LossResult {
  /// <cost, plan> of the entropic plan, without the entropy term.
  double value = 0.0;
  /// d value / d logits of the source (through the softmax front end).
  Heatmap gradient;
  int iterations_used = 0;
  bool converged = false;
  /// L1 source-marginal violation at exit; the target marginal is exact.
  double marginal_error = 0.0;
  /// Dual objective of the regularized problem, <f, u> + <g, v> - epsilon.
  double regularized_value = 0.0;
  SinkhornPotentials potentials;
};

/// Solves entropic OT between two normalized heatmaps and evaluates the loss.
/// Non-convergence is reported through `converged`, never thrown.
LossResult SinkhornW1(const Heatmap& u, const Heatmap& v, const SinkhornConfig& cfg,
                      const SinkhornPotentials* warm_start = nullptr);

/// Gradient of SinkhornW1(softmax(logits_u), v) with respect to logits_u.
struct GradientField {
  Heatmap gradient;
  bool converged = false;
  int iterations_used = 0;
};
GradientField SinkhornGradient(const Heatmap& logits_u, const Heatmap& v, const SinkhornConfig& cfg);

/// Dense entropic plan from solved potentials (small grids only).
TransportPlan MaterializePlan(const SinkhornPotentials& potentials);

}  // namespace hmot::ot
