#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hmot/grid.h"
#include "hmot/ot/losses.h"
#include "hmot/ot/sinkhorn.h"

namespace hmot::fit {

/// Step size used when FitProblem::step is left at 0.
double DefaultStep(ot::LossKind kind);

struct FitProblem {
  /// Normalized for distribution losses, peak-one for kL2Raw.
  Heatmap target;
  ot::LossKind loss = ot::LossKind::kWasserstein;
  Heatmap init_logits;
  /// Plain gradient-descent step on the logits. 0 selects DefaultStep(loss).
  double step = 0.0;
  int iterations = 100;
  ot::SinkhornConfig sinkhorn;
  /// Reuse the previous iteration's potentials to start each Sinkhorn solve.
  bool warm_start = true;

  void Validate() const;
};

struct FitTrace {
  /// Entry k describes the logits before update k (entry 0 is the init).
  std::vector<double> loss;
  std::vector<double> grad_norm;
  std::vector<Point> bc;   ///< GET_BC of softmax(logits)
  std::vector<Point> max;  ///< GET_MAX of the logits
  Heatmap final_logits;
  Point final_bc;
  Point final_max;
  /// Sinkhorn iterations spent per step (Wasserstein loss only).
  std::vector<int> solver_iterations;
  /// Sinkhorn solves that hit max_iterations (Wasserstein loss only).
  int unconverged_solves = 0;
  /// Loss or gradient became non-finite; the trace stops there.
  bool diverged = false;
};

/// Gradient descent on the logits toward a fixed target. Stops early only
/// when the gradient norm drops below 1e-10.
FitTrace Fit(const FitProblem& problem);

/// Columns: iteration, loss, grad_norm, bc_x, bc_y, max_x, max_y.
void WriteFitCsv(std::ostream& os, const FitTrace& trace);

// Initial logit presets.
Heatmap ZeroInit(const GridShape& shape);
/// Independent N(0, scale^2) logits.
Heatmap RandomInit(const GridShape& shape, std::uint64_t seed, double scale = 1.0);
/// Log of a Gaussian blob of width `sigma` centered at `center`; its softmax
/// is the normalized Gaussian target at that center.
Heatmap BlobInit(const GridShape& shape, const Point& center, double sigma);

/// (1 / |e|) times the derivative of the loss along a rigid translation of
/// the source logits by e (pixels), estimated by central differences of
/// BlobInit centers shifted by +-h * e. Used for the saturation contrast.
double TranslationDerivative(ot::LossKind kind, const Heatmap& target, const Point& source_center, double sigma,
                             const Point& direction, const ot::SinkhornConfig& cfg = {}, double h = 0.5);

}  // namespace hmot::fit
