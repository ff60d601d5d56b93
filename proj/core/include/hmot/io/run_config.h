#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmot/fit/fit.h"
#include "hmot/fit/spurious.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"
#include "hmot/metrics/metrics.h"
#include "hmot/ot/losses.h"
#include "hmot/ot/sinkhorn.h"
#include "hmot/perturb/perturb.h"

namespace hmot::io {

/// Settings of the fit-demo command: each loss in `losses` is fitted from a
/// blob init `offset` pixels to the left of a centered target.
struct FitDemoConfig {
  std::vector<ot::LossKind> losses{ot::LossKind::kWasserstein, ot::LossKind::kL2Softmax};
  int height = 64;
  int width = 64;
  double sigma = 3.0;
  double offset = 20.0;
  /// Width of the init blob, pixels.
  double init_sigma = 10.0;
  int iterations = 600;
  /// Sinkhorn gradient used by the Wasserstein fit; the other solver settings
  /// come from the run's sinkhorn section.
  ot::GradientMode gradient = ot::GradientMode::kDualPotential;
  /// Step per loss; losses not listed use fit::DefaultStep.
  std::vector<std::pair<ot::LossKind, double>> steps{{ot::LossKind::kWasserstein, 300.0}};

  double StepFor(ot::LossKind kind) const;
};

/// Fit problem for one loss of the demo: Gaussian target of width `sigma` at
/// the grid center (peak-one for kL2Raw, normalized otherwise), BlobInit
/// logits `offset` pixels left of it.
fit::FitProblem MakeFitDemoProblem(const FitDemoConfig& config, ot::LossKind kind, const ot::SinkhornConfig& sinkhorn);

/// Input paths a command may read. Command-line arguments take precedence.
struct RunInputs {
  std::optional<std::string> landmarks;
  std::optional<std::string> heatmaps;
  std::optional<std::string> pred;
  std::optional<std::string> gt;
  std::optional<std::string> images;
  std::optional<std::string> nose_track;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> mapping;
};

/// Declarative run description. Every field has the default shown; a JSON
/// document only needs the keys it changes, and unknown keys are errors.
///
///   {
///     "operation": "eval",                      // optional, checked against the command
///     "seed": 0, "threads": 1, "output_dir": ".",
///     "inputs": {"landmarks": ..., "heatmaps": ..., "pred": ..., "gt": ...,
///                "images": ..., "nose_track": ..., "a": ..., "b": ..., "mapping": ...},
///     "target": {"sigma": 1.0, "height": 64, "width": 64, "amplitude": "normalized"},
///     "scale": 4.0,
///     "decoder": "get-bc", "logits": false,
///     "sinkhorn": {"epsilon": 0.01, "max_iterations": 10000, "marginal_tolerance": 1e-6,
///                  "log_domain": true, "epsilon_scaling": true, "relaxation": 1.8,
///                  "gradient": "implicit"},
///     "eval": {"thresholds": [0.08, 0.1], "ced_grid": [0, 0.001, ..., 0.1],  // or {"max": 0.1, "step": 0.001}
///              "auc_ceilings": [0.1], "ced_mode": "landmark",
///              "normalization": null, "allow_partial": false, "svg": false},
///     "perturb": {"kind": "occlusion", "protocol": "medium", "min_axis": 0.08,
///                 "max_axis": 0.15, "multiplier": 0.5, "cap": 15, "nose_index": 33},
///     "fit": {"losses": ["wasserstein", "l2"], "height": 64, "width": 64, "sigma": 3.0,
///             "offset": 20.0, "init_sigma": 10.0, "iterations": 600, "gradient": "dual", "steps": {"wasserstein": 300.0}},
///     "spurious": {"fractions": [0, 0.05, ..., 0.45], "height": 64, "width": 64,
///                  "target_center": [17, 32], "target_sigma": 2.0,
///                  "blob_offset": [30, 0], "blob_sigma": 1.0}
///   }
///
/// Perturb protocol defaults follow perturb::PerturbSpec::Defaults; explicit
/// axis/multiplier/cap keys override them.
struct RunConfig {
  std::optional<std::string> operation;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir = ".";
  RunInputs inputs;
  heatmap::TargetSpec target;
  double scale = 4.0;
  heatmap::DecodeMethod decoder = heatmap::DecodeMethod::kGetBc;
  bool logits = false;
  ot::SinkhornConfig sinkhorn;
  metrics::EvalOptions eval;
  std::optional<metrics::NormalizationRule> normalization;
  bool allow_partial = false;
  bool svg = false;
  perturb::PerturbSpec perturb = perturb::PerturbSpec::Defaults(perturb::PerturbKind::kOcclusion,
                                                                perturb::Protocol::kMedium);
  FitDemoConfig fit;
  std::vector<double> spurious_fractions{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
  fit::SpuriousStudyConfig spurious;
};

/// Throws FormatError naming the offending key.
RunConfig ParseRunConfig(std::string_view text, std::string_view source = "config");
RunConfig ReadRunConfig(const std::filesystem::path& path);

std::string_view ToString(ot::GradientMode mode);
ot::GradientMode ParseGradientMode(std::string_view name);

}  // namespace hmot::io
