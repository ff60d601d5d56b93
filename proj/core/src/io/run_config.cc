#include "hmot/io/run_config.h"

#include <algorithm>

#include "hmot/fit/fit.h"
#include "hmot/heatmap/target.h"
#include "hmot/io/heatmap_file.h"
#include "json_util.h"

namespace hmot::io {
namespace {

using detail::GetBool;
using detail::GetInt;
using detail::GetNumber;
using detail::GetString;
using detail::Json;
using detail::RequireKeys;

// Runs a parser for enum-like strings, turning InvalidInput into FormatError
// tagged with the key path.
template <typename F>
auto Named(const Json& j, const std::string& path, F parse) {
  const std::string s = GetString(j, path);
  try {
    return parse(s);
  } catch (const InvalidInput& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<double> GetNumbers(const Json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(GetNumber(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Point GetPoint(const Json& j, const std::string& path) {
  const auto xs = GetNumbers(j, path);
  if (xs.size() != 2) throw FormatError(path + ": expected [x, y]");
  return {xs[0], xs[1]};
}

void ParseInputs(const Json& j, RunInputs& in) {
  RequireKeys(j, "inputs", {"landmarks", "heatmaps", "pred", "gt", "images", "nose_track", "a", "b", "mapping"});
  auto opt = [&](const char* key, std::optional<std::string>& out) {
    if (j.contains(key)) out = GetString(j[key], detail::Join("inputs", key));
  };
  opt("landmarks", in.landmarks);
  opt("heatmaps", in.heatmaps);
  opt("pred", in.pred);
  opt("gt", in.gt);
  opt("images", in.images);
  opt("nose_track", in.nose_track);
  opt("a", in.a);
  opt("b", in.b);
  opt("mapping", in.mapping);
}

void ParseTarget(const Json& j, heatmap::TargetSpec& t) {
  RequireKeys(j, "target", {"sigma", "height", "width", "amplitude"});
  if (j.contains("sigma")) t.sigma = GetNumber(j["sigma"], "target.sigma");
  if (j.contains("height")) t.height = GetInt(j["height"], "target.height");
  if (j.contains("width")) t.width = GetInt(j["width"], "target.width");
  if (j.contains("amplitude")) t.mode = Named(j["amplitude"], "target.amplitude", heatmap::ParseAmplitudeMode);
}

void ParseSinkhorn(const Json& j, ot::SinkhornConfig& s) {
  RequireKeys(j, "sinkhorn", {"epsilon", "max_iterations", "marginal_tolerance", "log_domain", "epsilon_scaling",
                              "relaxation", "gradient"});
  if (j.contains("epsilon")) s.epsilon = GetNumber(j["epsilon"], "sinkhorn.epsilon");
  if (j.contains("max_iterations")) s.max_iterations = GetInt(j["max_iterations"], "sinkhorn.max_iterations");
  if (j.contains("marginal_tolerance")) {
    s.marginal_tolerance = GetNumber(j["marginal_tolerance"], "sinkhorn.marginal_tolerance");
  }
  if (j.contains("log_domain") && !GetBool(j["log_domain"], "sinkhorn.log_domain")) {
    throw FormatError("sinkhorn.log_domain: only the log-domain solver is available");
  }
  if (j.contains("epsilon_scaling")) s.epsilon_scaling = GetBool(j["epsilon_scaling"], "sinkhorn.epsilon_scaling");
  if (j.contains("relaxation")) s.relaxation = GetNumber(j["relaxation"], "sinkhorn.relaxation");
  if (j.contains("gradient")) s.gradient = Named(j["gradient"], "sinkhorn.gradient", ParseGradientMode);
}

void ParseEval(const Json& j, RunConfig& cfg) {
  RequireKeys(j, "eval", {"thresholds", "ced_grid", "auc_ceilings", "ced_mode", "normalization", "allow_partial", "svg"});
  if (j.contains("thresholds")) cfg.eval.thresholds = GetNumbers(j["thresholds"], "eval.thresholds");
  if (j.contains("ced_grid")) {
    const Json& g = j["ced_grid"];
    if (g.is_object()) {
      RequireKeys(g, "eval.ced_grid", {"max", "step"});
      if (!g.contains("max") || !g.contains("step")) throw FormatError("eval.ced_grid: needs both 'max' and 'step'");
      cfg.eval.ced_grid = metrics::UniformGrid(GetNumber(g["max"], "eval.ced_grid.max"), GetNumber(g["step"], "eval.ced_grid.step"));
    } else {
      cfg.eval.ced_grid = GetNumbers(g, "eval.ced_grid");
    }
  }
  if (j.contains("auc_ceilings")) cfg.eval.auc_ceilings = GetNumbers(j["auc_ceilings"], "eval.auc_ceilings");
  if (j.contains("ced_mode")) {
    cfg.eval.ced_mode = Named(j["ced_mode"], "eval.ced_mode", [](const std::string& s) {
      if (s == "landmark") return metrics::CedMode::kLandmarkWise;
      if (s == "image") return metrics::CedMode::kImageWise;
      throw InvalidInput("expected \"landmark\" or \"image\"");
    });
  }
  if (j.contains("normalization") && !j["normalization"].is_null()) {
    cfg.normalization = detail::ParseNormalization(j["normalization"], "eval.normalization");
  }
  if (j.contains("allow_partial")) cfg.allow_partial = GetBool(j["allow_partial"], "eval.allow_partial");
  if (j.contains("svg")) cfg.svg = GetBool(j["svg"], "eval.svg");
}

void ParsePerturb(const Json& j, perturb::PerturbSpec& p) {
  RequireKeys(j, "perturb", {"kind", "protocol", "min_axis", "max_axis", "multiplier", "cap", "nose_index"});
  auto kind = p.kind;
  auto protocol = p.protocol;
  if (j.contains("kind")) kind = Named(j["kind"], "perturb.kind", perturb::ParsePerturbKind);
  if (j.contains("protocol")) protocol = Named(j["protocol"], "perturb.protocol", perturb::ParseProtocol);
  const int nose = p.nose_index;
  p = perturb::PerturbSpec::Defaults(kind, protocol, p.seed);
  p.nose_index = nose;
  if (j.contains("min_axis")) p.occlusion.min_axis = GetNumber(j["min_axis"], "perturb.min_axis");
  if (j.contains("max_axis")) p.occlusion.max_axis = GetNumber(j["max_axis"], "perturb.max_axis");
  if (j.contains("multiplier")) p.blur.multiplier = GetNumber(j["multiplier"], "perturb.multiplier");
  if (j.contains("cap")) p.blur.cap = GetInt(j["cap"], "perturb.cap");
  if (j.contains("nose_index")) p.nose_index = GetInt(j["nose_index"], "perturb.nose_index");
}

void ParseFit(const Json& j, FitDemoConfig& f) {
  RequireKeys(j, "fit", {"losses", "height", "width", "sigma", "offset", "init_sigma", "iterations", "gradient", "steps"});
  if (j.contains("losses")) {
    if (!j["losses"].is_array() || j["losses"].empty()) throw FormatError("fit.losses: expected a non-empty array");
    f.losses.clear();
    for (std::size_t k = 0; k < j["losses"].size(); ++k) {
      f.losses.push_back(Named(j["losses"][k], "fit.losses[" + std::to_string(k) + "]",
                               [](const std::string& s) { return ot::ParseLossKind(s); }));
    }
  }
  if (j.contains("height")) f.height = GetInt(j["height"], "fit.height");
  if (j.contains("width")) f.width = GetInt(j["width"], "fit.width");
  if (j.contains("sigma")) f.sigma = GetNumber(j["sigma"], "fit.sigma");
  if (j.contains("offset")) f.offset = GetNumber(j["offset"], "fit.offset");
  if (j.contains("init_sigma")) f.init_sigma = GetNumber(j["init_sigma"], "fit.init_sigma");
  if (j.contains("iterations")) f.iterations = GetInt(j["iterations"], "fit.iterations");
  if (j.contains("gradient")) f.gradient = Named(j["gradient"], "fit.gradient", ParseGradientMode);
  if (j.contains("steps")) {
    detail::RequireObject(j["steps"], "fit.steps");
    for (const auto& item : j["steps"].items()) {
      const std::string path = "fit.steps." + item.key();
      ot::LossKind kind;
      try {
        kind = ot::ParseLossKind(item.key());
      } catch (const InvalidInput&) {
        throw FormatError("unknown key '" + path + "'");
      }
      const double step = GetNumber(item.value(), path);
      if (!(step > 0.0)) throw FormatError(path + ": must be positive");
      const auto it = std::find_if(f.steps.begin(), f.steps.end(), [&](const auto& e) { return e.first == kind; });
      if (it != f.steps.end()) it->second = step;
      else f.steps.emplace_back(kind, step);
    }
  }
}

void ParseSpurious(const Json& j, RunConfig& cfg) {
  RequireKeys(j, "spurious",
              {"fractions", "height", "width", "target_center", "target_sigma", "blob_offset", "blob_sigma"});
  auto& s = cfg.spurious;
  if (j.contains("fractions")) cfg.spurious_fractions = GetNumbers(j["fractions"], "spurious.fractions");
  if (j.contains("height")) s.height = GetInt(j["height"], "spurious.height");
  if (j.contains("width")) s.width = GetInt(j["width"], "spurious.width");
  if (j.contains("target_center")) s.target_center = GetPoint(j["target_center"], "spurious.target_center");
  if (j.contains("target_sigma")) s.target_sigma = GetNumber(j["target_sigma"], "spurious.target_sigma");
  if (j.contains("blob_offset")) s.blob_offset = GetPoint(j["blob_offset"], "spurious.blob_offset");
  if (j.contains("blob_sigma")) s.blob_sigma = GetNumber(j["blob_sigma"], "spurious.blob_sigma");
}

}  // namespace

double FitDemoConfig::StepFor(ot::LossKind kind) const {
  for (const auto& [k, step] : steps) {
    if (k == kind) return step;
  }
  return fit::DefaultStep(kind);
}

fit::FitProblem MakeFitDemoProblem(const FitDemoConfig& config, ot::LossKind kind, const ot::SinkhornConfig& sinkhorn) {
  const GridShape shape{config.height, config.width};
  const Point center{(config.width - 1) / 2.0, (config.height - 1) / 2.0};
  const auto mode = kind == ot::LossKind::kL2Raw ? heatmap::AmplitudeMode::kPeakOne : heatmap::AmplitudeMode::kNormalized;
  fit::FitProblem p;
  p.target = heatmap::MakeGaussianTarget(center, {config.sigma, config.height, config.width, mode});
  p.loss = kind;
  p.init_logits = fit::BlobInit(shape, {center.x - config.offset, center.y}, config.init_sigma);
  p.step = config.StepFor(kind);
  p.iterations = config.iterations;
  p.sinkhorn = sinkhorn;
  p.sinkhorn.gradient = config.gradient;
  return p;
}

std::string_view ToString(ot::GradientMode mode) {
  switch (mode) {
    case ot::GradientMode::kNone:
      return "none";
    case ot::GradientMode::kImplicit:
      return "implicit";
    case ot::GradientMode::kDualPotential:
      return "dual";
  }
  return "unknown";
}

ot::GradientMode ParseGradientMode(std::string_view name) {
  if (name == "none") return ot::GradientMode::kNone;
  if (name == "implicit") return ot::GradientMode::kImplicit;
  if (name == "dual") return ot::GradientMode::kDualPotential;
  throw InvalidInput("unknown gradient mode '" + std::string(name) + "' (expected none, implicit or dual)");
}

RunConfig ParseRunConfig(std::string_view text, std::string_view source) {
  const Json doc = detail::ParseJson(text, source);
  RunConfig cfg;
  try {
    RequireKeys(doc, "", {"operation", "seed", "threads", "output_dir", "inputs", "target", "scale", "decoder",
                          "logits", "sinkhorn", "eval", "perturb", "fit", "spurious"});
    if (doc.contains("operation")) cfg.operation = GetString(doc["operation"], "operation");
    if (doc.contains("seed")) cfg.seed = detail::GetU64(doc["seed"], "seed");
    if (doc.contains("threads")) cfg.threads = GetInt(doc["threads"], "threads");
    if (doc.contains("output_dir")) cfg.output_dir = GetString(doc["output_dir"], "output_dir");
    if (doc.contains("inputs")) ParseInputs(doc["inputs"], cfg.inputs);
    if (doc.contains("target")) ParseTarget(doc["target"], cfg.target);
    if (doc.contains("scale")) cfg.scale = GetNumber(doc["scale"], "scale");
    if (doc.contains("decoder")) cfg.decoder = Named(doc["decoder"], "decoder", heatmap::ParseDecodeMethod);
    if (doc.contains("logits")) cfg.logits = GetBool(doc["logits"], "logits");
    if (doc.contains("sinkhorn")) ParseSinkhorn(doc["sinkhorn"], cfg.sinkhorn);
    if (doc.contains("eval")) ParseEval(doc["eval"], cfg);
    if (doc.contains("perturb")) ParsePerturb(doc["perturb"], cfg.perturb);
    if (doc.contains("fit")) ParseFit(doc["fit"], cfg.fit);
    if (doc.contains("spurious")) ParseSpurious(doc["spurious"], cfg);
    cfg.perturb.seed = cfg.seed;
    if (cfg.threads < 1) throw FormatError("threads: must be at least 1");
    if (!(cfg.scale > 0.0)) throw FormatError("scale: must be positive");
    cfg.target.Validate();
    cfg.sinkhorn.Validate();
    cfg.perturb.Validate();
    cfg.eval.Resolved();
  } catch (const FormatError& e) {
    throw FormatError(std::string(source) + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

RunConfig ReadRunConfig(const std::filesystem::path& path) {
  return ParseRunConfig(ReadFileBytes(path), path.string());
}

}  // namespace hmot::io
