#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "commands.h"
#include "hmot/error.h"

namespace {

using hmot::io::RunConfig;

// Options whose values override the config file when given on the command line.
struct Overrides {
  std::string config;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;
  RunConfig flags;
  std::string amplitude, decoder, kind, protocol, normalization, ced_mode;
  std::vector<std::string> losses;
  std::vector<double> thresholds;
  double ced_max = 0.1;
  double ced_step = 0.001;
};

bool Given(const CLI::App& app, const std::string& name) {
  const CLI::Option* opt = app.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heatmap losses, decoders and landmark metrics"};
  app.require_subcommand(1);
  Overrides o;
  auto& f = o.flags;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", o.output_dir, "Directory for output files");

  hmot::cli::GenTargetsArgs gen_args;
  auto* gen = app.add_subcommand("gen-targets", "Render Gaussian target heatmaps from a landmark file");
  gen->add_option("--landmarks", f.inputs.landmarks, "Landmark JSON file");
  gen->add_option("--sigma", f.target.sigma, "Gaussian sigma in heatmap pixels");
  gen->add_option("--height", f.target.height, "Heatmap height");
  gen->add_option("--width", f.target.width, "Heatmap width");
  gen->add_option("--scale", f.scale, "Image pixels per heatmap pixel");
  gen->add_option("--amplitude", o.amplitude, "peak-one or normalized");
  gen->add_option("-o,--output", gen_args.output, "Output HMF1 file name");

  hmot::cli::DecodeArgs dec_args;
  auto* dec = app.add_subcommand("decode", "Decode heatmaps into landmark coordinates");
  dec->add_option("--heatmaps", f.inputs.heatmaps, "HMF1 heatmap file");
  dec->add_option("--reference", dec_args.reference, "Landmark file giving record ids and counts");
  dec->add_option("--landmarks-per-image", dec_args.landmarks_per_image, "Heatmaps per record");
  dec->add_option("--decoder", o.decoder, "get-bc or get-max");
  dec->add_flag("--logits", f.logits, "Inputs are logits; softmax before GET_BC");
  dec->add_option("--scale", f.scale, "Image pixels per heatmap pixel");
  dec->add_option("-o,--output", dec_args.output, "Output landmark file name");

  hmot::cli::EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "NME, failure rates, CED and AUC");
  ev->add_option("--pred", f.inputs.pred, "Predicted landmark file");
  ev->add_option("--gt", f.inputs.gt, "Ground-truth landmark file");
  ev->add_option("--mapping", f.inputs.mapping, "Landmark index mapping file");
  ev->add_option("--normalization", o.normalization, "inter-ocular (68-point eye contours)");
  ev->add_option("--norm-value", eval_args.explicit_norm, "Explicit normalization distance")
      ->check(CLI::PositiveNumber);
  ev->add_option("--threshold", o.thresholds, "Failure thresholds");
  ev->add_option("--ced-mode", o.ced_mode, "landmark or image");
  ev->add_option("--ced-max", o.ced_max, "Largest CED threshold")->check(CLI::PositiveNumber);
  ev->add_option("--ced-step", o.ced_step, "CED grid spacing")->check(CLI::PositiveNumber);
  ev->add_flag("--allow-partial", f.allow_partial, "Evaluate matched ids when some are unmatched");
  ev->add_flag("--svg", f.svg, "Also write a CED plot");
  ev->add_option("--report", eval_args.report, "Report file name");
  ev->add_option("--ced", eval_args.ced, "CED CSV file name");

  auto* per = app.add_subcommand("perturb", "Seeded occlusion or motion blur over a PNG directory");
  per->add_option("--images", f.inputs.images, "Directory of PNG frames");
  per->add_option("--kind", o.kind, "occlusion or motion-blur");
  per->add_option("--protocol", o.protocol, "large or medium");
  per->add_option("--nose-track", f.inputs.nose_track, "Landmark file with the nose track");
  per->add_option("--nose-index", f.perturb.nose_index, "Zero-based nose landmark index");

  hmot::cli::OtArgs ot_args;
  auto* ot = app.add_subcommand("ot", "Sinkhorn W1 between heatmap files");
  ot->add_option("--a", f.inputs.a, "First HMF1 file");
  ot->add_option("--b", f.inputs.b, "Second HMF1 file");
  ot->add_option("--epsilon", f.sinkhorn.epsilon, "Entropic regularization");
  ot->add_flag("--exact", ot_args.exact, "Also solve the exact LP");
  ot->add_flag("--logits", f.logits, "Inputs are logits");
  ot->add_option("--csv", ot_args.csv, "CSV output file name");

  auto* fit = app.add_subcommand("fit-demo", "Fit logit fields under several losses");
  fit->add_option("--loss", o.losses, "Losses to fit");
  fit->add_option("--iterations", f.fit.iterations, "Gradient steps per loss")->check(CLI::PositiveNumber);

  auto* spur = app.add_subcommand("spurious-study", "Decoder displacement under a spurious activation");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = o.config.empty() ? RunConfig{} : hmot::io::ReadRunConfig(o.config);
    CLI::App* sub = app.get_subcommands().front();
    if (cfg.operation && *cfg.operation != sub->get_name()) {
      throw hmot::InvalidInput("config operation '" + *cfg.operation + "' does not match command '" +
                               sub->get_name() + "'");
    }
    if (Given(app, "--seed")) cfg.seed = o.seed;
    if (Given(app, "--threads")) cfg.threads = o.threads;
    if (Given(app, "--output-dir")) cfg.output_dir = o.output_dir;
    auto take = [&](const char* name, auto& dst, const auto& src) {
      if (Given(*sub, name)) dst = src;
    };
    take("--landmarks", cfg.inputs.landmarks, f.inputs.landmarks);
    take("--heatmaps", cfg.inputs.heatmaps, f.inputs.heatmaps);
    take("--pred", cfg.inputs.pred, f.inputs.pred);
    take("--gt", cfg.inputs.gt, f.inputs.gt);
    take("--mapping", cfg.inputs.mapping, f.inputs.mapping);
    take("--images", cfg.inputs.images, f.inputs.images);
    take("--nose-track", cfg.inputs.nose_track, f.inputs.nose_track);
    take("--a", cfg.inputs.a, f.inputs.a);
    take("--b", cfg.inputs.b, f.inputs.b);
    take("--sigma", cfg.target.sigma, f.target.sigma);
    take("--height", cfg.target.height, f.target.height);
    take("--width", cfg.target.width, f.target.width);
    take("--scale", cfg.scale, f.scale);
    take("--logits", cfg.logits, f.logits);
    take("--allow-partial", cfg.allow_partial, f.allow_partial);
    take("--svg", cfg.svg, f.svg);
    take("--epsilon", cfg.sinkhorn.epsilon, f.sinkhorn.epsilon);
    take("--iterations", cfg.fit.iterations, f.fit.iterations);
    if (Given(*sub, "--amplitude")) cfg.target.mode = hmot::heatmap::ParseAmplitudeMode(o.amplitude);
    if (Given(*sub, "--decoder")) cfg.decoder = hmot::heatmap::ParseDecodeMethod(o.decoder);
    if (Given(*sub, "--normalization")) {
      const auto kind = hmot::metrics::ParseNormalizationKind(o.normalization);
      if (kind != hmot::metrics::NormalizationKind::kInterOcular) {
        throw hmot::InvalidInput("--normalization only selects inter-ocular; use --norm-value for an explicit distance "
                                 "and the landmark file for bbox widths");
      }
      // 68-point layout: outer eye contours 36-41 and 42-47.
      cfg.normalization = hmot::metrics::NormalizationRule{kind, {36, 37, 38, 39, 40, 41}, {42, 43, 44, 45, 46, 47}};
    }
    if (Given(*sub, "--threshold")) cfg.eval.thresholds = o.thresholds;
    if (Given(*sub, "--ced-max") || Given(*sub, "--ced-step")) {
      cfg.eval.ced_grid = hmot::metrics::UniformGrid(o.ced_max, o.ced_step);
    }
    if (Given(*sub, "--ced-mode")) {
      if (o.ced_mode == "landmark") cfg.eval.ced_mode = hmot::metrics::CedMode::kLandmarkWise;
      else if (o.ced_mode == "image") cfg.eval.ced_mode = hmot::metrics::CedMode::kImageWise;
      else throw hmot::InvalidInput("unknown CED mode '" + o.ced_mode + "' (expected landmark or image)");
    }
    if (Given(*sub, "--kind") || Given(*sub, "--protocol")) {
      const auto kind = Given(*sub, "--kind") ? hmot::perturb::ParsePerturbKind(o.kind) : cfg.perturb.kind;
      const auto protocol = Given(*sub, "--protocol") ? hmot::perturb::ParseProtocol(o.protocol) : cfg.perturb.protocol;
      const int nose = cfg.perturb.nose_index;
      cfg.perturb = hmot::perturb::PerturbSpec::Defaults(kind, protocol);
      cfg.perturb.nose_index = nose;
    }
    take("--nose-index", cfg.perturb.nose_index, f.perturb.nose_index);
    if (Given(*sub, "--loss")) {
      cfg.fit.losses.clear();
      for (const auto& name : o.losses) cfg.fit.losses.push_back(hmot::ot::ParseLossKind(name));
    }
    if (cfg.threads < 1) throw hmot::InvalidInput("threads must be at least 1");

    if (sub == gen) return hmot::cli::GenTargets(cfg, gen_args, std::cout, std::cerr);
    if (sub == dec) return hmot::cli::Decode(cfg, dec_args, std::cout, std::cerr);
    if (sub == ev) return hmot::cli::Eval(cfg, eval_args, std::cout, std::cerr);
    if (sub == per) return hmot::cli::Perturb(cfg, std::cout, std::cerr);
    if (sub == ot) return hmot::cli::Ot(cfg, ot_args, std::cout, std::cerr);
    if (sub == fit) return hmot::cli::FitDemo(cfg, std::cout, std::cerr);
    if (sub == spur) return hmot::cli::SpuriousStudy(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hmot::cli::kExitInvalid;
  }
  return hmot::cli::kExitInvalid;
}
