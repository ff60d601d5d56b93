#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "hmot/error.h"
#include "hmot/fit/fit.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"
#include "hmot/io/heatmap_file.h"
#include "hmot/io/landmark_file.h"
#include "hmot/io/png.h"
#include "hmot/io/report.h"
#include "hmot/ot/exact.h"
#include "hmot/ot/sinkhorn.h"
#include "hmot/ot/softmax.h"
#include "hmot/parallel.h"
#include "hmot/random.h"

namespace hmot::cli {
namespace fs = std::filesystem;
namespace {

const std::string& Require(const std::optional<std::string>& value, const char* what) {
  if (!value) throw InvalidInput(std::string("missing input: ") + what);
  return *value;
}

fs::path OutputPath(const io::RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return fs::path(cfg.output_dir) / name;
}

void WriteText(const fs::path& path, const std::string& text) {
  io::WriteFileBytes(path, text);
}

// Distribution view of a stored heatmap: softmax for logits, renormalized
// float data otherwise.
Heatmap AsDistribution(const Heatmap& hm, bool logits, const std::string& what) {
  if (logits) return ot::Softmax(hm);
  return Renormalized(hm, kFloatNormalizationTolerance, what.c_str());
}

}  // namespace

int GenTargets(const io::RunConfig& cfg, const GenTargetsArgs& args, std::ostream& out, std::ostream& err) {
  const auto file = io::ReadLandmarkFile(Require(cfg.inputs.landmarks, "landmark file (--landmarks)"));
  if (file.images.empty()) throw InvalidInput("landmark file has no images; nothing to generate");
  cfg.target.Validate();
  const GridShape shape = cfg.target.shape();

  std::vector<char> keep(file.images.size(), 1);
  for (std::size_t k = 0; k < file.images.size(); ++k) {
    const auto& rec = file.images[k];
    for (std::size_t j = 0; j < rec.landmarks.size(); ++j) {
      const Point& p = rec.landmarks.points[j];
      const Point c{p.x / cfg.scale, p.y / cfg.scale};
      if (!heatmap::InsideGrid(c, shape)) {
        err << "skipped record '" << rec.id << "': landmark " << j << " maps to (" << c.x << ", " << c.y
            << ") outside the " << ToString(shape) << " heatmap\n";
        keep[k] = 0;
        break;
      }
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k]) kept.push_back(k);
  }
  if (kept.empty()) throw InvalidInput("every record maps outside the heatmap; no output written");

  std::vector<std::vector<Heatmap>> per_record(kept.size());
  ParallelFor(kept.size(), cfg.threads, [&](std::size_t i) {
    const auto& rec = file.images[kept[i]];
    for (const Point& p : rec.landmarks.points) {
      per_record[i].push_back(heatmap::MakeGaussianTarget({p.x / cfg.scale, p.y / cfg.scale}, cfg.target));
    }
  });
  std::size_t warnings = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& rec = file.images[kept[i]];
    for (std::size_t j = 0; j < rec.landmarks.size(); ++j) {
      const Point& p = rec.landmarks.points[j];
      if (auto w = heatmap::BoundaryWarning({p.x / cfg.scale, p.y / cfg.scale}, cfg.target)) {
        err << "warning: record '" << rec.id << "' landmark " << j << ": " << *w << "\n";
        ++warnings;
      }
    }
  }
  std::vector<Heatmap> all;
  for (auto& hms : per_record) {
    for (auto& hm : hms) all.push_back(std::move(hm));
  }
  const fs::path hmf = OutputPath(cfg, args.output);
  io::WriteHeatmapFile(hmf, io::HeatmapStack::FromHeatmaps(all));

  io::LandmarkFile reference = file;
  reference.images.clear();
  for (std::size_t k : kept) reference.images.push_back(file.images[k]);
  fs::path ref_path = hmf;
  ref_path.replace_extension(".landmarks.json");
  io::WriteLandmarkFile(ref_path, reference);

  out << "wrote " << all.size() << " heatmaps (" << kept.size() << " records, " << ToString(shape) << ") to "
      << hmf.string() << "\n";
  if (warnings > 0) out << warnings << " targets lie within 3 sigma of the heatmap edge\n";
  return kept.size() == file.images.size() ? kExitOk : kExitPartial;
}

int Decode(const io::RunConfig& cfg, const DecodeArgs& args, std::ostream& out, std::ostream&) {
  const auto stack = io::ReadHeatmapFile(Require(cfg.inputs.heatmaps, "heatmap file (--heatmaps)"));
  std::optional<io::LandmarkFile> reference;
  if (args.reference) reference = io::ReadLandmarkFile(*args.reference);
  else if (cfg.inputs.landmarks) reference = io::ReadLandmarkFile(*cfg.inputs.landmarks);

  std::vector<std::size_t> counts;
  if (reference) {
    for (const auto& rec : reference->images) counts.push_back(rec.landmarks.size());
  } else {
    const std::size_t m = args.landmarks_per_image ? static_cast<std::size_t>(std::max(*args.landmarks_per_image, 0))
                                                   : stack.count;
    if (m == 0 || stack.count % m != 0) {
      throw InvalidInput("heatmap file holds " + std::to_string(stack.count) + " heatmaps, not a multiple of " +
                         std::to_string(m) + " landmarks per image");
    }
    counts.assign(stack.count / m, m);
  }
  std::size_t expected = 0;
  for (std::size_t c : counts) expected += c;
  if (expected != stack.count) {
    throw InvalidInput("heatmap file holds " + std::to_string(stack.count) + " heatmaps but the records expect " +
                       std::to_string(expected));
  }

  std::vector<Point> points(stack.count);
  ParallelFor(stack.count, cfg.threads, [&](std::size_t k) {
    Heatmap hm = stack.At(k);
    if (cfg.decoder == heatmap::DecodeMethod::kGetBc) {
      hm = AsDistribution(hm, cfg.logits, "heatmap " + std::to_string(k));
    }
    const Point p = heatmap::Decode(hm, cfg.decoder);
    points[k] = {p.x * cfg.scale, p.y * cfg.scale};
  });

  io::LandmarkFile result;
  if (reference) result.format = reference->format;
  std::size_t next = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    io::LandmarkRecord rec;
    rec.id = reference ? reference->images[r].id : "img_" + std::to_string(r);
    if (reference) rec.image = reference->images[r].image;
    rec.landmarks.points.assign(points.begin() + static_cast<std::ptrdiff_t>(next),
                                points.begin() + static_cast<std::ptrdiff_t>(next + counts[r]));
    next += counts[r];
    result.images.push_back(std::move(rec));
  }
  const fs::path path = OutputPath(cfg, args.output);
  io::WriteLandmarkFile(path, result);
  out << "decoded " << stack.count << " heatmaps with " << heatmap::ToString(cfg.decoder) << " into "
      << result.images.size() << " records: " << path.string() << "\n";
  return kExitOk;
}

int Eval(const io::RunConfig& cfg, const EvalArgs& args, std::ostream& out, std::ostream& err) {
  const auto pred = io::ReadLandmarkFile(Require(cfg.inputs.pred, "prediction file (--pred)"));
  const auto gt = io::ReadLandmarkFile(Require(cfg.inputs.gt, "ground-truth file (--gt)"));
  std::map<std::string, std::size_t> pred_index;
  for (std::size_t k = 0; k < pred.images.size(); ++k) pred_index.emplace(pred.images[k].id, k);

  std::optional<metrics::NormalizationRule> override_rule = cfg.normalization;
  if (args.explicit_norm) override_rule = metrics::NormalizationRule{metrics::NormalizationKind::kExplicit, {}, {}, *args.explicit_norm};

  metrics::EvalPairing pairing;
  std::vector<std::string> unmatched;
  std::map<std::string, bool> used;
  for (std::size_t k = 0; k < gt.images.size(); ++k) {
    const auto& rec = gt.images[k];
    auto it = pred_index.find(rec.id);
    if (it == pred_index.end()) {
      unmatched.push_back("ground truth '" + rec.id + "' has no prediction");
      continue;
    }
    used[rec.id] = true;
    const metrics::NormalizationRule* rule = override_rule ? &*override_rule : gt.RuleFor(k);
    if (rule == nullptr) throw InvalidInput("no normalization for image '" + rec.id + "'");
    pairing.push_back({rec.id, pred.images[it->second].landmarks, rec.landmarks, rule->Resolve(rec.landmarks)});
  }
  for (const auto& rec : pred.images) {
    if (!used.count(rec.id)) unmatched.push_back("prediction '" + rec.id + "' has no ground truth");
  }
  if (!unmatched.empty()) {
    for (const auto& u : unmatched) err << "unmatched: " << u << "\n";
    if (!cfg.allow_partial) {
      throw InvalidInput(std::to_string(unmatched.size()) + " unmatched image ids (use --allow-partial to evaluate the rest)");
    }
  }
  if (cfg.inputs.mapping) pairing = metrics::ProjectCommon(pairing, io::ReadMappingFile(*cfg.inputs.mapping));

  const auto report = metrics::Evaluate(pairing, cfg.eval);
  WriteText(OutputPath(cfg, args.report), io::EvalReportJson(report));
  WriteText(OutputPath(cfg, args.ced), io::CedCsv(report));
  if (cfg.svg) WriteText(OutputPath(cfg, args.svg), io::CedSvg(report));

  out << std::setprecision(6) << "images " << report.images << ", landmarks " << report.landmarks << "\n";
  out << "nme " << report.nme << "\n";
  for (std::size_t k = 0; k < report.fr_image.size(); ++k) {
    out << "theta " << report.fr_image[k].threshold << ": FR_image " << report.fr_image[k].value << ", FR_landmark "
        << report.fr_landmark[k].value << "\n";
  }
  for (const auto& a : report.auc) out << "auc@" << a.threshold << " " << a.value << "\n";
  return unmatched.empty() ? kExitOk : kExitPartial;
}

int Perturb(const io::RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path in_dir = Require(cfg.inputs.images, "image directory (--images)");
  if (!fs::is_directory(in_dir)) throw InvalidInput("not a directory: " + in_dir.string());
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") frames.push_back(entry.path());
  }
  std::sort(frames.begin(), frames.end());
  if (frames.empty()) throw InvalidInput("no .png files in " + in_dir.string());
  fs::create_directories(cfg.output_dir);
  if (fs::equivalent(in_dir, cfg.output_dir)) throw InvalidInput("output directory must differ from the input directory");

  const auto& spec = cfg.perturb;
  spec.Validate();
  std::vector<io::ManifestEntry> manifest(frames.size());
  if (spec.kind == perturb::PerturbKind::kOcclusion) {
    ParallelFor(frames.size(), cfg.threads, [&](std::size_t k) {
      perturb::PerturbSpec s = spec;
      s.seed = DeriveSeed(cfg.seed, k);
      const auto result = perturb::Occlude(io::ReadPng(frames[k]), s);
      const fs::path dst = fs::path(cfg.output_dir) / frames[k].filename();
      io::WritePng(dst, result.image);
      manifest[k] = {frames[k].filename().string(), dst.filename().string(), s.seed, result.ellipse,
                     result.occluded_pixels, result.clipped_area, {}};
    });
  } else {
    if (!cfg.inputs.nose_track) throw InvalidInput("motion blur needs a nose track (--nose-track)");
    const auto track_file = io::ReadLandmarkFile(*cfg.inputs.nose_track);
    if (track_file.images.size() != frames.size()) {
      throw InvalidInput("nose track has " + std::to_string(track_file.images.size()) + " records for " +
                         std::to_string(frames.size()) + " frames");
    }
    // Records pair with frames by image name when given, else by order.
    std::map<std::string, std::size_t> by_name;
    for (std::size_t k = 0; k < track_file.images.size(); ++k) {
      if (track_file.images[k].image) by_name.emplace(fs::path(*track_file.images[k].image).filename().string(), k);
    }
    std::vector<Point> track;
    std::vector<perturb::Image> images;
    for (std::size_t k = 0; k < frames.size(); ++k) {
      std::size_t r = k;
      if (!by_name.empty()) {
        auto it = by_name.find(frames[k].filename().string());
        if (it == by_name.end()) throw InvalidInput("no nose-track record for frame " + frames[k].filename().string());
        r = it->second;
      }
      const auto& lm = track_file.images[r].landmarks;
      if (static_cast<std::size_t>(spec.nose_index) >= lm.size()) {
        throw InvalidInput("nose index " + std::to_string(spec.nose_index) + " out of range for record '" +
                           track_file.images[r].id + "'");
      }
      track.push_back(lm.points[static_cast<std::size_t>(spec.nose_index)]);
      images.push_back(io::ReadPng(frames[k]));
    }
    const auto result = perturb::MotionBlurSequence(images, track, spec);
    for (std::size_t k = 0; k < frames.size(); ++k) {
      const fs::path dst = fs::path(cfg.output_dir) / frames[k].filename();
      io::WritePng(dst, result.frames[k]);
      manifest[k].input = frames[k].filename().string();
      manifest[k].output = dst.filename().string();
      manifest[k].kernel = result.kernels[k];
    }
  }
  perturb::PerturbSpec recorded = spec;
  recorded.seed = cfg.seed;
  WriteText(OutputPath(cfg, "manifest.json"), io::PerturbManifestJson(recorded, manifest));
  out << "perturbed " << frames.size() << " images (" << perturb::ToString(spec.kind) << ", "
      << perturb::ToString(spec.protocol) << ") into " << cfg.output_dir << "\n";
  (void)err;
  return kExitOk;
}

int Ot(const io::RunConfig& cfg, const OtArgs& args, std::ostream& out, std::ostream&) {
  const auto a = io::ReadHeatmapFile(Require(cfg.inputs.a, "first heatmap file (--a)"));
  const auto b = io::ReadHeatmapFile(Require(cfg.inputs.b, "second heatmap file (--b)"));
  if (a.shape != b.shape) {
    throw InvalidInput("heatmap shapes differ: " + ToString(a.shape) + " vs " + ToString(b.shape));
  }
  if (a.count != b.count && a.count != 1 && b.count != 1) {
    throw InvalidInput("heatmap counts differ: " + std::to_string(a.count) + " vs " + std::to_string(b.count));
  }
  if (args.exact && a.shape.cells() > ot::kExactMaxCells) {
    throw SizeLimitExceeded("--exact is limited to " + std::to_string(ot::kExactMaxCells) + " cells; grid " +
                            ToString(a.shape) + " has " + std::to_string(a.shape.cells()));
  }
  const std::size_t pairs = std::max(a.count, b.count);
  struct Row {
    ot::LossResult sinkhorn;
    double exact = 0.0;
  };
  std::vector<Row> rows(pairs);
  ot::SinkhornConfig sc = cfg.sinkhorn;
  sc.gradient = ot::GradientMode::kNone;
  ParallelFor(pairs, cfg.threads, [&](std::size_t k) {
    const Heatmap u = AsDistribution(a.At(a.count == 1 ? 0 : k), cfg.logits, "a[" + std::to_string(k) + "]");
    const Heatmap v = AsDistribution(b.At(b.count == 1 ? 0 : k), cfg.logits, "b[" + std::to_string(k) + "]");
    rows[k].sinkhorn = ot::SinkhornW1(u, v, sc);
    if (args.exact) rows[k].exact = ot::ExactW1(u, v).distance;
  });
  std::ostringstream csv;
  csv << std::setprecision(17) << "pair,sinkhorn,iterations,converged" << (args.exact ? ",exact,relative_gap" : "")
      << "\n";
  out << std::setprecision(8);
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto& r = rows[k];
    out << "pair " << k << ": sinkhorn " << r.sinkhorn.value << " (" << r.sinkhorn.iterations_used << " iterations, "
        << (r.sinkhorn.converged ? "converged" : "NOT converged") << ")";
    csv << k << ',' << r.sinkhorn.value << ',' << r.sinkhorn.iterations_used << ',' << r.sinkhorn.converged;
    if (args.exact) {
      const double gap = r.exact > 0.0 ? std::abs(r.sinkhorn.value - r.exact) / r.exact : std::abs(r.sinkhorn.value);
      out << ", exact " << r.exact << ", relative gap " << gap;
      csv << ',' << r.exact << ',' << gap;
    }
    out << "\n";
    csv << "\n";
  }
  if (args.csv) WriteText(OutputPath(cfg, *args.csv), csv.str());
  return kExitOk;
}

int FitDemo(const io::RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto& f = cfg.fit;
  const Point center{(f.width - 1) / 2.0, (f.height - 1) / 2.0};
  out << std::setprecision(6);
  for (ot::LossKind kind : f.losses) {
    const fit::FitProblem p = io::MakeFitDemoProblem(f, kind, cfg.sinkhorn);
    const auto trace = fit::Fit(p);
    const std::string name = "fit_" + std::string(ot::ToString(kind)) + ".csv";
    std::ofstream csv(OutputPath(cfg, name));
    fit::WriteFitCsv(csv, trace);
    const std::size_t k100 = std::min<std::size_t>(100, trace.loss.size() - 1);
    const double decrease = trace.loss.empty() || trace.loss[0] == 0.0
                                ? 0.0
                                : (trace.loss[0] - trace.loss[k100]) / trace.loss[0];
    out << ot::ToString(kind) << ": step " << p.step << ", " << trace.loss.size() << " iterations, loss "
        << (trace.loss.empty() ? 0.0 : trace.loss.front()) << " -> " << (trace.loss.empty() ? 0.0 : trace.loss.back())
        << ", decrease over first " << k100 << " iterations " << 100.0 * decrease << "%, final GET_BC error "
        << std::hypot(trace.final_bc.x - center.x, trace.final_bc.y - center.y) << " px"
        << (trace.diverged ? " (diverged)" : "") << "\n";
  }
  return kExitOk;
}

int SpuriousStudy(const io::RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto study = fit::SpuriousActivationStudy(cfg.spurious_fractions, cfg.spurious);
  std::ofstream csv(OutputPath(cfg, "spurious.csv"));
  fit::WriteSpuriousCsv(csv, study);
  out << std::fixed << std::setprecision(4);
  out << "mass  bc_disp  analytic  max_disp\n";
  for (const auto& r : study.rows) {
    out << r.mass_fraction << "  " << r.bc_displacement << "  " << r.analytic_bc_displacement << "  "
        << r.max_displacement << "\n";
  }
  out << "GET_MAX crossover at mass fraction " << study.crossover << "\n";
  return kExitOk;
}

}  // namespace hmot::cli
