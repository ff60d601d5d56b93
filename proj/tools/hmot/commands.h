#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hmot/io/run_config.h"

namespace hmot::cli {

/// Process exit statuses.
enum Exit : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitPartial = 2,
};

struct GenTargetsArgs {
  std::string output = "targets.hmf";
};

struct DecodeArgs {
  /// Landmark file whose ids and counts describe the heatmap records.
  std::optional<std::string> reference;
  std::optional<int> landmarks_per_image;
  std::string output = "decoded.json";
};

struct EvalArgs {
  std::optional<double> explicit_norm;
  std::string report = "report.json";
  std::string ced = "ced.csv";
  std::string svg = "ced.svg";
};

struct OtArgs {
  bool exact = false;
  std::optional<std::string> csv;
};

/// Commands log diagnostics to `err` and results to `out`; files go under
/// cfg.output_dir.
int GenTargets(const io::RunConfig& cfg, const GenTargetsArgs& args, std::ostream& out, std::ostream& err);
int Decode(const io::RunConfig& cfg, const DecodeArgs& args, std::ostream& out, std::ostream& err);
int Eval(const io::RunConfig& cfg, const EvalArgs& args, std::ostream& out, std::ostream& err);
int Perturb(const io::RunConfig& cfg, std::ostream& out, std::ostream& err);
int Ot(const io::RunConfig& cfg, const OtArgs& args, std::ostream& out, std::ostream& err);
int FitDemo(const io::RunConfig& cfg, std::ostream& out, std::ostream& err);
int SpuriousStudy(const io::RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace hmot::cli
