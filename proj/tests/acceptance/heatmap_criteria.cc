#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "criteria.h"
#include "hmot/fit/fit.h"
#include "hmot/fit/spurious.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"
#include "hmot/io/run_config.h"
#include "hmot/ot/softmax.h"
#include "support/oracles.h"

namespace hmot::acceptance {
namespace {

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double Distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Peak cell value of a normalized Gaussian sampled on an unbounded grid,
// centered on a cell.
double NormalizedPeak(double sigma) {
  double s = 0.0;
  for (int dy = -60; dy <= 60; ++dy) {
    for (int dx = -60; dx <= 60; ++dx) s += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
  }
  return 1.0 / s;
}

}  // namespace

Outcome DecoderRoundTrips() {
  constexpr int kSize = 64;
  std::mt19937_64 gen(1234);
  double worst_bc[3] = {0, 0, 0}, worst_max[3] = {0, 0, 0}, worst_target = 0.0;
  const double sigmas[] = {1.0, 1.5, 3.0};
  for (int s = 0; s < 3; ++s) {
    const double sigma = sigmas[s];
    std::uniform_real_distribution<double> interior(3.0 * sigma, kSize - 1 - 3.0 * sigma);
    std::uniform_int_distribution<int> cell(1, kSize - 2);
    for (int k = 0; k < 50; ++k) {
      const Point c{interior(gen), interior(gen)};
      const Heatmap hm = ot::Softmax(fit::BlobInit({kSize, kSize}, c, sigma));
      const Heatmap oracle = testing::NormalizedGaussian(kSize, kSize, c.x, c.y, sigma);
      for (std::size_t i = 0; i < hm.size(); ++i) worst_target = std::max(worst_target, std::abs(hm[i] - oracle[i]));
      worst_bc[s] = std::max(worst_bc[s], Distance(heatmap::DecodeGetBc(hm), c));

      const Point ci{static_cast<double>(cell(gen)), static_cast<double>(cell(gen))};
      const Heatmap peak = heatmap::MakeGaussianTarget(ci, {sigma, kSize, kSize, heatmap::AmplitudeMode::kPeakOne});
      worst_max[s] = std::max(worst_max[s], Distance(heatmap::DecodeGetMax(peak).point, ci));
    }
  }
  Outcome o;
  o.pass = *std::max_element(worst_bc, worst_bc + 3) <= 0.1 && *std::max_element(worst_max, worst_max + 3) <= 0.25 &&
           worst_target <= 1e-12;
  o.detail = Format(
      "worst GET_BC error sigma 1 / 1.5 / 3: %.2e / %.2e / %.2e px (limit 0.1); worst GET_MAX error %.2e / %.2e / "
      "%.2e px (limit 0.25); softmax targets vs oracle %.1e",
      worst_bc[0], worst_bc[1], worst_bc[2], worst_max[0], worst_max[1], worst_max[2], worst_target);
  return o;
}

Outcome SpuriousMechanism() {
  const fit::SpuriousStudyConfig cfg;
  const double offset = std::hypot(cfg.blob_offset.x, cfg.blob_offset.y);
  const double peak_t = NormalizedPeak(cfg.target_sigma), peak_b = NormalizedPeak(cfg.blob_sigma);
  // (1 - m) peak_t = m peak_b.
  const double dominance = peak_t / (peak_t + peak_b);

  std::vector<double> fractions;
  for (int k = 0; k < 10; ++k) fractions.push_back(0.05 * k);
  const auto study = fit::SpuriousActivationStudy(fractions, cfg);
  double worst_bc = 0.0;
  for (const auto& row : study.rows) {
    const Heatmap hm = fit::SpuriousHeatmap(cfg, row.mass_fraction);
    const Point bc = testing::BarycenterOracle(hm);
    const double measured = Distance(bc, cfg.target_center);
    worst_bc = std::max(worst_bc, std::abs(measured - row.mass_fraction * offset));
    worst_bc = std::max(worst_bc, std::abs(row.bc_displacement - row.mass_fraction * offset));
  }
  const auto jump = fit::SpuriousActivationStudy({dominance - 0.005, dominance + 0.005}, cfg);
  const double before = jump.rows[0].max_displacement, after = jump.rows[1].max_displacement;
  Outcome o;
  o.pass = worst_bc <= 0.05 && std::abs(study.crossover - dominance) <= 1e-6 && before <= 0.25 &&
           std::abs(after - offset) <= 0.25;
  o.detail = Format(
      "worst |GET_BC displacement - m * %.0f px| = %.2e px (limit 0.05) over m = 0..0.45; crossover %.6f vs "
      "dominance point %.6f; GET_MAX displacement %.3f px just below, %.3f px just above",
      offset, worst_bc, study.crossover, dominance, before, after);
  return o;
}

Outcome FitHarness() {
  const double t0 = Now();
  const io::RunConfig cfg;
  const Point center{(cfg.fit.width - 1) / 2.0, (cfg.fit.height - 1) / 2.0};
  auto decrease = [](const fit::FitTrace& t) {
    const std::size_t k = std::min<std::size_t>(100, t.loss.size() - 1);
    return (t.loss[0] - t.loss[k]) / t.loss[0];
  };
  const auto w = fit::Fit(io::MakeFitDemoProblem(cfg.fit, ot::LossKind::kWasserstein, cfg.sinkhorn));
  const auto l2 = fit::Fit(io::MakeFitDemoProblem(cfg.fit, ot::LossKind::kL2Softmax, cfg.sinkhorn));
  const double error = Distance(testing::BarycenterOracle(testing::SoftmaxOracle(w.final_logits)), center);
  const double elapsed = Now() - t0;
  Outcome o;
  o.pass = error <= 0.5 && decrease(l2) <= 0.01 && decrease(w) >= 0.2 && w.loss.size() <= 2000 && elapsed < 300.0 &&
           !w.diverged;
  o.detail = Format(
      "wasserstein: %zu steps of %g, final GET_BC error %.3f px (limit 0.5), first-100 decrease %.1f%% (needs >= "
      "20%%), unconverged solves %d; l2: first-100 decrease %.3f%% (limit 1%%); %.1fs",
      w.loss.size(), cfg.fit.StepFor(ot::LossKind::kWasserstein), error, 100 * decrease(w), w.unconverged_solves,
      100 * decrease(l2), elapsed);
  return o;
}

}  // namespace hmot::acceptance
