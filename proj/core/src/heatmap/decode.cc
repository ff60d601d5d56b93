#include "hmot/heatmap/decode.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmot/error.h"
#include "hmot/parallel.h"

namespace hmot::heatmap {
namespace {

double QuarterShift(double before, double after) {
  if (after > before) return 0.25;
  if (before > after) return -0.25;
  return 0.0;
}

}  // namespace

std::string_view ToString(DecodeMethod method) {
  return method == DecodeMethod::kGetMax ? "get-max" : "get-bc";
}

DecodeMethod ParseDecodeMethod(std::string_view name) {
  if (name == "get-max" || name == "get_max" || name == "max") return DecodeMethod::kGetMax;
  if (name == "get-bc" || name == "get_bc" || name == "bc") return DecodeMethod::kGetBc;
  throw InvalidInput("unknown decode method '" + std::string(name) + "' (expected get-max or get-bc)");
}

Decoded DecodeGetMax(const Heatmap& hm) {
  RequireFinite(hm, "get-max decode");
  const int h = hm.height(), w = hm.width();
  const auto values = hm.values();
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  const auto lowest = *std::min_element(values.begin(), values.end());
  if (lowest == values[best]) return {{(w - 1) / 2.0, (h - 1) / 2.0}, true};

  const int row = static_cast<int>(best / static_cast<std::size_t>(w));
  const int col = static_cast<int>(best % static_cast<std::size_t>(w));
  Point p{static_cast<double>(col), static_cast<double>(row)};
  if (col > 0 && col < w - 1) p.x += QuarterShift(hm.at(row, col - 1), hm.at(row, col + 1));
  if (row > 0 && row < h - 1) p.y += QuarterShift(hm.at(row - 1, col), hm.at(row + 1, col));
  return {p, false};
}

Point DecodeGetBc(const Heatmap& hm) {
  RequireNormalized(hm, "get-bc decode");
  double sx = 0.0, sy = 0.0, total = 0.0;
  for (int r = 0; r < hm.height(); ++r) {
    double row_mass = 0.0, row_x = 0.0;
    for (int c = 0; c < hm.width(); ++c) {
      const double m = hm.at(r, c);
      row_mass += m;
      row_x += m * c;
    }
    sx += row_x;
    sy += row_mass * r;
    total += row_mass;
  }
  // Dividing by the (unit) total keeps the result a convex combination, so it
  // never leaves the grid by rounding.
  return {std::clamp(sx / total, 0.0, hm.width() - 1.0), std::clamp(sy / total, 0.0, hm.height() - 1.0)};
}

Point Decode(const Heatmap& hm, DecodeMethod method) {
  return method == DecodeMethod::kGetMax ? DecodeGetMax(hm).point : DecodeGetBc(hm);
}

LandmarkSet DecodeBatch(std::span<const Heatmap> hms, DecodeMethod method, double scale, int threads) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("decode batch: scale must be positive, got " + std::to_string(scale));
  }
  LandmarkSet out;
  if (hms.empty()) return out;
  for (const auto& hm : hms) RequireSameShape(hms.front(), hm, "decode batch");
  out.points.resize(hms.size());
  ParallelFor(hms.size(), threads, [&](std::size_t k) {
    const Point p = Decode(hms[k], method);
    out.points[k] = {p.x * scale, p.y * scale};
  });
  return out;
}

}  // namespace hmot::heatmap
