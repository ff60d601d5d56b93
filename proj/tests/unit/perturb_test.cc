#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hmot/error.h"
#include "hmot/perturb/perturb.h"
#include "hmot/random.h"

namespace hmot::perturb {
namespace {

Image Noise(int h, int w, int channels, std::uint64_t seed) {
  Image img(h, w, channels);
  Rng rng(seed);
  for (double& v : img.values()) v = rng.Uniform();
  return img;
}

PerturbSpec Occlusion(Protocol p, std::uint64_t seed) { return PerturbSpec::Defaults(PerturbKind::kOcclusion, p, seed); }

TEST(PerturbSpec, ProtocolDefaults) {
  const auto large = Occlusion(Protocol::kLarge, 0);
  EXPECT_EQ(large.occlusion.min_axis, 0.15);
  EXPECT_EQ(large.occlusion.max_axis, 0.30);
  const auto blur = PerturbSpec::Defaults(PerturbKind::kMotionBlur, Protocol::kMedium);
  EXPECT_EQ(blur.blur.multiplier, 0.5);
  EXPECT_EQ(blur.blur.cap, 15);
}

TEST(PerturbSpec, Validation) {
  auto s = Occlusion(Protocol::kMedium, 0);
  s.occlusion.max_axis = 0.6;
  EXPECT_THROW(s.Validate(), InvalidInput);
  s = PerturbSpec::Defaults(PerturbKind::kMotionBlur, Protocol::kLarge);
  s.blur.multiplier = 0.0;
  EXPECT_THROW(s.Validate(), InvalidInput);
}

TEST(Occlude, ZeroAxesLeaveImageUntouched) {
  auto spec = Occlusion(Protocol::kMedium, 5);
  spec.occlusion = {0.0, 0.0};
  const Image img = Noise(32, 40, 3, 1);
  const auto r = Occlude(img, spec);
  EXPECT_EQ(r.image, img);
  EXPECT_EQ(r.occluded_pixels, 0u);
}

TEST(Occlude, SeedReproducible) {
  const Image img = Noise(48, 48, 1, 2);
  const auto a = Occlude(img, Occlusion(Protocol::kLarge, 99));
  const auto b = Occlude(img, Occlusion(Protocol::kLarge, 99));
  const auto c = Occlude(img, Occlusion(Protocol::kLarge, 100));
  EXPECT_EQ(a.image, b.image);
  EXPECT_NE(a.image, c.image);
}

TEST(Occlude, OnlyZeroesPixelsInside) {
  const Image img = Noise(64, 64, 3, 3);
  const auto r = Occlude(img, Occlusion(Protocol::kMedium, 7));
  std::size_t zeroed = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const bool inside = r.ellipse.Contains(x, y);
      zeroed += inside;
      for (int ch = 0; ch < 3; ++ch) {
        if (inside) EXPECT_EQ(r.image.at(y, x, ch), 0.0);
        else EXPECT_EQ(r.image.at(y, x, ch), img.at(y, x, ch));
        EXPECT_LE(r.image.at(y, x, ch), img.at(y, x, ch));
      }
    }
  }
  EXPECT_EQ(zeroed, r.occluded_pixels);
}

TEST(Occlude, DrawnParametersFollowProtocol) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto e = DrawEllipse(100, 80, Occlusion(Protocol::kLarge, seed));
    EXPECT_GE(e.semi_a, 0.15 * 80);
    EXPECT_LE(e.semi_a, 0.30 * 80);
    EXPECT_GE(e.semi_b, 0.15 * 80);
    EXPECT_LE(e.semi_b, 0.30 * 80);
    EXPECT_GE(e.angle, 0.0);
    EXPECT_LT(e.angle, std::numbers::pi);
    EXPECT_GE(e.cx, -0.5);
    EXPECT_LT(e.cx, 79.5);
  }
}

TEST(Occlude, InteriorAreaMatchesFormula) {
  const auto spec = Occlusion(Protocol::kMedium, 0);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = spec;
    s.seed = seed;
    const auto r = Occlude(Image(64, 64, 1, 1.0), s);
    const auto& e = r.ellipse;
    const double reach = std::max(e.semi_a, e.semi_b);
    if (e.cx - reach < -0.5 || e.cx + reach > 63.5 || e.cy - reach < -0.5 || e.cy + reach > 63.5) continue;
    ++checked;
    EXPECT_NEAR(r.clipped_area, std::numbers::pi * e.semi_a * e.semi_b, 0.01 * e.Area());
    EXPECT_LE(std::abs(static_cast<double>(r.occluded_pixels) - e.Area()) / e.Area(), 0.05) << seed;
  }
  EXPECT_GT(checked, 10);
}

TEST(Ellipse, Rotation) {
  const Ellipse e{10, 10, 5, 1, std::numbers::pi / 2};
  EXPECT_TRUE(e.Contains(10, 14.5));
  EXPECT_FALSE(e.Contains(14.5, 10));
}

TEST(LinearBlur, HorizontalBoxOfFive) {
  Image img(9, 15, 1);
  img.at(4, 7) = 1.0;
  const Image out = LinearBlur(img, 3.0, 0.0, 5);
  for (int c = 0; c < 15; ++c) {
    const double expected = (c >= 5 && c <= 9) ? 0.2 : 0.0;
    EXPECT_NEAR(out.at(4, c), expected, 1e-15) << c;
  }
  EXPECT_NEAR(out.Energy(), 1.0, 1e-15);
}

TEST(LinearBlur, LengthOneIsIdentity) {
  const Image img = Noise(10, 10, 3, 4);
  EXPECT_EQ(LinearBlur(img, 1.0, 1.0, 1), img);
  EXPECT_EQ(LinearBlur(img, 0.0, 0.0, 9), img);
}

TEST(MotionBlur, StaticTrackLeavesFramesUnchanged) {
  std::vector<Image> frames{Noise(12, 12, 1, 1), Noise(12, 12, 1, 2), Noise(12, 12, 1, 3)};
  const std::vector<Point> track(3, Point{5, 5});
  const auto r = MotionBlurSequence(frames, track, PerturbSpec::Defaults(PerturbKind::kMotionBlur, Protocol::kLarge));
  EXPECT_EQ(r.frames, frames);
  for (const auto& k : r.kernels) EXPECT_EQ(k.length, 0);
}

TEST(MotionBlur, KernelLengthAndCap) {
  std::vector<Image> frames(4, Image(8, 8, 1, 0.5));
  const std::vector<Point> track{{0, 0}, {5, 0}, {10, 0}, {100, 0}};
  const auto r = MotionBlurSequence(frames, track, PerturbSpec::Defaults(PerturbKind::kMotionBlur, Protocol::kMedium));
  EXPECT_EQ(r.kernels[0].length, 3);   // one-sided: 5 px * 0.5, rounded
  EXPECT_EQ(r.kernels[1].length, 5);   // 10 px * 0.5
  EXPECT_EQ(r.kernels[2].length, 15);  // 95 px * 0.5, capped
  EXPECT_EQ(r.kernels[3].length, 15);
}

TEST(MotionBlur, RejectsBadInput) {
  const auto spec = PerturbSpec::Defaults(PerturbKind::kMotionBlur, Protocol::kMedium);
  std::vector<Image> frames(2, Image(4, 4, 1));
  EXPECT_THROW(MotionBlurSequence(frames, {{0, 0}, {1, 1}}, spec), InvalidInput);
  frames.resize(3, Image(4, 4, 1));
  EXPECT_THROW(MotionBlurSequence(frames, {{0, 0}, {1, 1}}, spec), InvalidInput);
  EXPECT_THROW(MotionBlurSequence(frames, {{0, 0}, {1, 1}, {2, 2}}, Occlusion(Protocol::kMedium, 0)), InvalidInput);
}

TEST(MotionBlur, EnergyPreservedAwayFromBorders) {
  Image img(64, 64, 1);
  for (int r = 20; r < 44; ++r) {
    for (int c = 20; c < 44; ++c) img.at(r, c) = 0.8;
  }
  const Image out = LinearBlur(img, 3.0, 4.0, 11);
  EXPECT_NEAR(out.Energy(), img.Energy(), 1e-9 * img.Energy());
}

TEST(MotionBlur, DiagonalOrientation) {
  Image img(41, 41, 1);
  img.at(20, 20) = 1.0;
  const Image out = LinearBlur(img, 3.0, 4.0, 9);
  double m = 0, mx = 0, my = 0;
  for (int r = 0; r < 41; ++r) {
    for (int c = 0; c < 41; ++c) {
      m += out.at(r, c);
      mx += c * out.at(r, c);
      my += r * out.at(r, c);
    }
  }
  mx /= m;
  my /= m;
  double sxx = 0, syy = 0, sxy = 0;
  for (int r = 0; r < 41; ++r) {
    for (int c = 0; c < 41; ++c) {
      const double w = out.at(r, c);
      sxx += w * (c - mx) * (c - mx);
      syy += w * (r - my) * (r - my);
      sxy += w * (c - mx) * (r - my);
    }
  }
  const double angle = 0.5 * std::atan2(2 * sxy, sxx - syy);
  EXPECT_NEAR(angle, std::atan2(4.0, 3.0), 5.0 * std::numbers::pi / 180.0);
}

TEST(Rng, ReproducibleStreams) {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.Uniform(), b.Uniform());
  Rng n(1);
  double s = 0, s2 = 0;
  for (int k = 0; k < 20000; ++k) {
    const double x = n.Normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / 20000, 0.0, 0.03);
  EXPECT_NEAR(s2 / 20000, 1.0, 0.05);
  EXPECT_EQ(DeriveSeed(10, 3), 13u);
}

}  // namespace
}  // namespace hmot::perturb
