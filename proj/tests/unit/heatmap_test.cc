#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hmot/error.h"
#include "hmot/heatmap/decode.h"
#include "hmot/heatmap/target.h"
#include "hmot/ot/softmax.h"
#include "support/oracles.h"

namespace hmot::heatmap {
namespace {

TEST(GaussianTarget, PeakOneValues) {
  const Heatmap hm = MakeGaussianTarget({10, 20}, {1.0, 64, 64, AmplitudeMode::kPeakOne});
  EXPECT_DOUBLE_EQ(hm.at(20, 10), 1.0);
  EXPECT_NEAR(hm.at(20, 11), 0.60653, 1e-5);
  EXPECT_DOUBLE_EQ(hm.at(21, 10), std::exp(-0.5));
}

TEST(GaussianTarget, SymmetricAboutGridMidpoint) {
  const Heatmap hm = MakeGaussianTarget({31.5, 31.5}, {3.0, 64, 64, AmplitudeMode::kNormalized});
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      EXPECT_EQ(hm.at(r, c), hm.at(63 - r, c));
      EXPECT_EQ(hm.at(r, c), hm.at(r, 63 - c));
      EXPECT_EQ(hm.at(r, c), hm.at(c, r));
    }
  }
}

TEST(GaussianTarget, NormalizedModeSumsToOne) {
  const Heatmap hm = MakeGaussianTarget({20.3, 40.7}, {1.5, 64, 64, AmplitudeMode::kNormalized});
  EXPECT_NEAR(hm.Sum(), 1.0, 1e-9);
  for (double v : hm.values()) EXPECT_GE(v, 0.0);
}

TEST(GaussianTarget, RejectsCenterOutsideGrid) {
  EXPECT_THROW(MakeGaussianTarget({64.0, 3.0}, {}), InvalidInput);
  EXPECT_THROW(MakeGaussianTarget({-0.01, 3.0}, {}), InvalidInput);
  EXPECT_NO_THROW(MakeGaussianTarget({63.0, 0.0}, {}));
}

TEST(GaussianTarget, RejectsBadSpec) {
  TargetSpec spec;
  spec.sigma = 0.0;
  EXPECT_THROW(MakeGaussianTarget({3, 3}, spec), InvalidInput);
}

TEST(BoundaryWarning, WithinThreeSigma) {
  const TargetSpec spec{1.5, 64, 64, AmplitudeMode::kNormalized};
  EXPECT_FALSE(BoundaryWarning({4.5, 30}, spec).has_value());
  EXPECT_TRUE(BoundaryWarning({4.4, 30}, spec).has_value());
  EXPECT_TRUE(BoundaryWarning({30, 59}, spec).has_value());
}

TEST(GetMax, IsolatedPeakStaysPut) {
  Heatmap hm(64, 64);
  hm.at(20, 10) = 1.0;
  const auto d = DecodeGetMax(hm);
  EXPECT_EQ(d.point, (Point{10, 20}));
  EXPECT_FALSE(d.degenerate);
}

TEST(GetMax, QuarterPixelTowardLargerNeighbour) {
  Heatmap hm(64, 64);
  hm.at(20, 10) = 1.0;
  hm.at(20, 11) = 0.5;
  hm.at(20, 9) = 0.2;
  hm.at(21, 10) = 0.4;
  hm.at(19, 10) = 0.1;
  EXPECT_EQ(DecodeGetMax(hm).point, (Point{10.25, 20.25}));
}

TEST(GetMax, SubPixelGaussian) {
  const Heatmap hm = MakeGaussianTarget({10.3, 20.0}, {1.0, 64, 64, AmplitudeMode::kPeakOne});
  const Point p = DecodeGetMax(hm).point;
  EXPECT_GT(p.x, 10.0);
  EXPECT_LT(p.x, 10.5);
  EXPECT_EQ(p.y, 20.0);
}

TEST(GetMax, NoShiftOnBorder) {
  Heatmap hm(8, 8);
  hm.at(0, 7) = 1.0;
  hm.at(0, 6) = 0.9;
  hm.at(1, 7) = 0.9;
  EXPECT_EQ(DecodeGetMax(hm).point, (Point{7, 0}));
}

TEST(GetMax, ConstantMapIsDegenerate) {
  const auto d = DecodeGetMax(Heatmap(8, 6, 0.3));
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.point, (Point{2.5, 3.5}));
}

TEST(GetBc, PointMass) {
  Heatmap hm(16, 16);
  hm.at(9, 7) = 1.0;
  EXPECT_EQ(DecodeGetBc(hm), (Point{7, 9}));
}

TEST(GetBc, UniformIsGridCentroid) {
  const Point p = DecodeGetBc(Heatmap(64, 64, 1.0 / 4096.0));
  EXPECT_NEAR(p.x, 31.5, 1e-12);
  EXPECT_NEAR(p.y, 31.5, 1e-12);
}

TEST(GetBc, InteriorGaussian) {
  const Heatmap hm = MakeGaussianTarget({30.4, 17.8}, {3.0, 64, 64, AmplitudeMode::kNormalized});
  const Point p = DecodeGetBc(hm);
  EXPECT_LE(std::hypot(p.x - 30.4, p.y - 17.8), 0.1);
}

TEST(GetBc, RejectsUnnormalized) {
  EXPECT_THROW(DecodeGetBc(Heatmap(4, 4, 1.0)), InvalidInput);
}

TEST(GetBc, IntegerTranslationEquivariance) {
  std::mt19937_64 gen(3);
  const Heatmap patch = testing::RandomDistribution(5, 5, gen);
  Heatmap a(32, 32), b(32, 32);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      a.at(r + 4, c + 6) = patch.at(r, c);
      b.at(r + 11, c + 3) = patch.at(r, c);
    }
  }
  const Point pa = DecodeGetBc(a), pb = DecodeGetBc(b);
  EXPECT_NEAR(pb.x - pa.x, -3.0, 1e-9);
  EXPECT_NEAR(pb.y - pa.y, 7.0, 1e-9);
}

TEST(GetBc, StaysInsideGrid) {
  Heatmap hm(4, 4);
  hm.at(3, 3) = 1.0 + 5e-10;
  const Point p = DecodeGetBc(hm);
  EXPECT_LE(p.x, 3.0);
  EXPECT_LE(p.y, 3.0);
}

TEST(DecodeMethod, Parse) {
  EXPECT_EQ(ParseDecodeMethod("get-bc"), DecodeMethod::kGetBc);
  EXPECT_EQ(ParseDecodeMethod("max"), DecodeMethod::kGetMax);
  EXPECT_THROW(ParseDecodeMethod("argmax"), InvalidInput);
}

TEST(DecodeBatch, ScalesToImageFrame) {
  Heatmap hm(64, 64);
  hm.at(20, 10) = 1.0;
  const std::vector<Heatmap> hms{hm};
  const LandmarkSet s = DecodeBatch(hms, DecodeMethod::kGetBc, 4.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.points[0], (Point{40, 80}));
}

TEST(DecodeBatch, EmptyInputGivesEmptySet) {
  EXPECT_EQ(DecodeBatch({}, DecodeMethod::kGetMax, 1.0).size(), 0u);
}

TEST(DecodeBatch, PropagatesNormalizationContract) {
  const std::vector<Heatmap> hms{Heatmap(4, 4, 1.0 / 16.0), Heatmap(4, 4, 1.0)};
  EXPECT_THROW(DecodeBatch(hms, DecodeMethod::kGetBc, 1.0), InvalidInput);
}

TEST(DecodeBatch, SixtyEightTargetsGetMax) {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> cell(2, 61);
  std::vector<Heatmap> hms;
  std::vector<Point> centers;
  for (int k = 0; k < 68; ++k) {
    centers.push_back({static_cast<double>(cell(gen)), static_cast<double>(cell(gen))});
    hms.push_back(MakeGaussianTarget(centers.back(), {1.0, 64, 64, AmplitudeMode::kPeakOne}));
  }
  const LandmarkSet s = DecodeBatch(hms, DecodeMethod::kGetMax, 1.0, 3);
  for (int k = 0; k < 68; ++k) {
    EXPECT_LE(std::hypot(s.points[k].x - centers[k].x, s.points[k].y - centers[k].y), 0.25);
  }
}

TEST(DecodeBatch, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 gen(10);
  std::vector<Heatmap> hms;
  for (int k = 0; k < 20; ++k) hms.push_back(testing::RandomDistribution(16, 16, gen));
  EXPECT_EQ(DecodeBatch(hms, DecodeMethod::kGetBc, 2.0, 1), DecodeBatch(hms, DecodeMethod::kGetBc, 2.0, 4));
}

}  // namespace
}  // namespace hmot::heatmap
