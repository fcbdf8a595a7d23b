/* Copyright 2026 The LET Metrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "let_metrics/geometry.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace let_metrics {
namespace {

using testing::MonteCarloIntersectionArea;
using testing::Point;

constexpr double kPi = std::numbers::pi;

Box3D UnitCube(double x = 0.0, double y = 0.0, double z = 0.0,
               double heading = 0.0) {
  return Box3D({x, y, z}, 1.0, 1.0, 1.0, heading);
}

std::vector<Point> ToPoints(const ConvexPolygon2D& poly) {
  std::vector<Point> out;
  for (const Vec2& v : poly.vertices()) out.push_back({v.x, v.y});
  return out;
}

bool IsCounterClockwise(const ConvexPolygon2D& poly) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const Vec2& c = v[(i + 2) % v.size()];
    if (Cross(b - a, c - b) <= 0.0) return false;
  }
  return true;
}

TEST(Box3DTest, RejectsNonPositiveDimensions) {
  EXPECT_THROW(Box3D({0, 0, 0}, 0.0, 1.0, 1.0, 0.0), InvalidBoxError);
  EXPECT_THROW(Box3D({0, 0, 0}, 1.0, -1.0, 1.0, 0.0), InvalidBoxError);
  EXPECT_THROW(Box3D({0, 0, 0}, 1.0, 1.0, NAN, 0.0), InvalidBoxError);
  EXPECT_THROW(Box3D({INFINITY, 0, 0}, 1.0, 1.0, 1.0, 0.0), InvalidBoxError);
  EXPECT_THROW(Box3D({0, 0, 0}, 1.0, 1.0, 1.0, NAN), InvalidBoxError);
}

TEST(Box3DTest, NormalizesHeading) {
  EXPECT_DOUBLE_EQ(UnitCube(0, 0, 0, kPi).heading(), -kPi);
  EXPECT_DOUBLE_EQ(UnitCube(0, 0, 0, -kPi).heading(), -kPi);
  EXPECT_NEAR(UnitCube(0, 0, 0, 3 * kPi).heading(), -kPi, 1e-12);
  EXPECT_NEAR(UnitCube(0, 0, 0, 2 * kPi + 0.5).heading(), 0.5, 1e-12);
  EXPECT_NEAR(UnitCube(0, 0, 0, -2 * kPi - 0.5).heading(), -0.5, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double h = NormalizeHeading(angle(rng));
    EXPECT_GE(h, -kPi);
    EXPECT_LT(h, kPi);
  }
}

TEST(BevFootprintTest, AxisAlignedUnitCube) {
  const auto poly = BevFootprint(UnitCube());
  ASSERT_EQ(poly.vertices().size(), 4u);
  EXPECT_TRUE(IsCounterClockwise(poly));
  for (const Vec2& v : poly.vertices()) {
    EXPECT_DOUBLE_EQ(std::abs(v.x), 0.5);
    EXPECT_DOUBLE_EQ(std::abs(v.y), 0.5);
  }
  EXPECT_DOUBLE_EQ(poly.Area(), 1.0);
}

TEST(BevFootprintTest, QuarterTurnKeepsCornerSet) {
  const auto poly = BevFootprint(UnitCube(0, 0, 0, kPi / 2));
  ASSERT_EQ(poly.vertices().size(), 4u);
  EXPECT_TRUE(IsCounterClockwise(poly));
  for (const Vec2& v : poly.vertices()) {
    EXPECT_NEAR(std::abs(v.x), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(v.y), 0.5, 1e-15);
  }
}

TEST(BevFootprintTest, RotatedRectangleCornersByHand) {
  const auto poly = BevFootprint(Box3D({0, 0, 0}, 2.0, 1.0, 1.0, kPi / 4));
  ASSERT_EQ(poly.vertices().size(), 4u);
  EXPECT_TRUE(IsCounterClockwise(poly));
  // Rotation by 45 degrees of (+-1, +-0.5), front-right corner first.
  const double r = std::sqrt(0.5);
  const Vec2 expected[4] = {{r * (1 + 0.5), r * (1 - 0.5)},
                            {r * (1 - 0.5), r * (1 + 0.5)},
                            {r * (-1 - 0.5), r * (-1 + 0.5)},
                            {r * (-1 + 0.5), r * (-1 - 0.5)}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(poly.vertices()[i].x, expected[i].x, 1e-15);
    EXPECT_NEAR(poly.vertices()[i].y, expected[i].y, 1e-15);
    EXPECT_NEAR(Norm(poly.vertices()[i]), std::sqrt(1.25), 1e-15);
  }
}

TEST(ConvexIntersectionTest, IdenticalSquares) {
  const auto sq = BevFootprint(UnitCube());
  EXPECT_NEAR(ConvexIntersectionArea(sq, sq), 1.0, 1e-12);
}

TEST(ConvexIntersectionTest, HalfOverlap) {
  EXPECT_NEAR(ConvexIntersectionArea(BevFootprint(UnitCube()),
                                     BevFootprint(UnitCube(0.5, 0.0))),
              0.5, 1e-12);
}

TEST(ConvexIntersectionTest, DisjointAndTouchingAreZero) {
  EXPECT_EQ(ConvexIntersectionArea(BevFootprint(UnitCube()),
                                   BevFootprint(UnitCube(3.0, 0.0))),
            0.0);
  EXPECT_EQ(ConvexIntersectionArea(BevFootprint(UnitCube()),
                                   BevFootprint(UnitCube(1.0, 0.0))),
            0.0);
  EXPECT_EQ(ConvexIntersectionArea(BevFootprint(UnitCube()),
                                   BevFootprint(UnitCube(1.0, 1.0))),
            0.0);
}

TEST(ConvexIntersectionTest, EmptyPolygon) {
  EXPECT_EQ(ConvexIntersectionArea(ConvexPolygon2D(),
                                   BevFootprint(UnitCube())),
            0.0);
  EXPECT_TRUE(ConvexPolygon2D({{0, 0}, {1, 0}, {2, 0}}).empty());
  EXPECT_TRUE(ConvexPolygon2D({{0, 0}, {1, 0}}).empty());
}

TEST(ConvexIntersectionTest, ClockwiseInputIsReoriented) {
  ConvexPolygon2D cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_TRUE(IsCounterClockwise(cw));
  EXPECT_DOUBLE_EQ(cw.Area(), 1.0);
}

TEST(ConvexIntersectionTest, SquareAgainstItsFortyFiveDegreeRotation) {
  const auto a = BevFootprint(UnitCube());
  const auto b = BevFootprint(UnitCube(0, 0, 0, kPi / 4));
  const double area = ConvexIntersectionArea(a, b);
  EXPECT_NEAR(area, 2.0 * (std::sqrt(2.0) - 1.0), 1e-12);

  std::mt19937_64 rng(11);
  const double mc =
      MonteCarloIntersectionArea(ToPoints(a), ToPoints(b), 1000000, rng);
  EXPECT_NEAR(area, mc, 0.002);
  EXPECT_TRUE(IsCounterClockwise(ConvexIntersection(a, b)));
}

TEST(ConvexIntersectionTest, RandomPairsAgainstMonteCarloAndBounds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), dim(0.3, 3.0),
      angle(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const Box3D a({pos(rng), pos(rng), 0}, dim(rng), dim(rng), 1, angle(rng));
    const Box3D b({pos(rng), pos(rng), 0}, dim(rng), dim(rng), 1, angle(rng));
    const auto pa = BevFootprint(a), pb = BevFootprint(b);
    const double ab = ConvexIntersectionArea(pa, pb);
    const double ba = ConvexIntersectionArea(pb, pa);
    EXPECT_NEAR(ab, ba, 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::min(pa.Area(), pb.Area()) + 1e-9);
    const double mc =
        MonteCarloIntersectionArea(ToPoints(pa), ToPoints(pb), 200000, rng);
    EXPECT_NEAR(ab, mc, 0.05) << "trial " << trial;
  }
}

TEST(Iou3dTest, IdenticalBoxes) {
  const Box3D b({3, -2, 0.5}, 4.0, 2.0, 1.5, 0.7);
  EXPECT_NEAR(Iou3d(b, b), 1.0, 1e-12);
}

TEST(Iou3dTest, OffsetUnitCubes) {
  EXPECT_NEAR(Iou3d(UnitCube(), UnitCube(0.5, 0, 0)), 1.0 / 3.0, 1e-12);
}

TEST(Iou3dTest, HeadingSymmetryGivesFullOverlap) {
  const Box3D a({1, 1, 0}, 4.0, 2.0, 1.5, 0.2);
  const Box3D b({1, 1, 0}, 4.0, 2.0, 1.5, 0.2 + kPi);
  EXPECT_NEAR(Iou3d(a, b), 1.0, 1e-12);
}

TEST(Iou3dTest, DisjointIsExactlyZero) {
  EXPECT_EQ(Iou3d(UnitCube(), UnitCube(0, 0, 1.5)), 0.0);
  EXPECT_EQ(Iou3d(UnitCube(), UnitCube(0, 0, 1.0)), 0.0);
  EXPECT_EQ(Iou3d(UnitCube(), UnitCube(5, 0, 0)), 0.0);
  EXPECT_EQ(Iou3d(UnitCube(), UnitCube(1.0, 0, 0)), 0.0);
}

TEST(Iou3dTest, VerticalOverlapOnly) {
  // Same footprint, half height overlap: 0.5 / 1.5.
  EXPECT_NEAR(Iou3d(UnitCube(), UnitCube(0, 0, 0.5)), 1.0 / 3.0, 1e-12);
}

TEST(Iou3dTest, SymmetricAndRigidInvariant) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-2.0, 2.0), dim(0.5, 4.0),
      angle(-kPi, kPi), far(-100.0, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Box3D a({pos(rng), pos(rng), 0.3 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const Box3D b({pos(rng), pos(rng), 0.3 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const double iou = Iou3d(a, b);
    EXPECT_EQ(iou, Iou3d(b, a));
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);

    const double theta = angle(rng);
    const Vec3 shift{far(rng), far(rng), far(rng)};
    auto move = [&](const Box3D& box) {
      const double c = std::cos(theta), s = std::sin(theta);
      const Vec3& p = box.center();
      return Box3D(Vec3{c * p.x - s * p.y, s * p.x + c * p.y, p.z} + shift,
                   box.length(), box.width(), box.height(),
                   box.heading() + theta);
    };
    EXPECT_NEAR(Iou3d(move(a), move(b)), iou, 1e-9) << "trial " << trial;
  }
}

TEST(Iou3dTest, RandomPairsAgainstMonteCarlo) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-1.0, 1.0), dim(0.5, 3.0),
      angle(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const Box3D a({pos(rng), pos(rng), 0.2 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const Box3D b({pos(rng), pos(rng), 0.2 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const double mc = testing::MonteCarloIou(testing::ToPlain(a),
                                             testing::ToPlain(b), 200000, rng);
    EXPECT_NEAR(Iou3d(a, b), mc, 0.01) << "trial " << trial;
  }
}

}  // namespace
}  // namespace let_metrics
