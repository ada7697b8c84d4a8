// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "socnav/core.hpp"

namespace socnav {
namespace {

TEST(Vec2, Arithmetic) {
  const Vec2 a{3.0, 4.0};
  EXPECT_DOUBLE_EQ(a.norm(), 5.0);
  EXPECT_DOUBLE_EQ(a.norm_sq(), 25.0);
  EXPECT_EQ((a + Vec2{1.0, 1.0}), (Vec2{4.0, 5.0}));
  EXPECT_EQ(2.0 * a, (Vec2{6.0, 8.0}));
  EXPECT_DOUBLE_EQ(dot(a, {1.0, 0.0}), 3.0);
  EXPECT_DOUBLE_EQ(det({1.0, 0.0}, {0.0, 1.0}), 1.0);
  EXPECT_EQ(perp(Vec2{1.0, 0.0}), (Vec2{0.0, 1.0}));
  EXPECT_FALSE((Vec2{NAN, 0.0}).finite());
}

TEST(Rotation, ColumnsAreForwardAndLeft) {
  const Mat2 r = rotation(kPi / 2.0);
  EXPECT_NEAR(r.c0.x, 0.0, 1e-15);
  EXPECT_NEAR(r.c0.y, 1.0, 1e-15);
  EXPECT_NEAR(r.c1.x, -1.0, 1e-15);
  EXPECT_NEAR(r.c1.y, 0.0, 1e-15);
  const Vec2 v{0.3, -0.7};
  const Vec2 back = r.transposed() * (r * v);
  EXPECT_NEAR(back.x, v.x, 1e-15);
  EXPECT_NEAR(back.y, v.y, 1e-15);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-15);
}

TEST(WrapAngle, MapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(2.0 * kPi + 0.1), 0.1, 1e-12);
  EXPECT_NEAR(wrap_angle(-0.1), -0.1, 1e-15);
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(w - a, 2.0 * kPi), 0.0, 1e-12);
  }
}

TEST(DesiredVelocity, PointsAtGoalAtMaxSpeed) {
  const Vec2 v = desired_velocity({0.0, 0.0}, {3.0, 4.0}, 1.2, 0.3);
  EXPECT_NEAR(v.x, 0.72, 1e-15);
  EXPECT_NEAR(v.y, 0.96, 1e-15);
}

TEST(DesiredVelocity, ZeroInsideGoalRadius) {
  EXPECT_EQ(desired_velocity({0.0, 0.0}, {0.1, 0.1}, 1.0, 0.3), Vec2{});
  EXPECT_EQ(desired_velocity({1.0, 1.0}, {1.0, 1.0}, 1.0, 0.0), Vec2{});
}

TEST(ModelParams, DefaultsValidate) {
  EXPECT_NO_THROW(ModelParams{}.validate());
  const ModelParams p = make_params(0.25, 60.0, 1.3);
  EXPECT_DOUBLE_EQ(p.inertia, 0.5 * 60.0 * 0.25 * 0.25);
  EXPECT_DOUBLE_EQ(p.goal_radius(), 0.25);
}

TEST(ModelParams, RejectsNonPositiveConstants) {
  ModelParams p;
  p.mass = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.relaxation_time = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.radius = NAN;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace socnav
