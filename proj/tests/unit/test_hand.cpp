// Copyright 2026 The Clavier Authors
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

#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sim/hand.hpp"
#include "util/errors.hpp"
#include "util/rng.hpp"

using namespace clavier;

namespace {

// Independent fingertip oracle: explicit 4x4 homogeneous transforms along
// the chain  base - yaw - l0 - flex1 - l1 - flex2 - l2 - flex3 - l3 - tip.
// Links extend along local -x; positive yaw carries the tip toward +y
// (a -z rotation of the -x axis); positive flexion curls toward -z.
using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 identity4() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  }
  return r;
}

Mat4 translate(double x, double y, double z) {
  Mat4 m = identity4();
  m[0][3] = x;
  m[1][3] = y;
  m[2][3] = z;
  return m;
}

Mat4 rot_z(double t) {
  Mat4 m = identity4();
  m[0][0] = std::cos(t);
  m[0][1] = -std::sin(t);
  m[1][0] = std::sin(t);
  m[1][1] = std::cos(t);
  return m;
}

Mat4 rot_y(double t) {
  Mat4 m = identity4();
  m[0][0] = std::cos(t);
  m[0][2] = std::sin(t);
  m[2][0] = -std::sin(t);
  m[2][2] = std::cos(t);
  return m;
}

Vec3 oracle_tip(const HandConfig& cfg, const Vec3& wrist, int finger,
                const double* q3) {
  Mat4 t = translate(wrist.x + cfg.base_dx, wrist.y + cfg.finger_dy[finger],
                     wrist.z);
  t = mul(t, rot_z(-q3[0]));
  t = mul(t, translate(-cfg.links[0], 0, 0));
  t = mul(t, rot_y(-q3[1]));
  t = mul(t, translate(-cfg.links[1], 0, 0));
  t = mul(t, rot_y(-q3[2]));
  t = mul(t, translate(-cfg.links[2], 0, 0));
  t = mul(t, rot_y(-cfg.fixed_flex3));
  t = mul(t, translate(-cfg.links[3], 0, 0));
  return {t[0][3], t[1][3], t[2][3]};
}

}  // namespace

TEST_CASE("forward kinematics matches the homogeneous-transform oracle") {
  Rng rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    HandConfig cfg =
        make_hand_config(trial % 2 ? Hand::kRight : Hand::kLeft);
    Vec3 wrist{rng.uniform(0.0, 0.3), rng.uniform(0.0, 1.2),
               rng.uniform(0.02, 0.08)};
    double q[kJointsPerHand];
    for (int f = 0; f < kNumFingers; ++f) {
      for (int j = 0; j < kJointsPerFinger; ++j) {
        q[f * kJointsPerFinger + j] =
            rng.uniform(cfg.lo(j) - 0.2, cfg.hi(j) + 0.2);
      }
    }
    auto tips = forward_kinematics(cfg, wrist, q);
    for (int f = 0; f < kNumFingers; ++f) {
      Vec3 want = oracle_tip(cfg, wrist, f, q + f * kJointsPerFinger);
      CHECK(tips[f].x == doctest::Approx(want.x).epsilon(1e-12));
      CHECK(tips[f].y == doctest::Approx(want.y).epsilon(1e-12));
      CHECK(tips[f].z == doctest::Approx(want.z).epsilon(1e-12));
    }
  }
}

TEST_CASE("fingertip analytic spot checks with unit links") {
  HandConfig cfg = make_hand_config(Hand::kRight);
  cfg.links = {1.0, 1.0, 1.0, 1.0};
  cfg.base_dx = 0.0;
  cfg.finger_dy = {0.0, 0.0, 0.0};
  Vec3 wrist{0, 0, 0};
  constexpr double kPi = std::numbers::pi;

  SUBCASE("straight finger reaches 4 links toward -x") {
    cfg.fixed_flex3 = 0.0;
    double q[3] = {0, 0, 0};
    Vec3 tip = fingertip(cfg, wrist, 0, q);
    CHECK(tip.x == doctest::Approx(-4.0));
    CHECK(tip.y == doctest::Approx(0.0));
    CHECK(tip.z == doctest::Approx(0.0));
  }
  SUBCASE("full lateral yaw swings the straight finger to +y") {
    cfg.fixed_flex3 = 0.0;
    double q[3] = {kPi / 2, 0, 0};
    Vec3 tip = fingertip(cfg, wrist, 0, q);
    CHECK(tip.x == doctest::Approx(0.0));
    CHECK(tip.y == doctest::Approx(4.0));
  }
  SUBCASE("right-angle curls fold the distal links downward") {
    cfg.fixed_flex3 = kPi / 2;
    double q[3] = {0, 0, kPi / 2};
    // Segments: l0 and l1 along -x, l2 straight down, l3 back toward +x.
    Vec3 tip = fingertip(cfg, wrist, 0, q);
    CHECK(tip.x == doctest::Approx(-1.0));
    CHECK(tip.y == doctest::Approx(0.0));
    CHECK(tip.z == doctest::Approx(-1.0));
  }
}

TEST_CASE("press pose geometry is self-consistent") {
  for (Hand h : {Hand::kLeft, Hand::kRight}) {
    HandConfig cfg = make_hand_config(h);
    Vec3 wrist{0.2, 0.5, cfg.wrist_z};
    double q[3] = {0.0, cfg.press_flex[0], cfg.press_flex[1]};
    Vec3 tip = fingertip(cfg, wrist, 1, q);
    CHECK(wrist.x - tip.x == doctest::Approx(cfg.press_reach()));
    CHECK(tip.x == doctest::Approx(wrist.x + cfg.base_dx -
                                   cfg.press_radius()));
    CHECK(tip.y == doctest::Approx(wrist.y));
  }
}

TEST_CASE("hand configs mirror the finger spread") {
  HandConfig right = make_hand_config(Hand::kRight);
  HandConfig left = make_hand_config(Hand::kLeft);
  // Anatomical mirror: the right index sits over lower keys than the ring;
  // on the left hand the order flips.
  CHECK(right.finger_dy[kIndex] < right.finger_dy[kRing]);
  CHECK(left.finger_dy[kIndex] > left.finger_dy[kRing]);
  CHECK(right.finger_dy[kIndex] == -left.finger_dy[kIndex]);
  CHECK(right.finger_dy[kMiddle] == 0.0);
}

TEST_CASE("scripted wrist pins contact states and interpolates between") {
  Keyboard kb = build_keyboard();
  HandConfig cfg = make_hand_config(Hand::kRight);

  SUBCASE("single note: hold, pin, hold; pressed tip lands on the key") {
    PianoRoll roll;
    roll.name = "one";
    roll.num_steps = 6;
    roll.notes.push_back({2, 2, 50, 1, kMiddle});
    WristTrack w = script_wrist(cfg, kb, roll);
    REQUIRE(w.x.size() == 7);
    const KeySpec& ks = kb.keys[50];
    // Pressing during steps 2..3 pins states 3 and 4.
    for (int s : {3, 4}) {
      CHECK(w.x[s] == doctest::Approx(ks.contact_x + cfg.press_reach()));
      CHECK(w.y[s] == doctest::Approx(ks.center_y));
    }
    for (int s = 0; s < 7; ++s) {
      CHECK(w.x[s] == w.x[3]);  // holds outside the group
      CHECK(w.y[s] == w.y[3]);
    }
    double q[3] = {0.0, cfg.press_flex[0], cfg.press_flex[1]};
    Vec3 tip = fingertip(cfg, {w.x[3], w.y[3], w.z}, kMiddle, q);
    CHECK(tip.x == doctest::Approx(ks.contact_x));
    CHECK(tip.y == doctest::Approx(ks.center_y));
    // The pressed tip drives essentially the full key travel.
    CHECK(tip.z < -0.9 * kb.travel);
  }

  SUBCASE("straight-line interpolation between note groups") {
    PianoRoll roll;
    roll.name = "two";
    roll.num_steps = 6;
    roll.notes.push_back({0, 1, 50, 1, kMiddle});
    roll.notes.push_back({4, 1, 54, 1, kMiddle});
    roll.sort_notes();
    WristTrack w = script_wrist(cfg, kb, roll);
    // Pinned states 1 and 5; states 2..4 interpolate linearly.
    double y1 = kb.keys[50].center_y, y5 = kb.keys[54].center_y;
    CHECK(w.y[1] == doctest::Approx(y1));
    CHECK(w.y[5] == doctest::Approx(y5));
    CHECK(w.y[3] == doctest::Approx(0.5 * (y1 + y5)));
    CHECK(w.y[2] == doctest::Approx(y1 + 0.25 * (y5 - y1)));
    CHECK(w.y[0] == w.y[1]);
    CHECK(w.y[6] == w.y[5]);
  }

  SUBCASE("chord pose: y averages targets, black key pulls x in") {
    PianoRoll roll;
    roll.name = "chord";
    roll.num_steps = 3;
    roll.notes.push_back({0, 1, 49, 1, kIndex});   // white
    roll.notes.push_back({0, 1, 52, 1, kRing});    // black (C#5)
    roll.sort_notes();
    REQUIRE(is_black_key(52));
    WristTrack w = script_wrist(cfg, kb, roll);
    double wy_i = kb.keys[49].center_y - cfg.finger_dy[kIndex];
    double wy_r = kb.keys[52].center_y - cfg.finger_dy[kRing];
    CHECK(w.y[1] == doctest::Approx(0.5 * (wy_i + wy_r)));
    // min-x rule: the black key's closer contact wins.
    CHECK(w.x[1] ==
          doctest::Approx(kb.keys[52].contact_x + cfg.press_reach()));
  }

  SUBCASE("silent hand parks over its side of the keyboard") {
    PianoRoll roll;
    roll.name = "silent";
    roll.num_steps = 4;
    roll.notes.push_back({0, 1, 50, 1, kMiddle});  // right hand only
    WristTrack w = script_wrist(make_hand_config(Hand::kLeft), kb, roll);
    for (size_t s = 1; s < w.x.size(); ++s) {
      CHECK(w.x[s] == w.x[0]);
      CHECK(w.y[s] == w.y[0]);
    }
    CHECK(w.y[0] < kb.keys[kHandSplitKey].center_y);
  }

  SUBCASE("unreachable simultaneous spread is rejected") {
    PianoRoll roll;
    roll.name = "wide";
    roll.num_steps = 3;
    roll.notes.push_back({0, 1, 45, 1, kIndex});
    roll.notes.push_back({0, 1, 65, 1, kRing});
    roll.sort_notes();
    CHECK_THROWS_AS(script_wrist(cfg, kb, roll), ValidationError);
  }

  SUBCASE("missing finger assignment is rejected") {
    PianoRoll roll;
    roll.name = "nofinger";
    roll.num_steps = 3;
    roll.notes.push_back({0, 1, 50, 1, kFingerUnassigned});
    CHECK_THROWS_AS(script_wrist(cfg, kb, roll), ValidationError);
  }
}

TEST_CASE("trajectory serialization round-trips bit-exactly") {
  Trajectory t;
  t.song = "roundtrip";
  t.num_steps = 3;
  t.nominal_f1 = 0.6913080044096421;
  Rng rng(7);
  for (int h = 0; h < kNumHands; ++h) {
    HandTrajectory& ht = t.hands[h];
    ht.wrist.z = rng.uniform(0.03, 0.06);
    for (int s = 0; s <= t.num_steps; ++s) {
      std::array<double, kJointsPerHand> st;
      for (double& v : st) v = rng.uniform(-0.6, 1.6);
      ht.states.push_back(st);
      ht.wrist.x.push_back(rng.uniform(0.1, 0.3));
      ht.wrist.y.push_back(rng.uniform(0.0, 1.2));
    }
  }
  ArtifactHeader h;
  h.kind = "trajectory";
  std::string text = trajectory_text(t, h);
  Trajectory back = parse_trajectory(text);
  CHECK(back.song == t.song);
  CHECK(back.num_steps == t.num_steps);
  CHECK(back.nominal_f1 == t.nominal_f1);
  for (int hi = 0; hi < kNumHands; ++hi) {
    CHECK(back.hands[hi].wrist.z == t.hands[hi].wrist.z);
    REQUIRE(back.hands[hi].states.size() == t.hands[hi].states.size());
    for (size_t s = 0; s < t.hands[hi].states.size(); ++s) {
      for (int j = 0; j < kJointsPerHand; ++j) {
        CHECK(back.hands[hi].states[s][j] == t.hands[hi].states[s][j]);
      }
      CHECK(back.hands[hi].wrist.x[s] == t.hands[hi].wrist.x[s]);
      CHECK(back.hands[hi].wrist.y[s] == t.hands[hi].wrist.y[s]);
    }
  }

  SUBCASE("truncated text is rejected") {
    CHECK_THROWS_AS(parse_trajectory(text.substr(0, text.size() / 2)),
                    ValidationError);
  }
  SUBCASE("wrong artifact kind is rejected") {
    std::string wrong = text;
    size_t pos = wrong.find("trajectory");
    wrong.replace(pos, 10, "piano-roll");
    CHECK_THROWS_AS(parse_trajectory(wrong), ValidationError);
  }
}
