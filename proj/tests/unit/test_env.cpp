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
#include <vector>

#include "doctest.h"
#include "sim/env.hpp"
#include "util/errors.hpp"

using namespace clavier;

namespace {

PianoRoll one_note_roll(int key, int finger, int onset, int dur, int steps) {
  PianoRoll r;
  r.name = "unit";
  r.num_steps = steps;
  r.notes.push_back({onset, dur, key, key < kHandSplitKey ? 0 : 1, finger});
  return r;
}

double key_lateral_angle() {
  HandConfig cfg = make_hand_config(Hand::kRight);
  return build_keyboard().white_pitch / cfg.press_radius();
}

std::array<double, kJointsPerHand> press_cmd(const HandConfig& cfg,
                                             int finger) {
  auto cmd = HandEnv::rest_state(cfg);
  cmd[finger * kJointsPerFinger + 1] = cfg.press_flex[0];
  cmd[finger * kJointsPerFinger + 2] = cfg.press_flex[1];
  return cmd;
}

}  // namespace

TEST_CASE("reward kernel: 1 at zero, 0.1 at the scale distance") {
  CHECK(reward_kernel(0.0, 0.05) == 1.0);
  CHECK(reward_kernel(0.05, 0.05) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(reward_kernel(0.025, 0.05) ==
        doctest::Approx(std::pow(10.0, -0.25)).epsilon(1e-12));
  CHECK(reward_kernel(0.1, 0.05) == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK(reward_kernel(-0.05, 0.05) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("gap presets") {
  double lpk = key_lateral_angle();

  SUBCASE("identity is the nominal device") {
    GapModel g = GapModel::identity();
    CHECK(g.is_identity());
    CHECK(GapModel::preset("identity", Hand::kLeft, 7).is_identity());
  }
  SUBCASE("bias-only is a pure lateral miscalibration") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
      GapModel g = GapModel::bias_only(Hand::kRight, seed);
      CHECK_FALSE(g.is_identity());
      CHECK(g.wrist_y_offset == 0.0);
      CHECK(g.lag_alpha == 1.0);
      CHECK(g.motor_noise_sd == 0.0);
      CHECK(g.threshold_shift == 0.0);
      for (double b : g.lateral_bias) {
        double kw = std::abs(b) / lpk;
        CHECK(kw >= 0.3);
        CHECK(kw <= 0.6);
      }
    }
  }
  SUBCASE("realistic draws every distortion within its band") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
      GapModel g = GapModel::realistic(Hand::kLeft, seed);
      for (double b : g.lateral_bias) {
        double kw = std::abs(b) / lpk;
        CHECK(kw >= 0.2);
        CHECK(kw <= 0.55);
      }
      CHECK(std::abs(g.wrist_y_offset) <= 0.3 * build_keyboard().white_pitch);
      CHECK(g.lag_alpha >= 0.10);
      CHECK(g.lag_alpha <= 0.16);
      CHECK(g.motor_noise_sd > 0.0);
      CHECK(g.threshold_shift > 0.0);
    }
  }
  SUBCASE("presets are deterministic in (hand, seed) and differ across") {
    GapModel a = GapModel::realistic(Hand::kLeft, 5);
    GapModel b = GapModel::realistic(Hand::kLeft, 5);
    CHECK(a.lateral_bias == b.lateral_bias);
    CHECK(a.lag_alpha == b.lag_alpha);
    GapModel c = GapModel::realistic(Hand::kRight, 5);
    CHECK(a.lateral_bias != c.lateral_bias);
    GapModel d = GapModel::realistic(Hand::kLeft, 6);
    CHECK(a.lateral_bias != d.lateral_bias);
  }
  SUBCASE("unknown preset name") {
    CHECK_THROWS_AS(GapModel::preset("fuzzy", Hand::kLeft, 1),
                    ValidationError);
  }
}

TEST_CASE("identity gap tracks commands exactly; obs hides calibration") {
  Keyboard kb = build_keyboard();
  PianoRoll roll = one_note_roll(50, kMiddle, 1, 1, 4);
  EnvConfig cfg;
  HandEnv nominal(kb, Hand::kRight, roll, GapModel::identity(), cfg);
  GapModel bias;
  bias.lateral_bias = {0.05, -0.08, 0.12};
  HandEnv biased(kb, Hand::kRight, roll, bias, cfg);

  nominal.reset(3);
  biased.reset(3);
  // Encoders live in the commanded frame: the static offset is latent.
  CHECK(nominal.obs() == biased.obs());

  auto cmd = press_cmd(nominal.hand_config(), kMiddle);
  nominal.step(cmd.data());
  biased.step(cmd.data());
  for (int d = 0; d < kJointsPerHand; ++d) {
    // Identity: actuals equal the command bit-for-bit at the boundary.
    CHECK(nominal.actual()[d] == cmd[d]);
    if (d % kJointsPerFinger == 0) {
      CHECK(biased.actual()[d] ==
            doctest::Approx(cmd[d] + bias.lateral_bias[d / kJointsPerFinger])
                .epsilon(1e-15));
    } else {
      CHECK(biased.actual()[d] == cmd[d]);
    }
  }
  CHECK(nominal.obs() == biased.obs());
}

TEST_CASE("first-order lag matches an independent substep oracle") {
  Keyboard kb = build_keyboard();
  PianoRoll roll = one_note_roll(50, kMiddle, 1, 1, 4);
  EnvConfig cfg;
  GapModel gap;
  gap.lag_alpha = 0.13;
  gap.lateral_bias = {0.02, 0.0, -0.03};
  HandEnv env(kb, Hand::kRight, roll, gap, cfg);
  env.reset(1);

  // Re-simulate the documented semantics: per substep the target is the
  // linear interpolation of command states (plus lateral bias), and the
  // actual relaxes toward it by lag_alpha, clamped to the joint limits.
  const HandConfig& hc = env.hand_config();
  auto q = HandEnv::rest_state(hc);
  for (int f = 0; f < kNumFingers; ++f) {
    q[f * kJointsPerFinger] += gap.lateral_bias[f];
  }
  auto prev = HandEnv::rest_state(hc);
  auto cmd = press_cmd(hc, kMiddle);
  cmd[kMiddle * kJointsPerFinger] = 0.4;  // exercise a lateral joint too
  for (int step = 0; step < 3; ++step) {
    env.step(cmd.data());
    for (int k = 1; k <= cfg.substeps; ++k) {
      double a = static_cast<double>(k) / cfg.substeps;
      for (int d = 0; d < kJointsPerHand; ++d) {
        double target = prev[d] + a * (cmd[d] - prev[d]);
        if (d % kJointsPerFinger == 0) {
          target += gap.lateral_bias[d / kJointsPerFinger];
        }
        q[d] += gap.lag_alpha * (target - q[d]);
        q[d] = std::clamp(q[d], hc.lo(d % kJointsPerFinger),
                          hc.hi(d % kJointsPerFinger));
      }
    }
    prev = cmd;
    for (int d = 0; d < kJointsPerHand; ++d) {
      CHECK(env.actual()[d] == doctest::Approx(q[d]).epsilon(1e-12));
    }
  }
  // Geometric convergence to the held command: error shrinks by
  // (1 - alpha)^substeps per step once the target is constant.
  double err1 = std::abs(env.actual()[4] - cmd[4]);
  env.step(cmd.data());
  double err2 = std::abs(env.actual()[4] - cmd[4]);
  CHECK(err2 == doctest::Approx(err1 * std::pow(1.0 - gap.lag_alpha,
                                                cfg.substeps))
                    .epsilon(1e-9));
}

TEST_CASE("motor noise is seeded and reproducible") {
  Keyboard kb = build_keyboard();
  PianoRoll roll = one_note_roll(50, kMiddle, 1, 1, 4);
  EnvConfig cfg;
  GapModel gap;
  gap.motor_noise_sd = 0.004;
  HandEnv env(kb, Hand::kRight, roll, gap, cfg);
  auto cmd = HandEnv::rest_state(env.hand_config());

  env.reset(5);
  env.step(cmd.data());
  auto first = env.actual();
  env.reset(5);
  env.step(cmd.data());
  CHECK(env.actual() == first);
  env.reset(6);
  env.step(cmd.data());
  CHECK(env.actual() != first);
  // Noise really perturbs the actuals around the command.
  bool any_off = false;
  for (int d = 0; d < kJointsPerHand; ++d) {
    if (env.actual()[d] != cmd[d]) any_off = true;
  }
  CHECK(any_off);
}

TEST_CASE("goal evaluation at the step boundary") {
  Keyboard kb = build_keyboard();
  // One note, key 50 with the middle finger, sounding during step 0 only.
  PianoRoll roll = one_note_roll(50, kMiddle, 0, 1, 3);
  EnvConfig cfg;
  HandEnv env(kb, Hand::kRight, roll, GapModel::identity(), cfg);
  env.reset(1);
  auto cmd = press_cmd(env.hand_config(), kMiddle);

  const StepInfo& hit = env.step(cmd.data());
  CHECK(hit.hits == 1);
  CHECK(hit.misses == 0);
  CHECK_FALSE(hit.false_positive);
  CHECK(hit.key_match == doctest::Approx(1.0));       // full depression
  CHECK(hit.key_press == doctest::Approx(1.0));       // no extras either
  CHECK(hit.fingering == doctest::Approx(1.0).epsilon(0.2));
  CHECK(hit.active_keys == std::vector<int>{50});
  CHECK(hit.pressed_by_finger[kMiddle] == 50);
  // Energy counts command-state movement in L1.
  double expect_energy =
      std::abs(env.hand_config().press_flex[0] -
               env.hand_config().rest_flex[0]) +
      std::abs(env.hand_config().press_flex[1] -
               env.hand_config().rest_flex[1]);
  CHECK(hit.energy_l1 == doctest::Approx(expect_energy));
  CHECK(hit.reward ==
        doctest::Approx(cfg.fingering_coef * hit.fingering +
                        cfg.key_press_coef * hit.key_press -
                        cfg.energy_coef * hit.energy_l1));
  CHECK(env.real_reward(hit) ==
        doctest::Approx(cfg.key_on_coef * hit.key_match +
                        (1 - cfg.key_on_coef)));

  // Step 1 has no goal: holding the press is now a false positive.
  const StepInfo& fp = env.step(cmd.data());
  CHECK(fp.false_positive);
  CHECK(fp.hits == 0);
  CHECK(fp.extras == 1);
  CHECK(fp.key_match == 1.0);  // vacuous: no goal keys
  CHECK(fp.key_press == doctest::Approx(cfg.key_on_coef));
  CHECK(fp.energy_l1 == 0.0);
  CHECK(env.real_reward(fp) == doctest::Approx(cfg.key_on_coef));

  // Releasing clears the board: silence during silence is perfect.
  auto rest = HandEnv::rest_state(env.hand_config());
  const StepInfo& quiet = env.step(rest.data());
  CHECK_FALSE(quiet.false_positive);
  CHECK(quiet.key_press == doctest::Approx(1.0));
  CHECK(quiet.active_keys.empty());
  CHECK(env.done());
  CHECK_THROWS_AS(env.step(rest.data()), std::logic_error);
}

TEST_CASE("missed goals count as misses, not false positives") {
  Keyboard kb = build_keyboard();
  PianoRoll roll = one_note_roll(50, kMiddle, 0, 1, 2);
  EnvConfig cfg;
  HandEnv env(kb, Hand::kRight, roll, GapModel::identity(), cfg);
  env.reset(1);
  auto rest = HandEnv::rest_state(env.hand_config());
  const StepInfo& info = env.step(rest.data());
  CHECK(info.hits == 0);
  CHECK(info.misses == 1);
  CHECK_FALSE(info.false_positive);
  CHECK(info.key_match ==
        doctest::Approx(reward_kernel(1.0, cfg.kernel_scale)));
}

TEST_CASE("observation layout and region bounds") {
  Keyboard kb = build_keyboard();
  PianoRoll roll;
  roll.name = "region";
  roll.num_steps = 4;
  roll.notes.push_back({0, 1, 50, 1, kIndex});
  roll.notes.push_back({2, 1, 56, 1, kRing});
  roll.sort_notes();
  EnvConfig cfg;
  HandEnv env(kb, Hand::kRight, roll, GapModel::identity(), cfg);
  CHECK(env.region_lo() == 48);  // used span 50..56 plus 2 keys margin
  CHECK(env.region_hi() == 58);
  int region = env.region_hi() - env.region_lo() + 1;
  CHECK(env.obs_dim() ==
        kJointsPerHand + 2 + region + cfg.goal_horizon * region +
            cfg.goal_horizon * kNumFingers + 1);
  const auto& obs = env.reset(1);
  REQUIRE(static_cast<int>(obs.size()) == env.obs_dim());
  // Goal-plane one-hots: step 0 goal key 50 in horizon slot 0, step 2 goal
  // key 56 in horizon slot 2.
  int base = kJointsPerHand + 2 + region;
  CHECK(obs[base + (50 - 48)] == 1.0);
  CHECK(obs[base + 2 * region + (56 - 48)] == 1.0);
  CHECK(obs[base + region + (50 - 48)] == 0.0);
  // Finger one-hots for the same horizon slots.
  int fbase = base + cfg.goal_horizon * region;
  CHECK(obs[fbase + kIndex] == 1.0);
  CHECK(obs[fbase + 2 * kNumFingers + kRing] == 1.0);
  // Progress scalar is the last slot.
  CHECK(obs.back() == 0.0);
  auto rest = HandEnv::rest_state(env.hand_config());
  env.step(rest.data());
  CHECK(env.obs().back() == doctest::Approx(0.25));
}

TEST_CASE("bimanual lockstep merges both hands' logs") {
  PianoRoll roll;
  roll.name = "duo";
  roll.num_steps = 2;
  roll.notes.push_back({0, 1, 30, 0, kMiddle});
  roll.notes.push_back({0, 1, 50, 1, kMiddle});
  roll.sort_notes();
  EnvConfig cfg;
  BimanualEnv env(roll, GapModel::identity(), GapModel::identity(), cfg);
  env.reset(1);
  auto lcmd = press_cmd(env.hand(Hand::kLeft).hand_config(), kMiddle);
  auto rcmd = press_cmd(env.hand(Hand::kRight).hand_config(), kMiddle);
  env.step(lcmd.data(), rcmd.data());
  CHECK(env.merged_active_keys() == std::vector<int>{30, 50});
  CHECK(env.hand(Hand::kLeft).last_info().hits == 1);
  CHECK(env.hand(Hand::kRight).last_info().hits == 1);
  CHECK(env.t() == 1);
  CHECK_FALSE(env.done());
}
