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

#ifndef CLAVIER_SIM_ENV_HPP_
#define CLAVIER_SIM_ENV_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "score/score.hpp"
#include "sim/hand.hpp"
#include "sim/keyboard.hpp"
#include "util/rng.hpp"

namespace clavier {

// Injected actuation/sensing gap that turns the nominal simulator into a
// "pseudo-real" device. All fields default to the nominal (identity) values;
// with the identity model the gapped environment is bit-identical to the
// nominal one under equal commands and seeds.
struct GapModel {
  std::array<double, kNumFingers> lateral_bias{};  // rad, per finger
  double wrist_y_offset = 0.0;                     // m
  double lag_alpha = 1.0;      // per-substep command tracking gain
  double motor_noise_sd = 0.0; // rad, per actuated joint per substep
  double threshold_shift = 0.0;

  bool is_identity() const;

  static GapModel identity();
  // Pure miscalibration: per-finger lateral offsets and a wrist offset,
  // perfect tracking, no noise. Drawn per hand from the preset seed.
  static GapModel bias_only(Hand hand, uint64_t seed);
  // Full gap: bias plus sluggish tracking, motor noise and a stiffer
  // activation point, calibrated so that a nominal open-loop trajectory
  // scores roughly half of its nominal value.
  static GapModel realistic(Hand hand, uint64_t seed);

  // Preset by CLI name: identity | bias-only | realistic.
  static GapModel preset(const std::string& name, Hand hand, uint64_t seed);
};

struct EnvConfig {
  int goal_horizon = 10;   // steps of goals visible ahead (including now)
  int region_margin = 2;   // keys of padding around the hand's used span
  int substeps = 8;        // actuation integration per 100 ms step
  double fingering_coef = 1.0;
  double key_press_coef = 1.0;
  double energy_coef = 0.01;
  double key_on_coef = 0.7;        // weight inside the key-press term
  double kernel_scale = 0.05;      // distance at which the kernel decays to 0.1
};

// exp(-ln10 * (d/scale)^2): 1 at 0, 0.1 at scale.
double reward_kernel(double d, double scale);

struct StepInfo {
  double reward = 0.0;  // assembled simulation-training reward
  double fingering = 0.0;
  double key_press = 0.0;
  double key_match = 0.0;  // goal-key depression term inside key_press
  double energy_l1 = 0.0;
  bool false_positive = false;
  int hits = 0, misses = 0, extras = 0;      // vs this step's goal set
  std::vector<int> active_keys;              // sounding after this step
  std::array<int, kNumFingers> pressed_by_finger{-1, -1, -1};
};

// Single-hand environment on the shared keyboard. One step covers 100 ms:
// the 9 commanded joint targets (state s_{t+1}) are tracked through
// `substeps` first-order lag updates with bias and motor noise injected by
// the gap model, the wrist follows its script, and key state, reward and
// observation are evaluated at the step boundary against goals[t].
class HandEnv {
 public:
  HandEnv(const Keyboard& kb, Hand hand, const PianoRoll& roll,
          const GapModel& gap, const EnvConfig& cfg);

  const std::vector<double>& reset(uint64_t seed);
  const StepInfo& step(const double* cmd9);

  int t() const { return t_; }
  int num_steps() const { return num_steps_; }
  bool done() const { return t_ >= num_steps_; }
  int obs_dim() const;
  int action_dim() const { return kJointsPerHand; }
  const std::vector<double>& obs() const { return obs_; }
  const StepInfo& last_info() const { return info_; }

  int region_lo() const { return region_lo_; }
  int region_hi() const { return region_hi_; }
  const HandConfig& hand_config() const { return hand_cfg_; }
  const Keyboard& keyboard() const { return kb_; }
  const WristTrack& wrist_track() const { return wrist_; }
  const std::vector<std::vector<GoalNote>>& goals() const { return goals_; }
  const std::array<double, kJointsPerHand>& command() const { return cmd_; }
  const std::array<double, kJointsPerHand>& actual() const { return q_; }

  // Reward on real-device observability: the key-press term only.
  double real_reward(const StepInfo& info) const;
  void set_key_on_coef(double c) { key_on_coef_ = c; }
  double key_on_coef() const { return key_on_coef_; }

  // Canonical starting command state: laterals centered, fingers hovering.
  static std::array<double, kJointsPerHand> rest_state(const HandConfig& cfg);

 private:
  void build_obs();
  void eval_keys_and_reward(const double* cmd9);

  const Keyboard& kb_;
  HandConfig hand_cfg_;
  GapModel gap_;
  EnvConfig cfg_;
  double key_on_coef_;
  int num_steps_;
  std::vector<std::vector<GoalNote>> goals_;
  WristTrack wrist_;
  int region_lo_ = 0, region_hi_ = 0;
  double region_center_y_ = 0.0;

  int t_ = 0;
  std::array<double, kJointsPerHand> q_{};    // actual joint positions
  std::array<double, kJointsPerHand> cmd_{};  // last commanded state s_t
  Vec3 wrist_actual_{};
  KeyState keys_;
  StepInfo info_;
  std::vector<double> obs_;
  Rng noise_rng_{0};
};

// Both hands stepped in lockstep over one score. Hands without notes still
// run (resting) so merged logs always cover the full keyboard.
class BimanualEnv {
 public:
  BimanualEnv(const PianoRoll& roll, const GapModel& left_gap,
              const GapModel& right_gap, const EnvConfig& cfg);

  void reset(uint64_t seed);
  void step(const double* cmd_left, const double* cmd_right);

  HandEnv& hand(Hand h) { return h == Hand::kLeft ? *left_ : *right_; }
  const HandEnv& hand(Hand h) const {
    return h == Hand::kLeft ? *left_ : *right_;
  }
  int t() const { return left_->t(); }
  int num_steps() const { return left_->num_steps(); }
  bool done() const { return left_->done(); }
  std::vector<int> merged_active_keys() const;
  const PianoRoll& roll() const { return roll_; }
  const Keyboard& keyboard() const { return kb_; }

 private:
  Keyboard kb_;
  PianoRoll roll_;
  std::unique_ptr<HandEnv> left_, right_;
};

EnvConfig make_env_config(const class Config& config);

}  // namespace clavier

#endif  // CLAVIER_SIM_ENV_HPP_
