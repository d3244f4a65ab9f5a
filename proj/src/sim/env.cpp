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

#include "sim/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "util/config.hpp"
#include "util/errors.hpp"

namespace clavier {

double reward_kernel(double d, double scale) {
  double r = d / scale;
  return std::exp(-std::numbers::ln10 * r * r);
}

bool GapModel::is_identity() const {
  return lateral_bias[0] == 0 && lateral_bias[1] == 0 && lateral_bias[2] == 0 &&
         wrist_y_offset == 0 && lag_alpha == 1.0 && motor_noise_sd == 0 &&
         threshold_shift == 0;
}

GapModel GapModel::identity() { return GapModel{}; }

namespace {

// Lateral angle subtended by one white key at pressing radius.
double lateral_per_key() {
  static const double v = [] {
    HandConfig cfg = make_hand_config(Hand::kRight);
    return build_keyboard().white_pitch / cfg.press_radius();
  }();
  return v;
}

}  // namespace

GapModel GapModel::bias_only(Hand hand, uint64_t seed) {
  Rng rng(Rng::derive(seed, hand == Hand::kLeft ? "gap-bias-L" : "gap-bias-R"));
  GapModel g;
  // Pure lateral miscalibration, up to 0.6 key-widths per finger: enough to
  // push a centered press onto the neighboring key, and within the reach of
  // the refinement step schedule. Everything else stays nominal.
  for (int f = 0; f < kNumFingers; ++f) {
    double mag = rng.uniform(0.3, 0.6) * lateral_per_key();
    g.lateral_bias[f] = rng.bernoulli(0.5) ? mag : -mag;
  }
  return g;
}

GapModel GapModel::realistic(Hand hand, uint64_t seed) {
  Rng rng(Rng::derive(seed, hand == Hand::kLeft ? "gap-real-L" : "gap-real-R"));
  GapModel g;
  for (int f = 0; f < kNumFingers; ++f) {
    double mag = rng.uniform(0.2, 0.55) * lateral_per_key();
    g.lateral_bias[f] = rng.bernoulli(0.5) ? mag : -mag;
  }
  g.wrist_y_offset = rng.uniform(-0.3, 0.3) * build_keyboard().white_pitch;
  g.lag_alpha = rng.uniform(0.10, 0.16);
  g.motor_noise_sd = 0.004;
  g.threshold_shift = 0.12;
  return g;
}

GapModel GapModel::preset(const std::string& name, Hand hand, uint64_t seed) {
  if (name == "identity") return identity();
  if (name == "bias-only") return bias_only(hand, seed);
  if (name == "realistic") return realistic(hand, seed);
  throw ValidationError("unknown gap preset \"" + name +
                        "\" (available: identity, bias-only, realistic)");
}

// ---------------------------------------------------------------------------

std::array<double, kJointsPerHand> HandEnv::rest_state(const HandConfig& cfg) {
  std::array<double, kJointsPerHand> s{};
  for (int f = 0; f < kNumFingers; ++f) {
    s[f * kJointsPerFinger + 0] = 0.0;
    s[f * kJointsPerFinger + 1] = cfg.rest_flex[0];
    s[f * kJointsPerFinger + 2] = cfg.rest_flex[1];
  }
  return s;
}

HandEnv::HandEnv(const Keyboard& kb, Hand hand, const PianoRoll& roll,
                 const GapModel& gap, const EnvConfig& cfg)
    : kb_(kb),
      hand_cfg_(make_hand_config(hand)),
      gap_(gap),
      cfg_(cfg),
      key_on_coef_(cfg.key_on_coef),
      num_steps_(roll.num_steps),
      goals_(roll.goals(hand)),
      wrist_(script_wrist(hand_cfg_, kb, roll)) {
  std::vector<int> used = roll.used_keys(hand);
  if (used.empty()) {
    // Hand rests; observe a small region around its parking spot.
    int park = hand == Hand::kLeft ? 25 : 62;
    region_lo_ = park - cfg_.region_margin;
    region_hi_ = park + cfg_.region_margin;
  } else {
    region_lo_ = used.front() - cfg_.region_margin;
    region_hi_ = used.back() + cfg_.region_margin;
  }
  region_lo_ = std::max(0, region_lo_);
  region_hi_ = std::min(kNumKeys - 1, region_hi_);
  region_center_y_ = 0.5 * (kb_.keys[region_lo_].center_y +
                            kb_.keys[region_hi_].center_y);
  reset(0);
}

int HandEnv::obs_dim() const {
  int region = region_hi_ - region_lo_ + 1;
  return kJointsPerHand + 2 + region + cfg_.goal_horizon * region +
         cfg_.goal_horizon * kNumFingers + 1;
}

const std::vector<double>& HandEnv::reset(uint64_t seed) {
  noise_rng_ = Rng(Rng::derive(
      seed, hand_cfg_.hand == Hand::kLeft ? "motor-noise-L" : "motor-noise-R"));
  t_ = 0;
  cmd_ = rest_state(hand_cfg_);
  q_ = cmd_;
  for (int f = 0; f < kNumFingers; ++f) {
    q_[f * kJointsPerFinger] += gap_.lateral_bias[f];
  }
  wrist_actual_ = {wrist_.x[0], wrist_.y[0] + gap_.wrist_y_offset, wrist_.z};
  keys_ = KeyState();
  info_ = StepInfo();
  build_obs();
  return obs_;
}

const StepInfo& HandEnv::step(const double* cmd9) {
  if (done()) throw std::logic_error("step() after the roll ended");
  std::array<double, kJointsPerHand> next;
  for (int d = 0; d < kJointsPerHand; ++d) {
    next[d] = std::clamp(cmd9[d], hand_cfg_.lo(d % kJointsPerFinger),
                         hand_cfg_.hi(d % kJointsPerFinger));
  }
  double wx0 = wrist_.x[t_], wy0 = wrist_.y[t_];
  double wx1 = wrist_.x[t_ + 1], wy1 = wrist_.y[t_ + 1];
  for (int k = 1; k <= cfg_.substeps; ++k) {
    double a = static_cast<double>(k) / cfg_.substeps;
    for (int d = 0; d < kJointsPerHand; ++d) {
      double target = cmd_[d] + a * (next[d] - cmd_[d]);
      if (d % kJointsPerFinger == 0) {
        target += gap_.lateral_bias[d / kJointsPerFinger];
      }
      if (gap_.lag_alpha == 1.0) {
        q_[d] = target;  // exact tracking stays bit-exact
      } else {
        q_[d] += gap_.lag_alpha * (target - q_[d]);
      }
      if (gap_.motor_noise_sd > 0) {
        q_[d] += gap_.motor_noise_sd * noise_rng_.normal();
      }
      q_[d] = std::clamp(q_[d], hand_cfg_.lo(d % kJointsPerFinger),
                         hand_cfg_.hi(d % kJointsPerFinger));
    }
    wrist_actual_.x = wx0 + a * (wx1 - wx0);
    wrist_actual_.y = wy0 + a * (wy1 - wy0) + gap_.wrist_y_offset;
  }
  double prev_cmd[kJointsPerHand];
  std::copy(cmd_.begin(), cmd_.end(), prev_cmd);
  cmd_ = next;

  eval_keys_and_reward(prev_cmd);
  ++t_;
  build_obs();
  return info_;
}

void HandEnv::eval_keys_and_reward(const double* prev_cmd) {
  auto tips = forward_kinematics(hand_cfg_, wrist_actual_, q_.data());
  std::vector<Vec3> clamped(tips.begin(), tips.end());
  for (Vec3& tip : clamped) {
    tip.z = depth_clamp(kb_, tip.x, tip.y, tip.z);
  }
  step_keys(kb_, clamped, gap_.threshold_shift, keys_);

  StepInfo info;
  info.active_keys.clear();
  for (int k = 0; k < kNumKeys; ++k) {
    if (keys_.active[k]) info.active_keys.push_back(k);
  }
  // Deepest pressed key per finger (true attribution, for logs).
  double threshold = kb_.activation + gap_.threshold_shift;
  for (int f = 0; f < kNumFingers; ++f) {
    double best = threshold;
    info.pressed_by_finger[f] = -1;
    for (int k = 0; k < kNumKeys; ++k) {
      const KeySpec& s = kb_.keys[k];
      if (clamped[f].x < s.x_min || clamped[f].x > s.x_max ||
          std::abs(clamped[f].y - s.center_y) > s.half_width_y) {
        continue;
      }
      double depth =
          std::clamp((s.top_z - clamped[f].z) / kb_.travel, 0.0, 1.0);
      if (depth > best) {
        best = depth;
        info.pressed_by_finger[f] = k;
      }
    }
  }

  const std::vector<GoalNote>& goal = goals_[t_];
  // Fingering shaping: fingertip proximity to each target key's press point.
  if (goal.empty()) {
    info.fingering = 1.0;
  } else {
    double sum = 0.0;
    for (const GoalNote& gn : goal) {
      const KeySpec& s = kb_.keys[gn.key];
      double d;
      if (gn.finger == kFingerUnassigned) {
        d = 0.0;  // unfingered goals do not shape
      } else {
        const Vec3& tip = clamped[gn.finger];
        double dx = tip.x - s.contact_x;
        double dy = tip.y - s.center_y;
        double dz = tip.z - s.top_z;
        d = std::sqrt(dx * dx + dy * dy + dz * dz);
      }
      sum += reward_kernel(d, cfg_.kernel_scale);
    }
    info.fingering = sum / static_cast<double>(goal.size());
  }
  // Key-press term: how fully each goal key is depressed, plus a bonus for
  // sounding no extra keys.
  double match;
  if (goal.empty()) {
    match = 1.0;
  } else {
    double sum = 0.0;
    for (const GoalNote& gn : goal) {
      sum += reward_kernel(1.0 - keys_.depression[gn.key], cfg_.kernel_scale);
    }
    match = sum / static_cast<double>(goal.size());
  }
  for (int k : info.active_keys) {
    bool wanted = std::any_of(goal.begin(), goal.end(),
                              [k](const GoalNote& gn) { return gn.key == k; });
    if (!wanted) info.false_positive = true;
  }
  info.key_match = match;
  info.key_press = key_on_coef_ * match +
                   (1.0 - key_on_coef_) * (info.false_positive ? 0.0 : 1.0);

  for (int d = 0; d < kJointsPerHand; ++d) {
    info.energy_l1 += std::abs(cmd_[d] - prev_cmd[d]);
  }
  info.reward = cfg_.fingering_coef * info.fingering +
                cfg_.key_press_coef * info.key_press -
                cfg_.energy_coef * info.energy_l1;

  for (const GoalNote& gn : goal) {
    if (keys_.active[gn.key]) ++info.hits;
    else ++info.misses;
  }
  info.extras =
      static_cast<int>(info.active_keys.size()) - info.hits;
  info_ = std::move(info);
}

double HandEnv::real_reward(const StepInfo& info) const {
  // Key-press term only: sounding keys are all a real device can report.
  // The schedule weight is applied at call time.
  return key_on_coef_ * info.key_match +
         (1.0 - key_on_coef_) * (info.false_positive ? 0.0 : 1.0);
}

void HandEnv::build_obs() {
  int region = region_hi_ - region_lo_ + 1;
  obs_.assign(obs_dim(), 0.0);
  int at = 0;
  // Measured proprioception: encoders report commanded-frame positions, so
  // static calibration offsets stay latent while lag and noise show through.
  for (int d = 0; d < kJointsPerHand; ++d) {
    double v = q_[d];
    if (d % kJointsPerFinger == 0) v -= gap_.lateral_bias[d / kJointsPerFinger];
    obs_[at++] = v;
  }
  obs_[at++] = (wrist_actual_.x - 0.15) / 0.1;
  obs_[at++] =
      (wrist_actual_.y - gap_.wrist_y_offset - region_center_y_) / 0.1;
  for (int k = region_lo_; k <= region_hi_; ++k) {
    obs_[at++] = keys_.depression[k];
  }
  for (int h = 0; h < cfg_.goal_horizon; ++h) {
    int step = t_ + h;
    if (step < num_steps_) {
      for (const GoalNote& gn : goals_[step]) {
        if (gn.key >= region_lo_ && gn.key <= region_hi_) {
          obs_[at + gn.key - region_lo_] = 1.0;
        }
      }
    }
    at += region;
  }
  for (int h = 0; h < cfg_.goal_horizon; ++h) {
    int step = t_ + h;
    if (step < num_steps_) {
      for (const GoalNote& gn : goals_[step]) {
        if (gn.finger != kFingerUnassigned) obs_[at + gn.finger] = 1.0;
      }
    }
    at += kNumFingers;
  }
  obs_[at++] = static_cast<double>(t_) / num_steps_;
}

// ---------------------------------------------------------------------------

BimanualEnv::BimanualEnv(const PianoRoll& roll, const GapModel& left_gap,
                         const GapModel& right_gap, const EnvConfig& cfg)
    : kb_(build_keyboard()), roll_(roll) {
  left_ = std::make_unique<HandEnv>(kb_, Hand::kLeft, roll_, left_gap, cfg);
  right_ = std::make_unique<HandEnv>(kb_, Hand::kRight, roll_, right_gap, cfg);
}

void BimanualEnv::reset(uint64_t seed) {
  left_->reset(seed);
  right_->reset(seed);
}

void BimanualEnv::step(const double* cmd_left, const double* cmd_right) {
  left_->step(cmd_left);
  right_->step(cmd_right);
}

std::vector<int> BimanualEnv::merged_active_keys() const {
  std::vector<int> merged = left_->last_info().active_keys;
  const std::vector<int>& r = right_->last_info().active_keys;
  merged.insert(merged.end(), r.begin(), r.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return merged;
}

EnvConfig make_env_config(const Config& config) {
  EnvConfig cfg;
  cfg.goal_horizon =
      static_cast<int>(config.i64("env.goal_horizon", cfg.goal_horizon));
  cfg.region_margin =
      static_cast<int>(config.i64("env.region_margin", cfg.region_margin));
  cfg.substeps = static_cast<int>(config.i64("env.substeps", cfg.substeps));
  cfg.fingering_coef = config.f64("env.fingering_coef", cfg.fingering_coef);
  cfg.key_press_coef = config.f64("env.key_press_coef", cfg.key_press_coef);
  cfg.energy_coef = config.f64("env.energy_coef", cfg.energy_coef);
  cfg.key_on_coef = config.f64("env.key_on_coef", cfg.key_on_coef);
  cfg.kernel_scale = config.f64("env.kernel_scale", cfg.kernel_scale);
  return cfg;
}

}  // namespace clavier
