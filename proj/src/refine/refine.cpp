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

#include "refine/refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sim/rollout.hpp"
#include "util/config.hpp"
#include "util/errors.hpp"

namespace clavier {

std::array<std::vector<int>, kNumFingers> assign_fingers(
    const std::array<int, kNumFingers>& target_key,
    const std::vector<int>& active_keys) {
  std::array<std::vector<int>, kNumFingers> out;
  for (int key : active_keys) {
    int best = -1;
    for (int f = 0; f < kNumFingers; ++f) {
      if (target_key[f] < 0) continue;
      if (best < 0) {
        best = f;
        continue;
      }
      int d_new = std::abs(key - target_key[f]);
      int d_best = std::abs(key - target_key[best]);
      if (d_new < d_best ||
          (d_new == d_best && target_key[f] < target_key[best])) {
        best = f;
      }
    }
    if (best >= 0) out[best].push_back(key);
  }
  return out;
}

double signed_error(int target_key, const std::vector<int>& pressed,
                    double delta) {
  if (target_key < 0 || pressed.empty()) return 0.0;
  int closest = pressed.front();
  for (int key : pressed) {
    int d = std::abs(key - target_key);
    int d_best = std::abs(closest - target_key);
    if (d < d_best || (d == d_best && key < closest)) closest = key;
  }
  if (closest < target_key) return delta;
  if (closest > target_key) return -delta;
  return 0.0;
}

double chunk_correction(const std::vector<double>& step_errors, int t,
                        int chunk_len, int lookahead) {
  double sum = 0.0;
  int last = t + chunk_len + lookahead;
  for (int j = t; j <= last; ++j) {
    if (j >= 0 && j < static_cast<int>(step_errors.size())) {
      sum += step_errors[j];
    }
  }
  return sum / static_cast<double>(chunk_len + lookahead);
}

void refine_iteration(HandTrajectory& traj, const HandConfig& cfg,
                      const PressLog& log, double delta,
                      const RefineParams& params) {
  const int T = static_cast<int>(log.size());
  if (static_cast<int>(traj.states.size()) != T + 1) {
    throw ValidationError("press log and trajectory cover different spans");
  }
  std::array<std::vector<double>, kNumFingers> errors;
  for (auto& e : errors) e.assign(T, 0.0);
  for (int t = 0; t < T; ++t) {
    auto attributed = assign_fingers(log[t].target_key, log[t].active_keys);
    for (int f = 0; f < kNumFingers; ++f) {
      errors[f][t] = signed_error(log[t].target_key[f], attributed[f], delta);
    }
  }

  const double lo = cfg.joint_lo[0], hi = cfg.joint_hi[0];
  for (int t0 = 0; t0 < T; t0 += params.chunk_len) {
    std::array<double, kNumFingers> corr{};
    for (int f = 0; f < kNumFingers; ++f) {
      corr[f] =
          chunk_correction(errors[f], t0, params.chunk_len, params.lookahead);
    }
    // Single-hop coupling into anatomically adjacent fingers.
    std::array<double, kNumFingers> shift{};
    for (int f = 0; f < kNumFingers; ++f) {
      shift[f] = corr[f];
      if (f > 0) shift[f] += params.neighbor_coef * corr[f - 1];
      if (f + 1 < kNumFingers) shift[f] += params.neighbor_coef * corr[f + 1];
    }
    int s_end = std::min(t0 + params.chunk_len, T);
    for (int s = t0 + 1; s <= s_end; ++s) {
      for (int f = 0; f < kNumFingers; ++f) {
        double& lat = traj.states[s][f * 3];
        lat = std::clamp(lat + shift[f], lo, hi);
      }
    }
  }
}

namespace {

PressLog build_press_log(const std::vector<std::vector<GoalNote>>& goals,
                         const HandRolloutLog& log) {
  PressLog out(goals.size());
  for (size_t t = 0; t < goals.size(); ++t) {
    for (const GoalNote& g : goals[t]) {
      if (g.finger >= 0 && g.finger < kNumFingers) {
        out[t].target_key[g.finger] = g.key;
      }
    }
    out[t].active_keys = log.active_keys[t];
  }
  return out;
}

}  // namespace

RefineResult refine(const Trajectory& input, const PianoRoll& roll,
                    const GapModel& left_gap, const GapModel& right_gap,
                    const EnvConfig& env_cfg, const RefineParams& params,
                    uint64_t seed) {
  if (input.num_steps != roll.num_steps) {
    throw ValidationError("trajectory was planned for a different score");
  }
  BimanualEnv env(roll, left_gap, right_gap, env_cfg);
  std::array<std::vector<std::vector<GoalNote>>, kNumHands> goals = {
      roll.goals(Hand::kLeft), roll.goals(Hand::kRight)};

  HandConfig cfgs[kNumHands] = {make_hand_config(Hand::kLeft),
                                make_hand_config(Hand::kRight)};
  double delta0 = params.delta_init;
  if (delta0 < 0.0) {
    delta0 = 0.5 * env.keyboard().white_pitch / cfgs[1].press_radius();
  }

  Trajectory current = input;
  RolloutResult r = rollout_trajectory(env, current, seed);

  RefineResult res;
  res.best = current;
  res.best_f1 = r.f1.f1;
  res.best_iteration = 0;
  res.f1_history.push_back(r.f1.f1);

  double delta = delta0;
  for (int i = 1; i <= params.iterations; ++i) {
    for (int h = 0; h < kNumHands; ++h) {
      if (!roll.has_notes(static_cast<Hand>(h))) continue;
      PressLog log = build_press_log(goals[h], r.hands[h]);
      refine_iteration(current.hands[h], cfgs[h], log, delta, params);
    }
    r = rollout_trajectory(env, current, seed + static_cast<uint64_t>(i));
    res.f1_history.push_back(r.f1.f1);
    if (r.f1.f1 > res.best_f1) {
      res.best = current;
      res.best_f1 = r.f1.f1;
      res.best_iteration = i;
    }
    delta *= params.anneal;
  }
  return res;
}

RefineParams make_refine_params(const Config& config) {
  RefineParams p;
  p.iterations = static_cast<int>(config.i64("refine.iterations",
                                             p.iterations));
  p.chunk_len = static_cast<int>(config.i64("refine.chunk", p.chunk_len));
  p.lookahead = static_cast<int>(config.i64("refine.lookahead", p.lookahead));
  p.delta_init = config.f64("refine.delta_init", p.delta_init);
  p.anneal = config.f64("refine.anneal", p.anneal);
  p.neighbor_coef = config.f64("refine.neighbor_coef", p.neighbor_coef);
  return p;
}

}  // namespace clavier
