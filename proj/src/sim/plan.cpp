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

#include "sim/plan.hpp"

#include <algorithm>
#include <cmath>

#include "sim/env.hpp"
#include "util/errors.hpp"

namespace clavier {

namespace {

// Lateral angle that puts a pressing fingertip over the key's center line.
double aim_lateral(const HandConfig& cfg, double key_center_y,
                   double wrist_y, int finger) {
  double dy = key_center_y - wrist_y - cfg.finger_dy[finger];
  double s = std::clamp(dy / cfg.press_radius(), -1.0, 1.0);
  return std::clamp(std::asin(s), cfg.joint_lo[0], cfg.joint_hi[0]);
}

void plan_hand(const Keyboard& kb, const PianoRoll& roll, Hand hand,
               HandTrajectory& out) {
  HandConfig cfg = make_hand_config(hand);
  out.wrist = script_wrist(cfg, kb, roll);
  int num_states = roll.num_steps + 1;
  out.states.assign(num_states, HandEnv::rest_state(cfg));

  struct Duty {
    int lo, hi;  // pinned state range [lo, hi]
    int key;
  };
  std::array<std::vector<Duty>, kNumFingers> duties;
  for (const Note& n : roll.notes) {
    if (n.hand != static_cast<int>(hand)) continue;
    duties[n.finger].push_back(
        {n.onset + 1, n.onset + n.duration, n.key});
  }

  for (int f = 0; f < kNumFingers; ++f) {
    auto& dv = duties[f];
    std::sort(dv.begin(), dv.end(),
              [](const Duty& a, const Duty& b) { return a.lo < b.lo; });
    std::vector<int> pressing(num_states, -1);
    for (const Duty& d : dv) {
      for (int s = d.lo; s <= d.hi; ++s) pressing[s] = d.key;
    }
    double* q = nullptr;
    auto set_state = [&](int s, double lat, bool press) {
      q = out.states[s].data() + f * kJointsPerFinger;
      q[0] = lat;
      q[1] = press ? cfg.press_flex[0] : cfg.rest_flex[0];
      q[2] = press ? cfg.press_flex[1] : cfg.rest_flex[1];
    };
    // Press states, exactly over each note's sounding steps.
    for (const Duty& d : dv) {
      for (int s = d.lo; s <= d.hi; ++s) {
        set_state(s, aim_lateral(cfg, kb.keys[d.key].center_y,
                                 out.wrist.y[s], f), true);
      }
    }
    // Hovering states aim at the next upcoming key (or hold the last one).
    size_t next = 0;
    for (int s = 0; s < num_states; ++s) {
      if (pressing[s] >= 0) continue;
      while (next < dv.size() && dv[next].hi < s) ++next;
      int key = next < dv.size()
                    ? dv[next].key
                    : (dv.empty() ? -1 : dv.back().key);
      if (key < 0) break;  // finger never plays: stay at rest
      set_state(s, aim_lateral(cfg, kb.keys[key].center_y, out.wrist.y[s], f),
                false);
    }
  }
}

}  // namespace

Trajectory plan_trajectory(const Keyboard& kb, const PianoRoll& roll) {
  roll.validate();
  Trajectory t;
  t.song = roll.name;
  t.num_steps = roll.num_steps;
  plan_hand(kb, roll, Hand::kLeft, t.hands[0]);
  plan_hand(kb, roll, Hand::kRight, t.hands[1]);
  return t;
}

Trajectory rest_trajectory(const Keyboard& kb, const PianoRoll& roll) {
  roll.validate();
  Trajectory t;
  t.song = roll.name;
  t.num_steps = roll.num_steps;
  for (int h = 0; h < kNumHands; ++h) {
    HandConfig cfg = make_hand_config(static_cast<Hand>(h));
    t.hands[h].wrist = script_wrist(cfg, kb, roll);
    t.hands[h].states.assign(roll.num_steps + 1, HandEnv::rest_state(cfg));
  }
  return t;
}

}  // namespace clavier
