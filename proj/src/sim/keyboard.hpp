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

#ifndef CLAVIER_SIM_KEYBOARD_HPP_
#define CLAVIER_SIM_KEYBOARD_HPP_

#include <array>
#include <vector>

#include "score/score.hpp"

namespace clavier {

// Keyboard frame: origin at the back fence on the low (A0) end.
//   +x toward the player, +y along the keyboard toward higher keys, +z up.
// White key tops sit at z = 0; black key tops are raised. Fingers reach in
// from the player side, so pressing a black key means a *smaller* wrist x
// than pressing the front of a white key.
struct Vec3 {
  double x = 0, y = 0, z = 0;
};

struct KeySpec {
  int key = 0;        // 0..87
  bool black = false;
  double center_y = 0;
  double half_width_y = 0;
  double x_min = 0, x_max = 0;  // pressable span along x
  double top_z = 0;             // resting top surface height
  double contact_x = 0;         // recommended fingertip x for this key
};

struct Keyboard {
  std::array<KeySpec, kNumKeys> keys;
  double travel = 0.010;          // full key dip, both colors
  double activation = 0.5;        // fraction of travel at which a key sounds
  double floor_margin = 0.002;    // fingertip stop below full travel
  double white_pitch = 0.0235;    // y distance between adjacent white keys
};

Keyboard build_keyboard();

bool is_black_key(int key);

// Lowest z a fingertip may occupy at (x, y): the shallowest floor among the
// keys whose footprint contains the point (a raised black key body stops the
// finger before the white key below it can bottom out).
double depth_clamp(const Keyboard& kb, double x, double y, double z);

struct KeyState {
  std::vector<double> depression;  // fraction of travel, 0..1, per key
  std::vector<uint8_t> active;     // sounding flag per key

  KeyState() : depression(kNumKeys, 0.0), active(kNumKeys, 0) {}
};

// Quasi-static key response: each key's depression this step is determined
// by the deepest fingertip inside its footprint (released keys return to
// rest within the step); a key sounds while depression exceeds the
// activation threshold (shifted by the calibration offset `threshold_shift`).
void step_keys(const Keyboard& kb, const std::vector<Vec3>& fingertips,
               double threshold_shift, KeyState& state);

}  // namespace clavier

#endif  // CLAVIER_SIM_KEYBOARD_HPP_
