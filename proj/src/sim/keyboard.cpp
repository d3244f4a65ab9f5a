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

#include "sim/keyboard.hpp"

#include <algorithm>
#include <cmath>

namespace clavier {

bool is_black_key(int key) {
  // Pitch classes relative to C; key 0 is A0 (MIDI 21).
  static constexpr bool kBlack[12] = {false, true, false, true, false, false,
                                      true,  false, true, false, true, false};
  return kBlack[(key + kLowestMidiNote) % 12];
}

Keyboard build_keyboard() {
  Keyboard kb;
  constexpr double kWhiteHalf = 0.011750;   // white key half width
  constexpr double kBlackHalf = 0.006;      // black key half width
  constexpr double kBlackRaise = 0.009;     // black top above white top
  constexpr double kWhiteXMax = 0.150;      // white front edge
  constexpr double kBlackXMax = 0.095;      // black front edge
  constexpr double kWhiteContact = 0.115;   // comfortable white press point
  constexpr double kBlackContact = 0.050;   // comfortable black press point

  int white_index = 0;
  for (int k = 0; k < kNumKeys; ++k) {
    KeySpec& spec = kb.keys[k];
    spec.key = k;
    spec.black = is_black_key(k);
    if (!spec.black) {
      spec.center_y = (white_index + 0.5) * kb.white_pitch;
      spec.half_width_y = kWhiteHalf;
      spec.x_min = 0.0;
      spec.x_max = kWhiteXMax;
      spec.top_z = 0.0;
      spec.contact_x = kWhiteContact;
      ++white_index;
    } else {
      // Centered on the boundary between its neighbouring whites.
      spec.center_y = white_index * kb.white_pitch;
      spec.half_width_y = kBlackHalf;
      spec.x_min = 0.0;
      spec.x_max = kBlackXMax;
      spec.top_z = kBlackRaise;
      spec.contact_x = kBlackContact;
    }
  }
  return kb;
}

namespace {

inline bool in_footprint(const KeySpec& s, double x, double y) {
  return x >= s.x_min && x <= s.x_max && std::abs(y - s.center_y) <= s.half_width_y;
}

}  // namespace

double depth_clamp(const Keyboard& kb, double x, double y, double z) {
  // Default floor: a fully pressed white key.
  double floor_z = -(kb.travel + kb.floor_margin);
  for (const KeySpec& s : kb.keys) {
    if (in_footprint(s, x, y)) {
      floor_z = std::max(floor_z, s.top_z - kb.travel - kb.floor_margin);
    }
  }
  return std::max(z, floor_z);
}

void step_keys(const Keyboard& kb, const std::vector<Vec3>& fingertips,
               double threshold_shift, KeyState& state) {
  double threshold = kb.activation + threshold_shift;
  for (int k = 0; k < kNumKeys; ++k) {
    const KeySpec& s = kb.keys[k];
    double depth = 0.0;
    for (const Vec3& tip : fingertips) {
      if (!in_footprint(s, tip.x, tip.y)) continue;
      depth = std::max(depth, (s.top_z - tip.z) / kb.travel);
    }
    depth = std::clamp(depth, 0.0, 1.0);
    state.depression[k] = depth;
    state.active[k] = depth > threshold ? 1 : 0;
  }
}

}  // namespace clavier
