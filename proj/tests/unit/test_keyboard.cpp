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

#include <cmath>

#include "doctest.h"
#include "sim/keyboard.hpp"

using namespace clavier;

TEST_CASE("layout follows the 88-key pattern") {
  Keyboard kb = build_keyboard();
  int whites = 0;
  for (int k = 0; k < kNumKeys; ++k) {
    if (!kb.keys[k].black) ++whites;
  }
  CHECK(whites == 52);
  // A0 is white, A#0 black; C4 (key 39) white, C#4 (key 40) black.
  CHECK_FALSE(is_black_key(0));
  CHECK(is_black_key(1));
  CHECK_FALSE(is_black_key(39));
  CHECK(is_black_key(40));
  CHECK_FALSE(is_black_key(87));  // C8

  // Whites advance by exactly one pitch; blacks sit on the boundary
  // between their two white neighbours.
  double prev_white = -kb.white_pitch / 2;
  for (int k = 0; k < kNumKeys; ++k) {
    const KeySpec& s = kb.keys[k];
    if (!s.black) {
      CHECK(s.center_y == doctest::Approx(prev_white + kb.white_pitch));
      prev_white = s.center_y;
    } else {
      CHECK(s.center_y ==
            doctest::Approx(prev_white + kb.white_pitch / 2));
      CHECK(s.top_z > 0.0);
    }
  }
}

TEST_CASE("depth clamp stops fingers at the shallowest covered floor") {
  Keyboard kb = build_keyboard();
  const KeySpec& white = kb.keys[39];  // C4
  const KeySpec& black = kb.keys[40];  // C#4
  REQUIRE_FALSE(white.black);
  REQUIRE(black.black);
  double white_floor = -(kb.travel + kb.floor_margin);
  double black_floor = black.top_z - kb.travel - kb.floor_margin;

  SUBCASE("white footprint alone") {
    double z = depth_clamp(kb, white.contact_x, white.center_y, -1.0);
    CHECK(z == doctest::Approx(white_floor));
  }
  SUBCASE("black body overrides the whites underneath") {
    // The black center lies inside both neighbouring white footprints,
    // but the raised body stops the finger first.
    CHECK(black_floor > white_floor);
    double z = depth_clamp(kb, black.contact_x, black.center_y, -1.0);
    CHECK(z == doctest::Approx(black_floor));
  }
  SUBCASE("same y past the black front edge falls to the white floor") {
    double z = depth_clamp(kb, black.x_max + 0.01, black.center_y, -1.0);
    CHECK(z == doctest::Approx(white_floor));
  }
  SUBCASE("free space is never lifted") {
    CHECK(depth_clamp(kb, white.contact_x, white.center_y, 0.05) == 0.05);
  }
  SUBCASE("off-keyboard default floor") {
    CHECK(depth_clamp(kb, 0.1, -1.0, -1.0) == doctest::Approx(white_floor));
  }
}

TEST_CASE("quasi-static keys: deepest finger wins, strict threshold") {
  Keyboard kb = build_keyboard();
  const KeySpec& white = kb.keys[39];
  KeyState state;

  SUBCASE("depression equals normalized dip") {
    std::vector<Vec3> tips = {{white.contact_x, white.center_y,
                               -0.6 * kb.travel}};
    step_keys(kb, tips, 0.0, state);
    CHECK(state.depression[39] == doctest::Approx(0.6));
    CHECK(state.active[39] == 1);
  }
  SUBCASE("activation is strictly above the threshold") {
    std::vector<Vec3> tips = {{white.contact_x, white.center_y,
                               -0.5 * kb.travel}};
    step_keys(kb, tips, 0.0, state);
    CHECK(state.depression[39] == doctest::Approx(0.5));
    CHECK(state.active[39] == 0);
  }
  SUBCASE("threshold shift raises the bar") {
    std::vector<Vec3> tips = {{white.contact_x, white.center_y,
                               -0.6 * kb.travel}};
    step_keys(kb, tips, 0.12, state);
    CHECK(state.active[39] == 0);
    tips[0].z = -0.7 * kb.travel;
    step_keys(kb, tips, 0.12, state);
    CHECK(state.active[39] == 1);
  }
  SUBCASE("deepest of several fingers sets the key") {
    std::vector<Vec3> tips = {
        {white.contact_x, white.center_y, -0.3 * kb.travel},
        {white.contact_x - 0.01, white.center_y, -0.8 * kb.travel}};
    step_keys(kb, tips, 0.0, state);
    CHECK(state.depression[39] == doctest::Approx(0.8));
  }
  SUBCASE("pressing a black key leaves the whites below at rest") {
    const KeySpec& black = kb.keys[40];
    std::vector<Vec3> tips = {{black.contact_x, black.center_y,
                               black.top_z - 0.7 * kb.travel}};
    step_keys(kb, tips, 0.0, state);
    CHECK(state.depression[40] == doctest::Approx(0.7));
    CHECK(state.active[40] == 1);
    CHECK(state.depression[39] == 0.0);
    CHECK(state.depression[41] == 0.0);
  }
  SUBCASE("released keys return to rest within one step") {
    std::vector<Vec3> tips = {{white.contact_x, white.center_y,
                               -0.9 * kb.travel}};
    step_keys(kb, tips, 0.0, state);
    REQUIRE(state.active[39] == 1);
    step_keys(kb, {}, 0.0, state);
    CHECK(state.depression[39] == 0.0);
    CHECK(state.active[39] == 0);
  }
  SUBCASE("depression saturates at full travel") {
    std::vector<Vec3> tips = {{white.contact_x, white.center_y,
                               -(kb.travel + kb.floor_margin)}};
    step_keys(kb, tips, 0.0, state);
    CHECK(state.depression[39] == 1.0);
  }
}
