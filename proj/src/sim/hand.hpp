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

#ifndef CLAVIER_SIM_HAND_HPP_
#define CLAVIER_SIM_HAND_HPP_

#include <array>
#include <string>
#include <vector>

#include "score/score.hpp"
#include "sim/keyboard.hpp"

namespace clavier {

// A hand is three identical 4-joint fingers on a scripted wrist. Each finger
// is a palm link followed by three phalanges:
//
//   base -- Rz(lateral) -- l0 -- Ry(flex1) -- l1 -- Ry(flex2) -- l2
//        -- Ry(flex3 = fixed) -- l3 -- tip
//
// Joint layout per finger is [lateral, flex1, flex2]; the distal joint is
// mechanically coupled and stays at a fixed angle, so a hand exposes
// 3 fingers x 3 joints = 9 actuated values. At zero angles a finger points
// straight toward the back fence (-x); positive lateral yaws the tip toward
// higher keys (+y) on both hands; positive flexion curls downward.
inline constexpr int kJointsPerFinger = 3;
inline constexpr int kJointsPerHand = kNumFingers * kJointsPerFinger;

struct HandConfig {
  Hand hand = Hand::kRight;
  std::array<double, 4> links = {0.016, 0.044, 0.030, 0.020};
  double base_dx = -0.010;           // knuckle row sits toward the fence
  std::array<double, 3> finger_dy{}; // per-finger y offset from the wrist
  double fixed_flex3 = 1.0;          // rad

  // Actuated joint limits by joint type [lateral, flex1, flex2].
  std::array<double, 3> joint_lo = {-0.60, -0.30, 0.0};
  std::array<double, 3> joint_hi = {0.60, 1.20, 1.60};

  // Canonical flexion poses (flex1, flex2): hovering and pressed.
  std::array<double, 2> rest_flex = {0.10, 0.20};
  std::array<double, 2> press_flex = {0.35, 0.45};
  double wrist_z = 0.0455;  // constant hover height of the wrist plane

  // Horizontal wrist-to-tip distance in the pressed pose, and the wrist x
  // offset from a key's contact point that places a pressing tip on it.
  double press_radius() const;
  double press_reach() const;

  double lo(int joint_in_finger) const { return joint_lo[joint_in_finger]; }
  double hi(int joint_in_finger) const { return joint_hi[joint_in_finger]; }
};

HandConfig make_hand_config(Hand hand);

// Fingertip positions for all fingers; q is the 9-value actuated vector.
std::array<Vec3, kNumFingers> forward_kinematics(const HandConfig& cfg,
                                                 const Vec3& wrist,
                                                 const double* q);
// One finger from its 3 actuated values.
Vec3 fingertip(const HandConfig& cfg, const Vec3& wrist, int finger,
               const double* q3);

// Scripted wrist: one entry per command state s_0..s_T (size T+1). While any
// note requires contact the wrist holds that note group's pose (y = mean of
// per-note wrist targets, x = min, which lets black keys win); between
// groups it moves on a straight line; before the first and after the last it
// holds. Throws ValidationError if a note cannot be reached from the pose
// its group dictates, or if a note lacks a finger assignment.
struct WristTrack {
  std::vector<double> x, y;
  double z = 0.0;
};

WristTrack script_wrist(const HandConfig& cfg, const Keyboard& kb,
                        const PianoRoll& roll);

// Open-loop command tape for one hand: joint states s_0..s_T plus the wrist
// track, both indexed by state.
struct HandTrajectory {
  std::vector<std::array<double, kJointsPerHand>> states;
  WristTrack wrist;
};

struct Trajectory {
  std::string song;
  int num_steps = 0;
  std::array<HandTrajectory, kNumHands> hands;
  double nominal_f1 = -1.0;  // score recorded on the nominal setup, if any

  HandTrajectory& hand(Hand h) { return hands[static_cast<int>(h)]; }
  const HandTrajectory& hand(Hand h) const {
    return hands[static_cast<int>(h)];
  }
};

std::string trajectory_text(const Trajectory& t, const ArtifactHeader& h);
Trajectory parse_trajectory(const std::string& text);
void save_trajectory(const std::string& path, const Trajectory& t,
                     const ArtifactHeader& h);
Trajectory load_trajectory(const std::string& path);

}  // namespace clavier

#endif  // CLAVIER_SIM_HAND_HPP_
