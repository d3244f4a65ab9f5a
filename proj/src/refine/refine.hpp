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
//
// Iterative structured correction of an open-loop trajectory against the
// pseudo-real device: roll the tape out, attribute each sounding key to the
// finger that was aiming nearest, average the signed lateral errors over
// fixed chunks (plus a lookahead), and shift the chunk's lateral commands
// by a shrinking step, coupling a fraction into anatomically adjacent
// fingers. Only lateral joints are touched.

#ifndef CLAVIER_REFINE_REFINE_HPP_
#define CLAVIER_REFINE_REFINE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "score/score.hpp"
#include "sim/env.hpp"
#include "sim/hand.hpp"

namespace clavier {

// What one hand did at one step: which key each finger was told to hit
// (-1 when idle) and which keys ended up sounding under this hand.
struct PressLogStep {
  std::array<int, kNumFingers> target_key{-1, -1, -1};
  std::vector<int> active_keys;
};
using PressLog = std::vector<PressLogStep>;

// Attribute each sounding key to the aiming finger whose target is nearest
// (ties go to the finger with the lower target key). Fingers without a
// target receive nothing.
std::array<std::vector<int>, kNumFingers> assign_fingers(
    const std::array<int, kNumFingers>& target_key,
    const std::vector<int>& active_keys);

// Signed lateral correction for one finger at one step: +delta when the
// nearest attributed key is below the target (finger should move up),
// -delta when above, 0 on an exact hit or when nothing sounded.
double signed_error(int target_key, const std::vector<int>& pressed,
                    double delta);

// Correction for the chunk starting at t: the errors of steps
// t .. t+chunk_len+lookahead summed (zero past the end) and divided by
// chunk_len + lookahead.
double chunk_correction(const std::vector<double>& step_errors, int t,
                        int chunk_len, int lookahead);

struct RefineParams {
  int iterations = 10;
  int chunk_len = 10;       // steps corrected together (K)
  int lookahead = 5;        // extra steps blamed on the chunk (L)
  double delta_init = -1.0; // <0: half of one white key's lateral angle
  double anneal = 0.7;      // per-iteration shrink of the step
  double neighbor_coef = 0.3;
};

// One correction pass over a single hand's tape, in place. The press log
// and goals are indexed by step t; the correction for the chunk at t0 is
// applied to states s_{t0+1} .. s_{t0+K}, the states that command those
// steps. s_0 is never modified. Laterals are clamped to joint limits.
void refine_iteration(HandTrajectory& traj, const HandConfig& cfg,
                      const PressLog& log, double delta,
                      const RefineParams& params);

struct RefineResult {
  Trajectory best;
  double best_f1 = 0.0;
  int best_iteration = 0;           // 0 = the input tape, untouched
  std::vector<double> f1_history;   // index 0 = input, then one per pass
};

// Full loop: evaluate the input on the gapped environment, then alternate
// correction passes and fresh rollouts (rollout i uses seed + i), keeping
// the tape with the best score. iterations == 0 returns the input as is
// (still evaluated once for the history).
RefineResult refine(const Trajectory& input, const PianoRoll& roll,
                    const GapModel& left_gap, const GapModel& right_gap,
                    const EnvConfig& env_cfg, const RefineParams& params,
                    uint64_t seed);

RefineParams make_refine_params(const class Config& config);

}  // namespace clavier

#endif  // CLAVIER_REFINE_REFINE_HPP_
