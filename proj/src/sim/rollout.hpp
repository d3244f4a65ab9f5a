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

#ifndef CLAVIER_SIM_ROLLOUT_HPP_
#define CLAVIER_SIM_ROLLOUT_HPP_

#include <array>
#include <vector>

#include "eval/eval.hpp"
#include "sim/env.hpp"
#include "sim/hand.hpp"

namespace clavier {

// A per-hand command source. `obs` is what the controller is allowed to
// see; under the hybrid scheme it differs from the environment's own
// observation, so controllers must not call env.obs() themselves.
class HandController {
 public:
  virtual ~HandController() = default;
  virtual void begin(const HandEnv& env, const std::vector<double>& obs) {
    (void)env;
    (void)obs;
  }
  virtual void act(const HandEnv& env, const std::vector<double>& obs,
                   double* cmd9) = 0;
};

// Open loop: replays a recorded command tape.
class TrajectoryController : public HandController {
 public:
  explicit TrajectoryController(const HandTrajectory& traj) : traj_(&traj) {}
  void act(const HandEnv& env, const std::vector<double>& obs,
           double* cmd9) override;

 private:
  const HandTrajectory* traj_;
};

// Holds the resting pose (used for hands that never play).
class RestController : public HandController {
 public:
  void act(const HandEnv& env, const std::vector<double>& obs,
           double* cmd9) override;
};

struct HandRolloutLog {
  std::vector<std::vector<int>> active_keys;              // per step
  std::vector<std::array<double, kJointsPerHand>> commands;
  double reward_sum = 0.0;       // simulation-shaped reward
  double real_reward_sum = 0.0;  // key-press-only reward
};

struct RolloutResult {
  std::vector<std::vector<int>> merged_active;  // per step, both hands
  std::array<HandRolloutLog, kNumHands> hands;
  F1Score f1;  // merged, against the full score
};

struct RolloutOptions {
  // When set, this nominal twin is reset and stepped with the same commands
  // and its proprioception block replaces the pseudo-real one in controller
  // observations (activations and goals stay pseudo-real).
  BimanualEnv* nominal_twin = nullptr;
};

RolloutResult rollout(BimanualEnv& env, HandController& left,
                      HandController& right, uint64_t seed,
                      const RolloutOptions& opts = {});

// Convenience: replay a trajectory open loop.
RolloutResult rollout_trajectory(BimanualEnv& env, const Trajectory& traj,
                                 uint64_t seed);

}  // namespace clavier

#endif  // CLAVIER_SIM_ROLLOUT_HPP_
