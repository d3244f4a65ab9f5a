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

#include "sim/rollout.hpp"

#include <algorithm>

#include "util/errors.hpp"

namespace clavier {

void TrajectoryController::act(const HandEnv& env,
                               const std::vector<double>& obs, double* cmd9) {
  (void)obs;
  const auto& states = traj_->states;
  if (env.t() + 1 >= static_cast<int>(states.size())) {
    throw ValidationError("trajectory too short for rollout: needs state " +
                          std::to_string(env.t() + 1) + " but has " +
                          std::to_string(states.size()));
  }
  const auto& s = states[env.t() + 1];
  std::copy(s.begin(), s.end(), cmd9);
}

void RestController::act(const HandEnv& env, const std::vector<double>& obs,
                         double* cmd9) {
  (void)obs;
  auto rest = HandEnv::rest_state(env.hand_config());
  std::copy(rest.begin(), rest.end(), cmd9);
}

namespace {

// Controller-visible observation: pseudo-real by default; with a nominal
// twin, the twin's proprioception block is spliced in front of the
// pseudo-real key activations and goals.
std::vector<double> controller_obs(const HandEnv& real, const HandEnv* twin) {
  if (twin == nullptr) return real.obs();
  std::vector<double> obs = real.obs();
  const std::vector<double>& tobs = twin->obs();
  const int proprio = kJointsPerHand + 2;  // joints + wrist x,y
  std::copy(tobs.begin(), tobs.begin() + proprio, obs.begin());
  return obs;
}

}  // namespace

RolloutResult rollout(BimanualEnv& env, HandController& left,
                      HandController& right, uint64_t seed,
                      const RolloutOptions& opts) {
  env.reset(seed);
  BimanualEnv* twin = opts.nominal_twin;
  if (twin != nullptr) {
    if (twin->num_steps() != env.num_steps()) {
      throw ValidationError("nominal twin score length differs from target");
    }
    twin->reset(seed);
  }

  RolloutResult res;
  const int T = env.num_steps();
  res.merged_active.reserve(T);
  for (int h = 0; h < kNumHands; ++h) {
    res.hands[h].active_keys.reserve(T);
    res.hands[h].commands.reserve(T);
  }

  auto twin_hand = [&](Hand h) -> const HandEnv* {
    return twin == nullptr ? nullptr : &twin->hand(h);
  };
  left.begin(env.hand(Hand::kLeft),
             controller_obs(env.hand(Hand::kLeft), twin_hand(Hand::kLeft)));
  right.begin(env.hand(Hand::kRight),
              controller_obs(env.hand(Hand::kRight), twin_hand(Hand::kRight)));

  std::array<double, kJointsPerHand> cmd_l{}, cmd_r{};
  for (int t = 0; t < T; ++t) {
    left.act(env.hand(Hand::kLeft),
             controller_obs(env.hand(Hand::kLeft), twin_hand(Hand::kLeft)),
             cmd_l.data());
    right.act(env.hand(Hand::kRight),
              controller_obs(env.hand(Hand::kRight), twin_hand(Hand::kRight)),
              cmd_r.data());
    env.step(cmd_l.data(), cmd_r.data());
    if (twin != nullptr) twin->step(cmd_l.data(), cmd_r.data());

    res.merged_active.push_back(env.merged_active_keys());
    for (int h = 0; h < kNumHands; ++h) {
      Hand hh = static_cast<Hand>(h);
      const HandEnv& he = env.hand(hh);
      const StepInfo& info = he.last_info();
      res.hands[h].active_keys.push_back(info.active_keys);
      res.hands[h].commands.push_back(h == 0 ? cmd_l : cmd_r);
      res.hands[h].reward_sum += info.reward;
      res.hands[h].real_reward_sum += he.real_reward(info);
    }
  }
  res.f1 = score_f1(res.merged_active, goal_key_sets(env.roll()));
  return res;
}

RolloutResult rollout_trajectory(BimanualEnv& env, const Trajectory& traj,
                                 uint64_t seed) {
  TrajectoryController left(traj.hands[0]);
  TrajectoryController right(traj.hands[1]);
  return rollout(env, left, right, seed);
}

}  // namespace clavier
