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
// Residual adaptation on the pseudo-real device: a twin-critic deterministic
// policy-gradient agent per hand learns a small bounded correction on top of
// a fixed open-loop tape. Exploration noise is temporally correlated and,
// with some probability, sign-guided by the last step's key errors.

#ifndef CLAVIER_LEARN_TD3_HPP_
#define CLAVIER_LEARN_TD3_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "learn/net.hpp"
#include "learn/noise.hpp"
#include "score/score.hpp"
#include "sim/env.hpp"
#include "sim/rollout.hpp"
#include "util/binio.hpp"
#include "util/rng.hpp"

namespace clavier {

// Flat uniform-sampling transition store. Capacity is reserved logically;
// memory is committed in blocks as transitions arrive.
class ReplayBuffer {
 public:
  ReplayBuffer(int obs_dim, int act_dim, size_t capacity);

  void add(const double* obs, const double* act, double reward,
           const double* next_obs, double done);
  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }

  // Uniform with replacement into row-major batch buffers.
  void sample(Rng& rng, int batch, double* obs, double* act, double* reward,
              double* next_obs, double* done) const;

 private:
  static constexpr size_t kBlock = 4096;  // transitions per committed block
  const double* slot(size_t i) const;
  double* slot(size_t i);

  int obs_dim_, act_dim_;
  size_t stride_, capacity_, size_ = 0, next_ = 0;
  std::vector<std::unique_ptr<double[]>> blocks_;
};

struct Td3Config {
  std::vector<int> hidden = {256, 256, 256};
  double gamma = 0.8;
  double tau = 0.005;
  double lr = 1e-3;
  int batch = 2048;
  int critic_steps_per_event = 8;  // update-to-data ratio
  int policy_delay = 2;            // critic steps per actor/target step
  int update_every = 10;           // env steps per update event
  int initial_steps = 512;         // env steps with the actor zeroed out
  double critic_dropout = 0.5;
  double smooth_sd = 0.2;          // target-policy smoothing
  double smooth_clip = 0.5;
  double noise_beta = 0.2;         // exploration noise correlation
  double guided_prob = 0.5;
  double noise_clip = 0.5;         // exploration clip, normalized units
  int noise_anneal_steps = 10000;  // critic steps over which noise fades
  // L2 penalty on the actor head's pre-activations. The squashing head is
  // flat far from zero, so once pre-activations run deep the policy
  // gradient underflows and the actor freezes at the output rails; this
  // term grows with depth and keeps the head inside the responsive region
  // (equilibrium around |preact| ~ 2, i.e. outputs up to ~0.96 of the
  // rail) without touching the Bellman machinery.
  double actor_preact_l2 = 1e-2;
  double residual_bound = 0.08;    // rad of command authority
  // Learning from scratch: the bound per joint becomes half that joint's
  // full range, so the squashed output can command anything reachable.
  bool full_range_bound = false;
  int chunk = 2;                   // env steps each residual is held
  size_t replay_capacity = 200000;
  double critic_init = 3e-3;       // final-layer init half-width
  double key_on_hi = 0.7;          // key-press reward weight, early
  double key_on_lo = 0.5;          // ... after the switch
  int key_on_switch = 10000;       // critic steps
  int episodes = 100;
  int eval_every = 20;             // episodes between validation points
  int eval_rollouts = 5;
  bool verbose = false;
};

// One hand's residual learner. All randomness comes from named substreams
// of the constructor seed; with a zero-initialized actor head the first
// noiseless action is exactly zero.
class ResidualAgent {
 public:
  ResidualAgent(int obs_dim, const Td3Config& cfg, uint64_t seed);

  void begin_episode();

  // Normalized residual in [-1,1]^9. With explore, applies initial-phase
  // zeroing, correlated+guided noise (drawn on chunk boundaries and held),
  // and the linear noise fade; pass the previous step's lateral guidance.
  const std::vector<double>& act(
      const std::vector<double>& obs,
      const std::vector<std::pair<int, int>>& lateral_signs, bool explore);

  std::vector<double> deterministic_action(const std::vector<double>& obs);

  void observe(const std::vector<double>& obs, const std::vector<double>& act,
               double reward, const std::vector<double>& next_obs,
               double done);

  // Call once per env step; runs an update event on the configured cadence
  // (skipped with a counted notice while the buffer is short of one batch).
  void maybe_update();

  int64_t env_steps() const { return env_steps_; }
  int64_t critic_steps() const { return critic_steps_; }
  int64_t skipped_events() const { return skipped_events_; }
  double key_on_coef() const;
  double noise_scale() const;  // current linear fade factor
  const Net& actor() const { return actor_; }
  const Net& q1() const { return q1_; }
  const Net& q2() const { return q2_; }
  const Td3Config& config() const { return cfg_; }
  double last_critic_loss() const { return last_critic_loss_; }
  double last_actor_objective() const { return last_actor_objective_; }

  void serialize(BinWriter& w) const;
  static std::unique_ptr<ResidualAgent> deserialize(BinReader& r,
                                                    const Td3Config& cfg);

 private:
  void update_event();
  void critic_step();
  void actor_and_target_step();

  Td3Config cfg_;
  int obs_dim_, act_dim_, in_dim_;
  Net actor_, q1_, q2_, actor_t_, q1_t_, q2_t_;
  Net actor_lin_;  // linear-head twin of the actor for pre-activation grads
  Adam opt_actor_, opt_q1_, opt_q2_;
  ReplayBuffer replay_;
  CorrelatedNoise explore_noise_;
  Rng train_rng_, explore_rng_;
  int64_t env_steps_ = 0, critic_steps_ = 0, skipped_events_ = 0;
  std::vector<double> held_action_;
  int held_left_ = 0;  // env steps the held residual is still valid for
  double last_critic_loss_ = 0.0, last_actor_objective_ = 0.0;

  // update scratch
  NetPass pass_q1_, pass_q2_, pass_actor_, pass_tq1_, pass_tq2_, pass_ta_,
      pass_lin_;
  std::vector<double> b_obs_, b_act_, b_rew_, b_next_, b_done_;
  std::vector<double> x_, y_, dq_, grad_, grad2_, dx_, dact_, du_;
};

// Lateral-joint guidance for the next exploration draw: for each finger
// whose attributed press missed its target key, the sign that moves the
// finger toward the target, at that finger's lateral action index.
std::vector<std::pair<int, int>> lateral_guidance(
    const std::vector<GoalNote>& goals, const std::vector<int>& active_keys);

// Per-joint command authority of the residual under a config.
std::array<double, kJointsPerHand> residual_bounds(const Td3Config& cfg,
                                                   const HandConfig& hand);

// Deterministic residual execution for evaluation and deployment:
// command = tape state + bound * squashed actor output.
class ResidualController : public HandController {
 public:
  ResidualController(const Net& actor, const HandTrajectory& base,
                     const std::array<double, kJointsPerHand>& bounds);
  void act(const HandEnv& env, const std::vector<double>& obs,
           double* cmd9) override;

 private:
  const Net* actor_;
  const HandTrajectory* base_;
  std::array<double, kJointsPerHand> bounds_;
  NetPass pass_;
};

struct EvalPoint {
  int episode = 0;
  double mean_f1 = 0.0, sd_f1 = 0.0;
  std::vector<double> per_seed_f1;
};

struct ResidualTrainResult {
  std::vector<EvalPoint> curve;   // episodes 0, eval_every, 2*eval_every, ...
  double best_f1 = -1.0;          // max of curve means
  int best_episode = 0;
  double initial_f1 = 0.0;        // curve front: the untouched tape
  // Per hand (empty optional for a hand with no notes): the actor snapshot
  // taken at the best validation point, and full agent dumps.
  std::array<std::optional<Net>, kNumHands> best_actor;
  std::array<std::string, kNumHands> best_agent_blob;
  std::array<std::string, kNumHands> final_agent_blob;
};

// 100-episode (by config) residual training of both hands on one
// pseudo-real environment, base tape fixed, with periodic seeded validation
// rollouts of the deterministic policy. Deterministic given seed.
ResidualTrainResult train_residual(const PianoRoll& roll,
                                   const Trajectory& base,
                                   const GapModel& left_gap,
                                   const GapModel& right_gap,
                                   const EnvConfig& env_cfg,
                                   const Td3Config& cfg, uint64_t seed);

Td3Config make_td3_config(const class Config& config);

}  // namespace clavier

#endif  // CLAVIER_LEARN_TD3_HPP_
