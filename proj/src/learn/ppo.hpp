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
// Clipped-surrogate policy-gradient pretraining of one hand on the nominal
// simulator. Actions are per-joint position deltas squashed by clipping;
// the Gaussian policy has a state-independent learned log-deviation. The
// trainer periodically replays the deterministic policy, scores it, and
// keeps the best rollout's commanded states as an open-loop tape.

#ifndef CLAVIER_LEARN_PPO_HPP_
#define CLAVIER_LEARN_PPO_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "learn/net.hpp"
#include "score/score.hpp"
#include "sim/env.hpp"
#include "sim/rollout.hpp"

namespace clavier {

struct PpoConfig {
  std::vector<int> hidden = {64, 64};
  double lr = 3e-4;
  double gamma = 0.8;
  double lam = 0.95;       // advantage estimation decay
  double clip = 0.2;
  double vf_coef = 0.5;
  double ent_coef = 0.0;
  int num_envs = 32;       // sequential instances, one shared gradient
  int horizon = 32;        // steps per env per iteration
  int minibatches = 32;
  int epochs = 8;
  double log_std_init = -0.5;
  int64_t total_steps = 40000000;
  int eval_every = 5;           // iterations between deterministic evals
  double early_stop_f1 = -1.0;  // >=0: stop once a validation F1 reaches it
  // Per-joint-type delta scale, rad per step: lateral, proximal, distal.
  std::array<double, 3> delta_max = {0.35, 0.6, 0.8};
  bool verbose = false;
};

struct PpoEvalPoint {
  int64_t step = 0;
  double f1 = 0.0;
};

struct PpoResult {
  double best_f1 = -1.0;
  int64_t best_step = 0;
  HandTrajectory best_tape;  // commanded states of the best validation run
  std::vector<PpoEvalPoint> curve;
  Net policy, value;
  std::vector<double> log_std;
  int64_t steps_done = 0;
  bool diverged = false;            // non-finite loss: training was aborted
  std::string checkpoint_blob;      // weights + moments + rng, binary
};

PpoResult train_ppo(const PianoRoll& roll, Hand hand, const EnvConfig& env_cfg,
                    const PpoConfig& cfg, uint64_t seed);

// Deterministic policy execution: mean action, clipped per-joint deltas
// integrated on the environment's own commanded state.
class PolicyController : public HandController {
 public:
  PolicyController(const Net& policy, const std::array<double, 3>& delta_max);
  void act(const HandEnv& env, const std::vector<double>& obs,
           double* cmd9) override;

 private:
  const Net* policy_;
  std::array<double, 3> delta_max_;
  NetPass pass_;
};

PpoConfig make_ppo_config(const class Config& config);

// Checkpoint-blob round trip for deployment: policy, value, log_std.
void ppo_blob_nets(const std::string& blob, Net* policy, Net* value,
                   std::vector<double>* log_std);

}  // namespace clavier

#endif  // CLAVIER_LEARN_PPO_HPP_
