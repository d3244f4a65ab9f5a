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

#include "learn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

#include "eval/eval.hpp"
#include "sim/keyboard.hpp"
#include "util/config.hpp"
#include "util/errors.hpp"

namespace clavier {

namespace {

constexpr int kAct = kJointsPerHand;

double joint_delta(double raw, int joint, const std::array<double, 3>& dmax) {
  return std::clamp(raw, -1.0, 1.0) * dmax[joint % 3];
}

// Deterministic single-hand rollout; fills active key sets and the
// commanded tape, returns the own-goal score.
double eval_policy(HandEnv& env, const Net& policy,
                   const std::array<double, 3>& dmax, uint64_t eval_seed,
                   const std::vector<std::vector<int>>& goal_sets,
                   HandTrajectory* tape_out) {
  env.reset(eval_seed);
  NetPass pass;
  std::vector<std::vector<int>> active;
  HandTrajectory tape;
  tape.wrist = env.wrist_track();
  tape.states.push_back(env.command());
  while (!env.done()) {
    const auto& mean = pass.forward(policy, env.obs().data(), 1);
    std::array<double, kAct> cmd;
    const auto& prev = env.command();
    for (int j = 0; j < kAct; ++j) {
      cmd[j] = prev[j] + joint_delta(mean[j], j, dmax);
    }
    const StepInfo& info = env.step(cmd.data());
    active.push_back(info.active_keys);
    tape.states.push_back(env.command());  // after the env's limit clamp
  }
  if (tape_out != nullptr) *tape_out = std::move(tape);
  return score_f1(active, goal_sets).f1;
}

}  // namespace

PolicyController::PolicyController(const Net& policy,
                                   const std::array<double, 3>& delta_max)
    : policy_(&policy), delta_max_(delta_max) {}

void PolicyController::act(const HandEnv& env, const std::vector<double>& obs,
                           double* cmd9) {
  const auto& mean = pass_.forward(*policy_, obs.data(), 1);
  const auto& prev = env.command();
  for (int j = 0; j < kAct; ++j) {
    cmd9[j] = prev[j] + joint_delta(mean[j], j, delta_max_);
  }
}

PpoResult train_ppo(const PianoRoll& roll, Hand hand, const EnvConfig& env_cfg,
                    const PpoConfig& cfg, uint64_t seed) {
  if (!roll.has_notes(hand)) {
    throw ValidationError("cannot pretrain a hand that has no notes");
  }
  Keyboard kb = build_keyboard();
  GapModel nominal = GapModel::identity();
  const int N = cfg.num_envs, H = cfg.horizon;
  const int B = N * H;
  if (B % cfg.minibatches != 0) {
    throw ValidationError("batch is not divisible into the minibatch count");
  }
  const int mb_size = B / cfg.minibatches;

  std::vector<std::unique_ptr<HandEnv>> envs;
  envs.reserve(N);
  for (int k = 0; k < N; ++k) {
    envs.push_back(
        std::make_unique<HandEnv>(kb, hand, roll, nominal, env_cfg));
  }
  const int do_ = envs[0]->obs_dim();
  HandEnv eval_env(kb, hand, roll, nominal, env_cfg);
  const auto goal_sets = goal_key_sets(roll, hand);

  Rng init_rng(Rng::derive(seed, "ppo-init"));
  Rng train_rng(Rng::derive(seed, "ppo-train"));
  PpoResult res;
  res.policy = Net(
      [&] {
        std::vector<int> d{do_};
        d.insert(d.end(), cfg.hidden.begin(), cfg.hidden.end());
        d.push_back(kAct);
        return d;
      }(),
      Head::kLinear);
  res.value = Net(
      [&] {
        std::vector<int> d{do_};
        d.insert(d.end(), cfg.hidden.begin(), cfg.hidden.end());
        d.push_back(1);
        return d;
      }(),
      Head::kLinear);
  res.policy.init_uniform(init_rng);
  res.policy.init_last_uniform(0.01, init_rng);  // start near-still
  res.value.init_uniform(init_rng);
  res.log_std.assign(kAct, cfg.log_std_init);

  Adam opt_policy(res.policy.num_params(), cfg.lr);
  Adam opt_value(res.value.num_params(), cfg.lr);
  Adam opt_logstd(kAct, cfg.lr);

  uint64_t reset_counter = 0;
  auto next_reset_seed = [&] {
    return Rng::derive(seed, "ppo-env") + reset_counter++;
  };
  std::vector<double> obs(static_cast<size_t>(N) * do_);
  for (int k = 0; k < N; ++k) {
    const auto& o = envs[k]->reset(next_reset_seed());
    std::copy(o.begin(), o.end(), obs.begin() + static_cast<size_t>(k) * do_);
  }

  // Iteration buffers, flattened as row = t * N + k.
  std::vector<double> buf_obs(static_cast<size_t>(B) * do_);
  std::vector<double> buf_act(static_cast<size_t>(B) * kAct);
  std::vector<double> buf_logp(B), buf_rew(B), buf_done(B), buf_val(B);
  std::vector<double> buf_adv(B), buf_ret(B);
  NetPass pass_policy, pass_value;
  std::vector<int> perm(B);
  std::vector<double> mb_obs(static_cast<size_t>(mb_size) * do_);
  std::vector<double> mb_dmean(static_cast<size_t>(mb_size) * kAct);
  std::vector<double> mb_dv(mb_size);
  std::vector<double> grad_policy(res.policy.num_params());
  std::vector<double> grad_value(res.value.num_params());
  std::vector<double> grad_logstd(kAct);

  auto run_eval = [&](int64_t steps_done) -> double {
    HandTrajectory tape;
    double f1 = eval_policy(eval_env, res.policy, cfg.delta_max,
                            Rng::derive(seed, "ppo-eval"), goal_sets, &tape);
    res.curve.push_back({steps_done, f1});
    if (f1 > res.best_f1) {
      res.best_f1 = f1;
      res.best_step = steps_done;
      res.best_tape = std::move(tape);
    }
    if (cfg.verbose) {
      std::fprintf(stderr, "ppo %s steps %lld  validation F1 %.4f\n",
                   hand == Hand::kLeft ? "L" : "R",
                   static_cast<long long>(steps_done), f1);
    }
    return f1;
  };

  int64_t steps_done = 0;
  int iteration = 0;
  bool stop = false;
  while (!stop && steps_done < cfg.total_steps) {
    // --- experience collection over all envs, policy fixed ---
    for (int t = 0; t < H; ++t) {
      const auto& mean = pass_policy.forward(res.policy, obs.data(), N);
      const auto& val = pass_value.forward(res.value, obs.data(), N);
      for (int k = 0; k < N; ++k) {
        const size_t row = static_cast<size_t>(t) * N + k;
        std::copy(obs.begin() + static_cast<size_t>(k) * do_,
                  obs.begin() + static_cast<size_t>(k + 1) * do_,
                  buf_obs.begin() + row * do_);
        double logp = 0.0;
        std::array<double, kAct> a, cmd;
        for (int j = 0; j < kAct; ++j) {
          double mu = mean[static_cast<size_t>(k) * kAct + j];
          double sd = std::exp(res.log_std[j]);
          a[j] = mu + sd * train_rng.normal();
          double z = (a[j] - mu) / sd;
          logp += -0.5 * z * z - res.log_std[j] -
                  0.5 * std::log(2.0 * std::numbers::pi);
          buf_act[row * kAct + j] = a[j];
        }
        const auto& prev = envs[k]->command();
        for (int j = 0; j < kAct; ++j) {
          cmd[j] = prev[j] + joint_delta(a[j], j, cfg.delta_max);
        }
        const StepInfo& info = envs[k]->step(cmd.data());
        buf_logp[row] = logp;
        buf_rew[row] = info.reward;
        buf_val[row] = val[k];
        bool done = envs[k]->done();
        buf_done[row] = done ? 1.0 : 0.0;
        const std::vector<double>& next =
            done ? envs[k]->reset(next_reset_seed()) : envs[k]->obs();
        std::copy(next.begin(), next.end(),
                  obs.begin() + static_cast<size_t>(k) * do_);
      }
      steps_done += N;
    }
    // --- generalized advantage estimation, time-major backward ---
    const auto& vlast = pass_value.forward(res.value, obs.data(), N);
    for (int k = 0; k < N; ++k) {
      double carry = 0.0;
      for (int t = H - 1; t >= 0; --t) {
        const size_t row = static_cast<size_t>(t) * N + k;
        double nonterm = 1.0 - buf_done[row];
        double next_v =
            t + 1 < H ? buf_val[static_cast<size_t>(t + 1) * N + k] : vlast[k];
        double delta =
            buf_rew[row] + cfg.gamma * next_v * nonterm - buf_val[row];
        carry = delta + cfg.gamma * cfg.lam * nonterm * carry;
        buf_adv[row] = carry;
        buf_ret[row] = carry + buf_val[row];
      }
    }
    // --- clipped-surrogate epochs ---
    for (int b = 0; b < B; ++b) perm[b] = b;
    for (int epoch = 0; epoch < cfg.epochs && !res.diverged; ++epoch) {
      for (int b = B - 1; b > 0; --b) {
        std::swap(perm[b], perm[train_rng.uniform_int(b + 1)]);
      }
      for (int m = 0; m < cfg.minibatches && !res.diverged; ++m) {
        const int* idx = perm.data() + static_cast<size_t>(m) * mb_size;
        for (int i = 0; i < mb_size; ++i) {
          std::copy(buf_obs.begin() + static_cast<size_t>(idx[i]) * do_,
                    buf_obs.begin() + static_cast<size_t>(idx[i] + 1) * do_,
                    mb_obs.begin() + static_cast<size_t>(i) * do_);
        }
        double amean = 0.0, asq = 0.0;
        for (int i = 0; i < mb_size; ++i) amean += buf_adv[idx[i]];
        amean /= mb_size;
        for (int i = 0; i < mb_size; ++i) {
          double d = buf_adv[idx[i]] - amean;
          asq += d * d;
        }
        double asd = mb_size > 1 ? std::sqrt(asq / (mb_size - 1)) : 0.0;

        const auto& mean = pass_policy.forward(res.policy, mb_obs.data(),
                                               mb_size);
        const auto& val = pass_value.forward(res.value, mb_obs.data(),
                                             mb_size);
        std::fill(grad_logstd.begin(), grad_logstd.end(), 0.0);
        double ploss = 0.0, vloss = 0.0;
        for (int i = 0; i < mb_size; ++i) {
          const size_t row = idx[i];
          double adv = (buf_adv[row] - amean) / (asd + 1e-8);
          double logp = 0.0;
          for (int j = 0; j < kAct; ++j) {
            double mu = mean[static_cast<size_t>(i) * kAct + j];
            double sd = std::exp(res.log_std[j]);
            double z = (buf_act[row * kAct + j] - mu) / sd;
            logp += -0.5 * z * z - res.log_std[j] -
                    0.5 * std::log(2.0 * std::numbers::pi);
          }
          double ratio = std::exp(logp - buf_logp[row]);
          double unclipped = ratio * adv;
          double clipped =
              std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * adv;
          ploss += -std::min(unclipped, clipped) / mb_size;
          // Gradient flows through the ratio only when the unclipped branch
          // is active (standard clipped-objective subgradient).
          double dratio = 0.0;
          if (unclipped <= clipped) {
            dratio = -adv / mb_size;
          }
          double dlogp = dratio * ratio;
          for (int j = 0; j < kAct; ++j) {
            double mu = mean[static_cast<size_t>(i) * kAct + j];
            double sd = std::exp(res.log_std[j]);
            double diff = buf_act[row * kAct + j] - mu;
            mb_dmean[static_cast<size_t>(i) * kAct + j] =
                dlogp * diff / (sd * sd);
            grad_logstd[j] += dlogp * (diff * diff / (sd * sd) - 1.0);
          }
          double verr = val[i] - buf_ret[row];
          vloss += verr * verr / mb_size;
          mb_dv[i] = cfg.vf_coef * 2.0 * verr / mb_size;
        }
        if (!std::isfinite(ploss) || !std::isfinite(vloss)) {
          res.diverged = true;
          break;
        }
        grad_policy.assign(grad_policy.size(), 0.0);
        pass_policy.backward(res.policy, mb_dmean.data(), grad_policy);
        opt_policy.step(res.policy.params(), grad_policy);
        opt_logstd.step(res.log_std, grad_logstd);
        grad_value.assign(grad_value.size(), 0.0);
        pass_value.backward(res.value, mb_dv.data(), grad_value);
        opt_value.step(res.value.params(), grad_value);
      }
    }
    ++iteration;
    if (res.diverged) break;
    if (iteration % cfg.eval_every == 0 || steps_done >= cfg.total_steps) {
      double f1 = run_eval(steps_done);
      if (cfg.early_stop_f1 >= 0.0 && f1 >= cfg.early_stop_f1) stop = true;
    }
  }
  if (res.curve.empty()) run_eval(steps_done);
  res.steps_done = steps_done;

  BinWriter w;
  res.policy.serialize(w);
  res.value.serialize(w);
  w.f64v(res.log_std);
  opt_policy.serialize(w);
  opt_value.serialize(w);
  opt_logstd.serialize(w);
  w.str(train_rng.state());
  w.i64(steps_done);
  res.checkpoint_blob = w.buffer();
  return res;
}

void ppo_blob_nets(const std::string& blob, Net* policy, Net* value,
                   std::vector<double>* log_std) {
  BinReader r(blob);
  Net p = Net::deserialize(r);
  Net v = Net::deserialize(r);
  std::vector<double> ls = r.f64v();
  if (policy != nullptr) *policy = std::move(p);
  if (value != nullptr) *value = std::move(v);
  if (log_std != nullptr) *log_std = std::move(ls);
}

PpoConfig make_ppo_config(const Config& config) {
  PpoConfig c;
  c.lr = config.f64("ppo.lr", c.lr);
  c.gamma = config.f64("ppo.gamma", c.gamma);
  c.lam = config.f64("ppo.lam", c.lam);
  c.clip = config.f64("ppo.clip", c.clip);
  c.vf_coef = config.f64("ppo.vf_coef", c.vf_coef);
  c.ent_coef = config.f64("ppo.ent_coef", c.ent_coef);
  c.num_envs = static_cast<int>(config.i64("ppo.num_envs", c.num_envs));
  c.horizon = static_cast<int>(config.i64("ppo.horizon", c.horizon));
  c.minibatches =
      static_cast<int>(config.i64("ppo.minibatches", c.minibatches));
  c.epochs = static_cast<int>(config.i64("ppo.epochs", c.epochs));
  c.log_std_init = config.f64("ppo.log_std_init", c.log_std_init);
  c.total_steps = config.i64("ppo.total_steps", c.total_steps);
  c.eval_every = static_cast<int>(config.i64("ppo.eval_every", c.eval_every));
  c.early_stop_f1 = config.f64("ppo.early_stop_f1", c.early_stop_f1);
  c.delta_max[0] = config.f64("ppo.delta_lateral", c.delta_max[0]);
  c.delta_max[1] = config.f64("ppo.delta_flex1", c.delta_max[1]);
  c.delta_max[2] = config.f64("ppo.delta_flex2", c.delta_max[2]);
  c.verbose = config.boolean("ppo.verbose", c.verbose);
  return c;
}

}  // namespace clavier
