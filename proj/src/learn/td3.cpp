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

#include "learn/td3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "refine/refine.hpp"
#include "util/config.hpp"
#include "util/errors.hpp"

namespace clavier {

ReplayBuffer::ReplayBuffer(int obs_dim, int act_dim, size_t capacity)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      stride_(2 * static_cast<size_t>(obs_dim) + act_dim + 2),
      capacity_(capacity) {
  if (capacity == 0) throw ValidationError("replay capacity must be positive");
}

double* ReplayBuffer::slot(size_t i) {
  size_t block = i / kBlock;
  while (block >= blocks_.size()) {
    blocks_.push_back(std::make_unique<double[]>(kBlock * stride_));
  }
  return blocks_[block].get() + (i % kBlock) * stride_;
}

const double* ReplayBuffer::slot(size_t i) const {
  return blocks_[i / kBlock].get() + (i % kBlock) * stride_;
}

void ReplayBuffer::add(const double* obs, const double* act, double reward,
                       const double* next_obs, double done) {
  double* p = slot(next_);
  std::memcpy(p, obs, obs_dim_ * sizeof(double));
  std::memcpy(p + obs_dim_, act, act_dim_ * sizeof(double));
  p[obs_dim_ + act_dim_] = reward;
  std::memcpy(p + obs_dim_ + act_dim_ + 1, next_obs,
              obs_dim_ * sizeof(double));
  p[stride_ - 1] = done;
  next_ = (next_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::sample(Rng& rng, int batch, double* obs, double* act,
                          double* reward, double* next_obs,
                          double* done) const {
  if (static_cast<size_t>(batch) > size_) {
    throw ValidationError("replay holds fewer transitions than one batch");
  }
  for (int b = 0; b < batch; ++b) {
    const double* p = slot(static_cast<size_t>(
        rng.uniform_int(static_cast<int>(size_))));
    std::memcpy(obs + static_cast<size_t>(b) * obs_dim_, p,
                obs_dim_ * sizeof(double));
    std::memcpy(act + static_cast<size_t>(b) * act_dim_, p + obs_dim_,
                act_dim_ * sizeof(double));
    reward[b] = p[obs_dim_ + act_dim_];
    std::memcpy(next_obs + static_cast<size_t>(b) * obs_dim_,
                p + obs_dim_ + act_dim_ + 1, obs_dim_ * sizeof(double));
    done[b] = p[stride_ - 1];
  }
}

namespace {

std::vector<int> net_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims;
  dims.push_back(in);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

ResidualAgent::ResidualAgent(int obs_dim, const Td3Config& cfg, uint64_t seed)
    : cfg_(cfg),
      obs_dim_(obs_dim),
      act_dim_(kJointsPerHand),
      in_dim_(obs_dim + kJointsPerHand),
      actor_(net_dims(obs_dim, cfg.hidden, kJointsPerHand), Head::kTanh),
      q1_(net_dims(in_dim_, cfg.hidden, 1), Head::kLinear),
      q2_(net_dims(in_dim_, cfg.hidden, 1), Head::kLinear),
      actor_lin_(net_dims(obs_dim, cfg.hidden, kJointsPerHand),
                 Head::kLinear),
      replay_(obs_dim, kJointsPerHand, cfg.replay_capacity),
      explore_noise_(kJointsPerHand, cfg.noise_beta),
      train_rng_(Rng::derive(seed, "td3-train")),
      explore_rng_(Rng::derive(seed, "td3-explore")),
      held_action_(kJointsPerHand, 0.0) {
  Rng init_rng(Rng::derive(seed, "td3-init"));
  actor_.init_uniform(init_rng);
  actor_.zero_last_layer();  // the first noiseless residual is exactly zero
  q1_.init_uniform(init_rng);
  q1_.init_last_uniform(cfg.critic_init, init_rng);
  q2_.init_uniform(init_rng);
  q2_.init_last_uniform(cfg.critic_init, init_rng);
  actor_t_ = actor_;
  q1_t_ = q1_;
  q2_t_ = q2_;
  opt_actor_ = Adam(actor_.num_params(), cfg.lr);
  opt_q1_ = Adam(q1_.num_params(), cfg.lr);
  opt_q2_ = Adam(q2_.num_params(), cfg.lr);
}

void ResidualAgent::begin_episode() {
  explore_noise_.reset();
  held_left_ = 0;
}

double ResidualAgent::key_on_coef() const {
  return critic_steps_ < cfg_.key_on_switch ? cfg_.key_on_hi : cfg_.key_on_lo;
}

double ResidualAgent::noise_scale() const {
  if (cfg_.noise_anneal_steps <= 0) return 1.0;
  double f = 1.0 - static_cast<double>(critic_steps_) /
                       static_cast<double>(cfg_.noise_anneal_steps);
  return std::max(0.0, f);
}

const std::vector<double>& ResidualAgent::act(
    const std::vector<double>& obs,
    const std::vector<std::pair<int, int>>& lateral_signs, bool explore) {
  if (!explore) {
    held_action_ = deterministic_action(obs);
    return held_action_;
  }
  if (held_left_ <= 0) {
    std::vector<double> base(act_dim_, 0.0);
    if (env_steps_ >= cfg_.initial_steps) {
      base = deterministic_action(obs);
    }
    std::vector<double> eps(act_dim_);
    explore_noise_.sample(explore_rng_, eps.data());
    guide_noise(eps, lateral_signs, cfg_.guided_prob, explore_rng_);
    const double scale = noise_scale();
    for (int j = 0; j < act_dim_; ++j) {
      double e = std::clamp(eps[j], -cfg_.noise_clip, cfg_.noise_clip);
      held_action_[j] = std::clamp(base[j] + scale * e, -1.0, 1.0);
    }
    held_left_ = cfg_.chunk;
  }
  --held_left_;
  ++env_steps_;
  return held_action_;
}

std::vector<double> ResidualAgent::deterministic_action(
    const std::vector<double>& obs) {
  return pass_actor_.forward(actor_, obs.data(), 1);
}

void ResidualAgent::observe(const std::vector<double>& obs,
                            const std::vector<double>& act, double reward,
                            const std::vector<double>& next_obs, double done) {
  replay_.add(obs.data(), act.data(), reward, next_obs.data(), done);
}

void ResidualAgent::maybe_update() {
  if (env_steps_ == 0 || env_steps_ % cfg_.update_every != 0) return;
  if (replay_.size() < static_cast<size_t>(cfg_.batch)) {
    ++skipped_events_;
    if (cfg_.verbose && skipped_events_ == 1) {
      std::fprintf(stderr,
                   "update skipped: replay %zu < batch %d (counted)\n",
                   replay_.size(), cfg_.batch);
    }
    return;
  }
  update_event();
}

void ResidualAgent::update_event() {
  for (int i = 0; i < cfg_.critic_steps_per_event; ++i) critic_step();
}

void ResidualAgent::critic_step() {
  const int B = cfg_.batch;
  b_obs_.resize(static_cast<size_t>(B) * obs_dim_);
  b_act_.resize(static_cast<size_t>(B) * act_dim_);
  b_rew_.resize(B);
  b_next_.resize(static_cast<size_t>(B) * obs_dim_);
  b_done_.resize(B);
  replay_.sample(train_rng_, B, b_obs_.data(), b_act_.data(), b_rew_.data(),
                 b_next_.data(), b_done_.data());

  // Bellman target from the target nets at a smoothed next action.
  const auto& a_next = pass_ta_.forward(actor_t_, b_next_.data(), B);
  x_.resize(static_cast<size_t>(B) * in_dim_);
  for (int b = 0; b < B; ++b) {
    double* row = x_.data() + static_cast<size_t>(b) * in_dim_;
    std::memcpy(row, b_next_.data() + static_cast<size_t>(b) * obs_dim_,
                obs_dim_ * sizeof(double));
    for (int j = 0; j < act_dim_; ++j) {
      double n = std::clamp(train_rng_.normal() * cfg_.smooth_sd,
                            -cfg_.smooth_clip, cfg_.smooth_clip);
      row[obs_dim_ + j] =
          std::clamp(a_next[static_cast<size_t>(b) * act_dim_ + j] + n, -1.0,
                     1.0);
    }
  }
  const auto& tq1 = pass_tq1_.forward(q1_t_, x_.data(), B);
  const auto& tq2 = pass_tq2_.forward(q2_t_, x_.data(), B);
  y_.resize(B);
  for (int b = 0; b < B; ++b) {
    y_[b] = b_rew_[b] + cfg_.gamma * (1.0 - b_done_[b]) *
                            std::min(tq1[b], tq2[b]);
  }

  // Regression of both online critics, dropout active.
  for (int b = 0; b < B; ++b) {
    double* row = x_.data() + static_cast<size_t>(b) * in_dim_;
    std::memcpy(row, b_obs_.data() + static_cast<size_t>(b) * obs_dim_,
                obs_dim_ * sizeof(double));
    std::memcpy(row + obs_dim_,
                b_act_.data() + static_cast<size_t>(b) * act_dim_,
                act_dim_ * sizeof(double));
  }
  double loss = 0.0;
  dq_.resize(B);
  Net* critics[2] = {&q1_, &q2_};
  NetPass* passes[2] = {&pass_q1_, &pass_q2_};
  Adam* opts[2] = {&opt_q1_, &opt_q2_};
  for (int c = 0; c < 2; ++c) {
    const auto& q = passes[c]->forward(*critics[c], x_.data(), B,
                                       cfg_.critic_dropout, &train_rng_);
    for (int b = 0; b < B; ++b) {
      double d = q[b] - y_[b];
      loss += d * d / B;
      dq_[b] = 2.0 * d / B;
    }
    grad_.assign(critics[c]->num_params(), 0.0);
    passes[c]->backward(*critics[c], dq_.data(), grad_);
    opts[c]->step(critics[c]->params(), grad_);
  }
  last_critic_loss_ = loss;

  ++critic_steps_;
  if (critic_steps_ % cfg_.policy_delay == 0) actor_and_target_step();
}

void ResidualAgent::actor_and_target_step() {
  const int B = cfg_.batch;
  // Deterministic policy gradient through the first critic, dropout off.
  const auto& a_pi = pass_actor_.forward(actor_, b_obs_.data(), B);
  for (int b = 0; b < B; ++b) {
    double* row = x_.data() + static_cast<size_t>(b) * in_dim_;
    std::memcpy(row, b_obs_.data() + static_cast<size_t>(b) * obs_dim_,
                obs_dim_ * sizeof(double));
    std::memcpy(row + obs_dim_, a_pi.data() + static_cast<size_t>(b) * act_dim_,
                act_dim_ * sizeof(double));
  }
  const auto& q = pass_q1_.forward(q1_, x_.data(), B);
  double obj = 0.0;
  for (int b = 0; b < B; ++b) obj += q[b] / B;
  last_actor_objective_ = obj;

  dq_.resize(B);
  for (int b = 0; b < B; ++b) dq_[b] = -1.0 / B;
  grad2_.assign(q1_.num_params(), 0.0);  // discarded: critic not updated here
  dx_.resize(static_cast<size_t>(B) * in_dim_);
  pass_q1_.backward(q1_, dq_.data(), grad2_, dx_.data());
  dact_.resize(static_cast<size_t>(B) * act_dim_);
  for (int b = 0; b < B; ++b) {
    std::memcpy(dact_.data() + static_cast<size_t>(b) * act_dim_,
                dx_.data() + static_cast<size_t>(b) * in_dim_ + obs_dim_,
                act_dim_ * sizeof(double));
  }
  grad_.assign(actor_.num_params(), 0.0);
  pass_actor_.backward(actor_, dact_.data(), grad_);
  if (cfg_.actor_preact_l2 > 0.0) {
    // Saturation guard: gradient of (l2/2B) * sum of squared head
    // pre-activations, computed through a linear-head twin so the term
    // keeps pulling even where the squash itself has gone flat.
    actor_lin_.params() = actor_.params();
    const auto& u = pass_lin_.forward(actor_lin_, b_obs_.data(), B);
    du_.resize(static_cast<size_t>(B) * act_dim_);
    for (size_t i = 0; i < du_.size(); ++i) {
      du_[i] = cfg_.actor_preact_l2 * u[i] / B;
    }
    pass_lin_.backward(actor_lin_, du_.data(), grad_);
  }
  opt_actor_.step(actor_.params(), grad_);

  polyak(actor_t_.params(), actor_.params(), cfg_.tau);
  polyak(q1_t_.params(), q1_.params(), cfg_.tau);
  polyak(q2_t_.params(), q2_.params(), cfg_.tau);
}

void ResidualAgent::serialize(BinWriter& w) const {
  w.u32(static_cast<uint32_t>(obs_dim_));
  w.u32(static_cast<uint32_t>(act_dim_));
  actor_.serialize(w);
  q1_.serialize(w);
  q2_.serialize(w);
  actor_t_.serialize(w);
  q1_t_.serialize(w);
  q2_t_.serialize(w);
  opt_actor_.serialize(w);
  opt_q1_.serialize(w);
  opt_q2_.serialize(w);
  w.str(train_rng_.state());
  w.str(explore_rng_.state());
  w.f64v(explore_noise_.state());
  w.i64(env_steps_);
  w.i64(critic_steps_);
  w.i64(skipped_events_);
  w.f64v(held_action_);
  w.i64(held_left_);
}

std::unique_ptr<ResidualAgent> ResidualAgent::deserialize(
    BinReader& r, const Td3Config& cfg) {
  int obs_dim = static_cast<int>(r.u32());
  int act_dim = static_cast<int>(r.u32());
  if (act_dim != kJointsPerHand) {
    throw ParseError("agent action width is not one hand", r.offset());
  }
  auto agent = std::make_unique<ResidualAgent>(obs_dim, cfg, 0);
  agent->actor_ = Net::deserialize(r);
  agent->q1_ = Net::deserialize(r);
  agent->q2_ = Net::deserialize(r);
  agent->actor_t_ = Net::deserialize(r);
  agent->q1_t_ = Net::deserialize(r);
  agent->q2_t_ = Net::deserialize(r);
  agent->opt_actor_ = Adam::deserialize(r);
  agent->opt_q1_ = Adam::deserialize(r);
  agent->opt_q2_ = Adam::deserialize(r);
  agent->train_rng_.set_state(r.str());
  agent->explore_rng_.set_state(r.str());
  agent->explore_noise_.set_state(r.f64v());
  agent->env_steps_ = r.i64();
  agent->critic_steps_ = r.i64();
  agent->skipped_events_ = r.i64();
  agent->held_action_ = r.f64v();
  agent->held_left_ = static_cast<int>(r.i64());
  if (agent->actor_.input_dim() != obs_dim) {
    throw ParseError("actor input width disagrees with header", r.offset());
  }
  return agent;
}

std::vector<std::pair<int, int>> lateral_guidance(
    const std::vector<GoalNote>& goals, const std::vector<int>& active_keys) {
  std::array<int, kNumFingers> targets{-1, -1, -1};
  for (const GoalNote& g : goals) {
    if (g.finger >= 0 && g.finger < kNumFingers) targets[g.finger] = g.key;
  }
  auto attributed = assign_fingers(targets, active_keys);
  std::vector<std::pair<int, int>> signs;
  for (int f = 0; f < kNumFingers; ++f) {
    double e = signed_error(targets[f], attributed[f], 1.0);
    if (e != 0.0) signs.emplace_back(f * 3, e > 0.0 ? 1 : -1);
  }
  return signs;
}

std::array<double, kJointsPerHand> residual_bounds(const Td3Config& cfg,
                                                   const HandConfig& hand) {
  std::array<double, kJointsPerHand> b{};
  for (int j = 0; j < kJointsPerHand; ++j) {
    b[j] = cfg.full_range_bound
               ? 0.5 * (hand.joint_hi[j % 3] - hand.joint_lo[j % 3])
               : cfg.residual_bound;
  }
  return b;
}

ResidualController::ResidualController(
    const Net& actor, const HandTrajectory& base,
    const std::array<double, kJointsPerHand>& bounds)
    : actor_(&actor), base_(&base), bounds_(bounds) {}

void ResidualController::act(const HandEnv& env,
                             const std::vector<double>& obs, double* cmd9) {
  const auto& a = pass_.forward(*actor_, obs.data(), 1);
  const auto& s = base_->states[env.t() + 1];
  for (int j = 0; j < kJointsPerHand; ++j) cmd9[j] = s[j] + bounds_[j] * a[j];
}

namespace {

struct CurveStats {
  double mean = 0.0, sd = 0.0;
};

CurveStats mean_sd(const std::vector<double>& v) {
  CurveStats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

ResidualTrainResult train_residual(const PianoRoll& roll,
                                   const Trajectory& base,
                                   const GapModel& left_gap,
                                   const GapModel& right_gap,
                                   const EnvConfig& env_cfg,
                                   const Td3Config& cfg, uint64_t seed) {
  if (base.num_steps != roll.num_steps) {
    throw ValidationError("base tape was planned for a different score");
  }
  BimanualEnv train_env(roll, left_gap, right_gap, env_cfg);
  BimanualEnv eval_env(roll, left_gap, right_gap, env_cfg);
  const int T = roll.num_steps;

  std::array<std::unique_ptr<ResidualAgent>, kNumHands> agents;
  std::array<std::vector<std::vector<GoalNote>>, kNumHands> goals;
  std::array<std::array<double, kJointsPerHand>, kNumHands> bounds{};
  for (int h = 0; h < kNumHands; ++h) {
    Hand hh = static_cast<Hand>(h);
    goals[h] = roll.goals(hh);
    bounds[h] = residual_bounds(cfg, train_env.hand(hh).hand_config());
    if (roll.has_notes(hh)) {
      agents[h] = std::make_unique<ResidualAgent>(
          train_env.hand(hh).obs_dim(), cfg,
          Rng::derive(seed, h == 0 ? "agent-L" : "agent-R"));
    }
  }

  ResidualTrainResult res;
  auto run_eval = [&](int episode) {
    std::vector<double> f1s;
    for (int k = 0; k < cfg.eval_rollouts; ++k) {
      std::array<std::unique_ptr<HandController>, kNumHands> ctl;
      for (int h = 0; h < kNumHands; ++h) {
        if (agents[h]) {
          ctl[h] = std::make_unique<ResidualController>(
              agents[h]->actor(), base.hands[h], bounds[h]);
        } else {
          ctl[h] = std::make_unique<TrajectoryController>(base.hands[h]);
        }
      }
      RolloutResult r =
          rollout(eval_env, *ctl[0], *ctl[1],
                  Rng::derive(seed, "eval") + static_cast<uint64_t>(k));
      f1s.push_back(r.f1.f1);
    }
    CurveStats s = mean_sd(f1s);
    EvalPoint pt;
    pt.episode = episode;
    pt.mean_f1 = s.mean;
    pt.sd_f1 = s.sd;
    pt.per_seed_f1 = f1s;
    res.curve.push_back(pt);
    if (s.mean > res.best_f1) {
      res.best_f1 = s.mean;
      res.best_episode = episode;
      for (int h = 0; h < kNumHands; ++h) {
        if (!agents[h]) continue;
        res.best_actor[h] = agents[h]->actor();
        BinWriter w;
        agents[h]->serialize(w);
        res.best_agent_blob[h] = w.buffer();
      }
    }
    if (cfg.verbose) {
      std::fprintf(stderr, "episode %3d  validation F1 %.4f (sd %.4f)\n",
                   episode, s.mean, s.sd);
    }
  };

  run_eval(0);
  res.initial_f1 = res.curve.front().mean_f1;

  std::array<std::vector<double>, kNumHands> obs, next_obs;
  std::array<std::vector<std::pair<int, int>>, kNumHands> signs;
  std::array<std::array<double, kJointsPerHand>, kNumHands> cmd{};

  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    train_env.reset(Rng::derive(seed, "train-episode") +
                    static_cast<uint64_t>(ep));
    for (int h = 0; h < kNumHands; ++h) {
      if (!agents[h]) continue;
      agents[h]->begin_episode();
      obs[h] = train_env.hand(static_cast<Hand>(h)).obs();
      signs[h].clear();
    }
    std::array<std::vector<double>, kNumHands> action;
    for (int t = 0; t < T; ++t) {
      for (int h = 0; h < kNumHands; ++h) {
        const auto& s_next = base.hands[h].states[t + 1];
        if (agents[h]) {
          action[h] = agents[h]->act(obs[h], signs[h], true);
          for (int j = 0; j < kJointsPerHand; ++j) {
            cmd[h][j] = s_next[j] + bounds[h][j] * action[h][j];
          }
        } else {
          cmd[h] = s_next;
        }
      }
      train_env.step(cmd[0].data(), cmd[1].data());
      for (int h = 0; h < kNumHands; ++h) {
        if (!agents[h]) continue;
        HandEnv& he = train_env.hand(static_cast<Hand>(h));
        const StepInfo& info = he.last_info();
        he.set_key_on_coef(agents[h]->key_on_coef());
        double r = he.real_reward(info);
        next_obs[h] = he.obs();
        agents[h]->observe(obs[h], action[h], r, next_obs[h],
                           t + 1 == T ? 1.0 : 0.0);
        obs[h] = next_obs[h];
        signs[h] = lateral_guidance(goals[h][t], info.active_keys);
        agents[h]->maybe_update();
      }
    }
    if (ep % cfg.eval_every == 0) run_eval(ep);
  }

  for (int h = 0; h < kNumHands; ++h) {
    if (!agents[h]) continue;
    BinWriter w;
    agents[h]->serialize(w);
    res.final_agent_blob[h] = w.buffer();
  }
  return res;
}

Td3Config make_td3_config(const Config& config) {
  Td3Config c;
  c.gamma = config.f64("td3.gamma", c.gamma);
  c.tau = config.f64("td3.tau", c.tau);
  c.lr = config.f64("td3.lr", c.lr);
  c.batch = static_cast<int>(config.i64("td3.batch", c.batch));
  c.critic_steps_per_event = static_cast<int>(
      config.i64("td3.utd", c.critic_steps_per_event));
  c.policy_delay =
      static_cast<int>(config.i64("td3.policy_delay", c.policy_delay));
  c.update_every =
      static_cast<int>(config.i64("td3.update_every", c.update_every));
  c.initial_steps =
      static_cast<int>(config.i64("td3.initial_steps", c.initial_steps));
  c.critic_dropout = config.f64("td3.dropout", c.critic_dropout);
  c.smooth_sd = config.f64("td3.smooth_sd", c.smooth_sd);
  c.smooth_clip = config.f64("td3.smooth_clip", c.smooth_clip);
  c.noise_beta = config.f64("td3.noise_beta", c.noise_beta);
  c.guided_prob = config.f64("td3.guided_prob", c.guided_prob);
  c.noise_clip = config.f64("td3.noise_clip", c.noise_clip);
  c.noise_anneal_steps = static_cast<int>(
      config.i64("td3.noise_anneal_steps", c.noise_anneal_steps));
  c.actor_preact_l2 = config.f64("td3.actor_preact_l2", c.actor_preact_l2);
  c.residual_bound = config.f64("td3.residual_bound", c.residual_bound);
  c.full_range_bound =
      config.boolean("td3.full_range_bound", c.full_range_bound);
  c.chunk = static_cast<int>(config.i64("td3.chunk", c.chunk));
  c.replay_capacity = static_cast<size_t>(
      config.i64("td3.replay_capacity",
                 static_cast<int64_t>(c.replay_capacity)));
  c.critic_init = config.f64("td3.critic_init", c.critic_init);
  c.key_on_hi = config.f64("td3.key_on_hi", c.key_on_hi);
  c.key_on_lo = config.f64("td3.key_on_lo", c.key_on_lo);
  c.key_on_switch =
      static_cast<int>(config.i64("td3.key_on_switch", c.key_on_switch));
  c.episodes = static_cast<int>(config.i64("td3.episodes", c.episodes));
  c.eval_every = static_cast<int>(config.i64("td3.eval_every", c.eval_every));
  c.eval_rollouts =
      static_cast<int>(config.i64("td3.eval_rollouts", c.eval_rollouts));
  c.verbose = config.boolean("td3.verbose", c.verbose);
  return c;
}

}  // namespace clavier
