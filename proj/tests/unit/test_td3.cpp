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
// Residual-agent tests: replay storage and sampling, Bellman fixed points,
// the deterministic policy gradient against finite differences, exploration
// plumbing (chunking, guidance, schedules, gating), the bound contract of
// residual execution, and full state serialization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <memory>
#include <utility>
#include <vector>

#include "doctest.h"
#include "learn/net.hpp"
#include "learn/td3.hpp"
#include "score/score.hpp"
#include "score/songs.hpp"
#include "sim/env.hpp"
#include "sim/plan.hpp"
#include "sim/rollout.hpp"
#include "util/binio.hpp"
#include "util/rng.hpp"

namespace clavier {
namespace {

Td3Config tiny_config() {
  Td3Config cfg;
  cfg.hidden = {16, 16};
  cfg.batch = 16;
  cfg.critic_steps_per_event = 8;
  cfg.update_every = 1;
  cfg.initial_steps = 0;
  cfg.critic_dropout = 0.0;
  cfg.noise_anneal_steps = 0;  // keep full exploration noise
  cfg.episodes = 1;
  return cfg;
}

std::vector<double> random_obs(Rng& rng, int dim) {
  std::vector<double> o(dim);
  for (double& x : o) x = rng.uniform(-1.0, 1.0);
  return o;
}

TEST_CASE("replay buffer wraps around and keeps pairs intact") {
  const int obs_dim = 3, act_dim = 2;
  ReplayBuffer buf(obs_dim, act_dim, 8);
  for (int i = 0; i < 12; ++i) {
    double v = static_cast<double>(i);
    std::vector<double> o(obs_dim, v), a(act_dim, -v), n(obs_dim, v + 0.5);
    buf.add(o.data(), a.data(), v, n.data(), i % 2 ? 1.0 : 0.0);
  }
  CHECK(buf.size() == 8);
  CHECK(buf.capacity() == 8);

  Rng rng(3);
  const int B = 512;
  std::vector<double> o(B * obs_dim), a(B * act_dim), r(B), n(B * obs_dim),
      d(B);
  buf.sample(rng, B, o.data(), a.data(), r.data(), n.data(), d.data());
  for (int b = 0; b < B; ++b) {
    // The four oldest transitions (rewards 0..3) were overwritten.
    CHECK(r[b] >= 4.0);
    CHECK(r[b] <= 11.0);
    // Fields of one transition stay together.
    CHECK(o[b * obs_dim] == r[b]);
    CHECK(a[b * act_dim] == -r[b]);
    CHECK(n[b * obs_dim] == r[b] + 0.5);
    CHECK(d[b] == (static_cast<int>(r[b]) % 2 ? 1.0 : 0.0));
  }
}

TEST_CASE("replay sampling is uniform with replacement") {
  const int obs_dim = 1, act_dim = 1;
  const int N = 64;
  ReplayBuffer buf(obs_dim, act_dim, N);
  for (int i = 0; i < N; ++i) {
    double v = static_cast<double>(i);
    buf.add(&v, &v, v, &v, 0.0);
  }
  Rng rng(11);
  const int B = 64, rounds = 1000;
  std::vector<double> o(B), a(B), r(B), n(B), d(B);
  std::vector<int> counts(N, 0);
  for (int k = 0; k < rounds; ++k) {
    buf.sample(rng, B, o.data(), a.data(), r.data(), n.data(), d.data());
    for (int b = 0; b < B; ++b) ++counts[static_cast<int>(r[b])];
  }
  // Each index expects B*rounds/N = 1000 hits, sd ~ sqrt(1000*(1-1/64)).
  double expect = static_cast<double>(B) * rounds / N;
  double sd = std::sqrt(expect * (1.0 - 1.0 / N));
  for (int i = 0; i < N; ++i) {
    CHECK(std::fabs(counts[i] - expect) < 6.0 * sd);
  }
}

TEST_CASE("critic converges to the reward at gamma zero") {
  Td3Config cfg = tiny_config();
  cfg.gamma = 0.0;
  const int obs_dim = 6;
  ResidualAgent agent(obs_dim, cfg, 77);

  Rng rng(5);
  std::vector<double> obs = random_obs(rng, obs_dim);
  std::vector<double> next = random_obs(rng, obs_dim);
  std::vector<double> act(kJointsPerHand, 0.25);
  for (int i = 0; i < 300; ++i) {
    // Drive the env-step counter through the exploration path.
    agent.act(obs, {}, true);
    agent.observe(obs, act, 1.0, next, 0.0);
    agent.maybe_update();
  }
  CHECK(agent.critic_steps() > 1000);

  std::vector<double> x(obs_dim + kJointsPerHand);
  std::copy(obs.begin(), obs.end(), x.begin());
  std::copy(act.begin(), act.end(), x.begin() + obs_dim);
  NetPass pass;
  double v1 = pass.forward(agent.q1(), x.data(), 1)[0];
  double v2 = pass.forward(agent.q2(), x.data(), 1)[0];
  CHECK(v1 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(v2 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("deterministic policy gradient matches finite differences") {
  // The objective the actor climbs: J = mean_b Q(o_b, mu(o_b)). The
  // implementation chains the critic's input gradient into the actor's
  // backward pass; check that exact pattern against central differences.
  const int obs_dim = 5, act_dim = 4, B = 3;
  Net actor({obs_dim, 8, 7, act_dim}, Head::kTanh);
  Net critic({obs_dim + act_dim, 9, 1}, Head::kLinear);
  Rng rng(2026);
  actor.init_uniform(rng);
  critic.init_uniform(rng);
  std::vector<double> obs(B * obs_dim);
  for (double& x : obs) x = rng.uniform(-1.0, 1.0);

  auto objective = [&]() {
    NetPass pa, pc;
    const auto& a = pa.forward(actor, obs.data(), B);
    std::vector<double> x(B * (obs_dim + act_dim));
    for (int b = 0; b < B; ++b) {
      std::memcpy(&x[b * (obs_dim + act_dim)], &obs[b * obs_dim],
                  obs_dim * sizeof(double));
      std::memcpy(&x[b * (obs_dim + act_dim) + obs_dim], &a[b * act_dim],
                  act_dim * sizeof(double));
    }
    const auto& q = pc.forward(critic, x.data(), B);
    double j = 0.0;
    for (int b = 0; b < B; ++b) j += q[b] / B;
    return j;
  };

  // Analytic gradient, the agent's two-stage backward.
  NetPass pa, pc;
  const auto& a = pa.forward(actor, obs.data(), B);
  std::vector<double> x(B * (obs_dim + act_dim));
  for (int b = 0; b < B; ++b) {
    std::memcpy(&x[b * (obs_dim + act_dim)], &obs[b * obs_dim],
                obs_dim * sizeof(double));
    std::memcpy(&x[b * (obs_dim + act_dim) + obs_dim], &a[b * act_dim],
                act_dim * sizeof(double));
  }
  pc.forward(critic, x.data(), B);
  std::vector<double> dq(B, 1.0 / B);
  std::vector<double> gcrit(critic.num_params(), 0.0);
  std::vector<double> dx(B * (obs_dim + act_dim));
  pc.backward(critic, dq.data(), gcrit, dx.data());
  std::vector<double> dact(B * act_dim);
  for (int b = 0; b < B; ++b) {
    std::memcpy(&dact[b * act_dim], &dx[b * (obs_dim + act_dim) + obs_dim],
                act_dim * sizeof(double));
  }
  std::vector<double> grad(actor.num_params(), 0.0);
  pa.backward(actor, dact.data(), grad);

  Rng pick(9);
  for (int k = 0; k < 30; ++k) {
    size_t i = static_cast<size_t>(pick.uniform(0.0, 1.0) *
                                   static_cast<double>(actor.num_params()));
    i = std::min(i, actor.num_params() - 1);
    const double h = 1e-6;
    double saved = actor.params()[i];
    actor.params()[i] = saved + h;
    double jp = objective();
    actor.params()[i] = saved - h;
    double jm = objective();
    actor.params()[i] = saved;
    double fd = (jp - jm) / (2.0 * h);
    CHECK(grad[i] ==
          doctest::Approx(fd).epsilon(1e-3).scale(std::max(1.0, std::fabs(fd))));
  }
}

TEST_CASE("pre-activation penalty gradient matches finite differences") {
  // The saturation guard differentiates (l2 / 2B) * sum u^2 where u is the
  // head pre-activation, evaluated through a linear-head twin.
  const int obs_dim = 4, act_dim = 3, B = 2;
  const double l2 = 0.01;
  Net actor({obs_dim, 6, act_dim}, Head::kTanh);
  Rng rng(31);
  actor.init_uniform(rng);
  std::vector<double> obs(B * obs_dim);
  for (double& x : obs) x = rng.uniform(-1.0, 1.0);

  Net twin(actor.dims(), Head::kLinear);
  auto penalty = [&]() {
    twin.params() = actor.params();
    NetPass p;
    const auto& u = p.forward(twin, obs.data(), B);
    double acc = 0.0;
    for (int i = 0; i < B * act_dim; ++i) acc += u[i] * u[i];
    return 0.5 * l2 * acc / B;
  };

  twin.params() = actor.params();
  NetPass p;
  const auto& u = p.forward(twin, obs.data(), B);
  std::vector<double> du(B * act_dim);
  for (int i = 0; i < B * act_dim; ++i) du[i] = l2 * u[i] / B;
  std::vector<double> grad(actor.num_params(), 0.0);
  p.backward(twin, du.data(), grad);

  for (size_t i = 0; i < actor.num_params(); i += 7) {
    const double h = 1e-6;
    double saved = actor.params()[i];
    actor.params()[i] = saved + h;
    double jp = penalty();
    actor.params()[i] = saved - h;
    double jm = penalty();
    actor.params()[i] = saved;
    double fd = (jp - jm) / (2.0 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(2e-4).scale(
                         std::max(1.0, std::fabs(fd))));
  }
}

TEST_CASE("zero-initialized residual replays the tape bit for bit") {
  PianoRoll roll = bundled_song("twinkle");
  Keyboard kb;
  Trajectory tape = plan_trajectory(kb, roll);
  EnvConfig env_cfg;
  BimanualEnv env_a(roll, GapModel::identity(), GapModel::identity(), env_cfg);
  BimanualEnv env_b(roll, GapModel::identity(), GapModel::identity(), env_cfg);

  Td3Config cfg;  // full-size nets; only construction cost matters here
  BimanualEnv probe(roll, GapModel::identity(), GapModel::identity(), env_cfg);
  ResidualAgent left(probe.hand(Hand::kLeft).obs_dim(), cfg, 1);
  ResidualAgent right(probe.hand(Hand::kRight).obs_dim(), cfg, 2);

  auto bl = residual_bounds(cfg, probe.hand(Hand::kLeft).hand_config());
  auto br = residual_bounds(cfg, probe.hand(Hand::kRight).hand_config());
  ResidualController rl(left.actor(), tape.hands[0], bl);
  ResidualController rr(right.actor(), tape.hands[1], br);
  TrajectoryController tl(tape.hands[0]), tr(tape.hands[1]);

  RolloutResult res = rollout(env_a, rl, rr, 99);
  RolloutResult open = rollout(env_b, tl, tr, 99);
  CHECK(res.f1.f1 == open.f1.f1);
  REQUIRE(res.hands[0].commands.size() == open.hands[0].commands.size());
  for (size_t t = 0; t < res.hands[0].commands.size(); ++t) {
    for (int h = 0; h < kNumHands; ++h) {
      for (int j = 0; j < kJointsPerHand; ++j) {
        CHECK(res.hands[h].commands[t][j] == open.hands[h].commands[t][j]);
      }
    }
  }
}

TEST_CASE("exploration chunks hold one residual for two steps") {
  Td3Config cfg = tiny_config();
  cfg.chunk = 2;
  cfg.guided_prob = 0.0;
  const int obs_dim = 5;
  ResidualAgent agent(obs_dim, cfg, 4);
  Rng rng(8);

  std::vector<std::vector<double>> acts;
  for (int t = 0; t < 8; ++t) {
    // Different observations every step: equality across a chunk proves
    // the held action is reused rather than recomputed.
    acts.push_back(agent.act(random_obs(rng, obs_dim), {}, true));
  }
  for (int t = 0; t < 8; t += 2) {
    CHECK(acts[t] == acts[t + 1]);
    if (t + 2 < 8) CHECK(acts[t] != acts[t + 2]);
  }
  CHECK(agent.env_steps() == 8);

  // The noiseless path neither consumes the chunk nor counts a step.
  std::vector<double> obs = random_obs(rng, obs_dim);
  agent.act(obs, {}, false);
  CHECK(agent.env_steps() == 8);

  // begin_episode discards a half-used chunk: the next two explore calls
  // form a fresh pair.
  agent.act(obs, {}, true);  // consumes one of a new chunk
  agent.begin_episode();
  auto a1 = agent.act(random_obs(rng, obs_dim), {}, true);
  auto a2 = agent.act(random_obs(rng, obs_dim), {}, true);
  CHECK(a1 == a2);
}

TEST_CASE("exploration noise respects the clip and the initial phase") {
  Td3Config cfg = tiny_config();
  cfg.chunk = 1;
  cfg.guided_prob = 0.0;
  cfg.initial_steps = 16;
  cfg.noise_clip = 0.5;
  const int obs_dim = 4;
  ResidualAgent agent(obs_dim, cfg, 12);
  Rng rng(1);
  for (int t = 0; t < 64; ++t) {
    auto a = agent.act(random_obs(rng, obs_dim), {}, true);
    // Zero-initialized actor head: the action is pure clipped noise both
    // during and after the initial phase.
    for (double v : a) CHECK(std::fabs(v) <= 0.5);
  }
}

TEST_CASE("guided exploration forces the requested lateral signs") {
  Td3Config cfg = tiny_config();
  cfg.chunk = 2;
  cfg.guided_prob = 1.0;
  const int obs_dim = 4;
  ResidualAgent agent(obs_dim, cfg, 21);
  Rng rng(2);
  std::vector<std::pair<int, int>> signs = {{0, +1}, {3, -1}};
  for (int t = 0; t < 200; ++t) {
    auto a = agent.act(random_obs(rng, obs_dim), signs, true);
    CHECK(a[0] >= 0.0);
    CHECK(a[3] <= 0.0);
  }
}

TEST_CASE("updates are gated until one full batch is stored") {
  Td3Config cfg = tiny_config();
  cfg.batch = 64;
  cfg.update_every = 4;
  cfg.chunk = 1;
  const int obs_dim = 3;
  ResidualAgent agent(obs_dim, cfg, 6);
  Rng rng(7);
  std::vector<double> act(kJointsPerHand, 0.1);
  for (int i = 1; i <= 63; ++i) {
    std::vector<double> o = random_obs(rng, obs_dim);
    agent.act(o, {}, true);
    agent.observe(o, act, 0.5, o, 0.0);
    agent.maybe_update();
  }
  CHECK(agent.critic_steps() == 0);
  CHECK(agent.skipped_events() == 15);  // steps 4, 8, ..., 60

  std::vector<double> o = random_obs(rng, obs_dim);
  agent.act(o, {}, true);
  agent.observe(o, act, 0.5, o, 0.0);
  agent.maybe_update();  // step 64: batch available
  CHECK(agent.critic_steps() == 8);
  CHECK(agent.skipped_events() == 15);
}

TEST_CASE("noise fade and key-on coefficient follow the gradient count") {
  Td3Config cfg = tiny_config();
  cfg.batch = 8;
  cfg.update_every = 2;
  cfg.chunk = 1;
  cfg.critic_steps_per_event = 4;
  cfg.noise_anneal_steps = 64;
  cfg.key_on_switch = 32;
  const int obs_dim = 3;
  ResidualAgent agent(obs_dim, cfg, 14);
  CHECK(agent.noise_scale() == 1.0);
  CHECK(agent.key_on_coef() == 0.7);

  Rng rng(3);
  std::vector<double> act(kJointsPerHand, 0.0);
  int64_t expected = 0;
  for (int i = 1; i <= 40; ++i) {
    std::vector<double> o = random_obs(rng, obs_dim);
    agent.act(o, {}, true);
    agent.observe(o, act, 0.1, o, 0.0);
    agent.maybe_update();
    if (i % 2 == 0 && i >= 8) expected += 4;
    CHECK(agent.critic_steps() == expected);
    double want = std::max(0.0, 1.0 - static_cast<double>(expected) / 64.0);
    CHECK(agent.noise_scale() == doctest::Approx(want).epsilon(1e-12));
    CHECK(agent.key_on_coef() == (expected < 32 ? 0.7 : 0.5));
  }
  CHECK(agent.noise_scale() == 0.0);  // 68 critic steps > 64
}

TEST_CASE("residual bounds cover the authority contract") {
  Td3Config cfg;
  HandConfig hand;  // default joint limits
  auto b = residual_bounds(cfg, hand);
  for (int j = 0; j < kJointsPerHand; ++j) CHECK(b[j] == cfg.residual_bound);

  cfg.full_range_bound = true;
  auto wide = residual_bounds(cfg, hand);
  for (int j = 0; j < kJointsPerHand; ++j) {
    CHECK(wide[j] ==
          0.5 * (hand.joint_hi[j % 3] - hand.joint_lo[j % 3]));
  }
  CHECK(wide[0] == doctest::Approx(0.6));
  CHECK(wide[1] == doctest::Approx(0.75));
  CHECK(wide[2] == doctest::Approx(0.8));
}

TEST_CASE("saturated actor output commands exactly tape plus bound") {
  PianoRoll roll = bundled_song("twinkle");
  Keyboard kb;
  Trajectory tape = plan_trajectory(kb, roll);
  EnvConfig env_cfg;
  BimanualEnv env(roll, GapModel::identity(), GapModel::identity(), env_cfg);
  const HandEnv& he = env.hand(Hand::kRight);

  Net actor({he.obs_dim(), 4, kJointsPerHand}, Head::kTanh);
  std::fill(actor.params().begin(), actor.params().end(), 0.0);
  // Head biases far into the squash's flat region: outputs are exactly +/-1.
  double* bias = actor.bias(actor.num_layers() - 1);
  for (int j = 0; j < kJointsPerHand; ++j) bias[j] = j % 2 ? -20.0 : 20.0;

  Td3Config cfg;
  auto bounds = residual_bounds(cfg, he.hand_config());
  ResidualController ctl(actor, tape.hands[1], bounds);
  std::array<double, kJointsPerHand> cmd{};
  std::vector<double> obs = he.obs();
  ctl.act(he, obs, cmd.data());
  for (int j = 0; j < kJointsPerHand; ++j) {
    double want = tape.hands[1].states[1][j] +
                  (j % 2 ? -bounds[j] : bounds[j]);
    CHECK(cmd[j] == want);
  }
}

TEST_CASE("lateral guidance points pressed fingers toward their targets") {
  // Finger 1 (middle) should press key 52 but pressed 50: guide the
  // lateral joint of finger 1 (action index 3) upward.
  std::vector<GoalNote> goals = {{52, 1}};
  std::vector<std::pair<int, int>> s = lateral_guidance(goals, {50});
  REQUIRE(s.size() == 1);
  CHECK(s[0].first == 3);
  CHECK(s[0].second == +1);

  // Pressing above the target guides downward.
  s = lateral_guidance(goals, {55});
  REQUIRE(s.size() == 1);
  CHECK(s[0].first == 3);
  CHECK(s[0].second == -1);

  // Exact hit or silence: nothing to guide.
  CHECK(lateral_guidance(goals, {52}).empty());
  CHECK(lateral_guidance(goals, {}).empty());

  // Two fingers with separate targets and misses on both sides.
  std::vector<GoalNote> two = {{40, 0}, {47, 2}};
  s = lateral_guidance(two, {42, 45});
  REQUIRE(s.size() == 2);
  CHECK(s[0].first == 0);
  CHECK(s[0].second == -1);  // index finger pressed 42, target 40
  CHECK(s[1].first == 6);
  CHECK(s[1].second == +1);  // ring finger pressed 45, target 47
}

TEST_CASE("agent serialization restores behavior exactly") {
  Td3Config cfg = tiny_config();
  cfg.chunk = 2;
  const int obs_dim = 5;
  ResidualAgent agent(obs_dim, cfg, 33);
  Rng rng(17);
  std::vector<double> act(kJointsPerHand, 0.2);
  for (int i = 0; i < 40; ++i) {
    std::vector<double> o = random_obs(rng, obs_dim);
    agent.act(o, {}, true);
    agent.observe(o, act, 0.3, o, 0.0);
    agent.maybe_update();
  }
  // Leave a chunk half-consumed so the held action must be carried over.
  std::vector<double> o_mid = random_obs(rng, obs_dim);
  agent.act(o_mid, {}, true);

  BinWriter w;
  agent.serialize(w);
  BinReader r(w.buffer());
  std::unique_ptr<ResidualAgent> copy = ResidualAgent::deserialize(r, cfg);

  CHECK(copy->env_steps() == agent.env_steps());
  CHECK(copy->critic_steps() == agent.critic_steps());
  CHECK(copy->skipped_events() == agent.skipped_events());

  for (int k = 0; k < 3; ++k) {
    std::vector<double> o = random_obs(rng, obs_dim);
    std::vector<double> a = agent.deterministic_action(o);
    std::vector<double> b = copy->deterministic_action(o);
    CHECK(a == b);
  }
  // Exploration resumes identically: rng streams, correlated-noise state
  // and the half-used chunk all travel with the agent.
  for (int k = 0; k < 6; ++k) {
    std::vector<double> o = random_obs(rng, obs_dim);
    std::vector<double> a = agent.act(o, {}, true);
    std::vector<double> b = copy->act(o, {}, true);
    CHECK(a == b);
  }
}

TEST_CASE("training on a zero-reward env keeps commands within the bound") {
  Td3Config cfg = tiny_config();
  cfg.batch = 32;
  cfg.chunk = 1;
  const int obs_dim = 4;
  ResidualAgent agent(obs_dim, cfg, 55);
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> o = random_obs(rng, obs_dim);
    std::vector<double> a = agent.act(o, {}, true);
    for (double v : a) {
      CHECK(v <= 1.0);
      CHECK(v >= -1.0);
    }
    agent.observe(o, a, 0.0, o, 0.0);
    agent.maybe_update();
  }
  CHECK(agent.critic_steps() > 0);
  std::vector<double> a = agent.deterministic_action(random_obs(rng, obs_dim));
  for (double v : a) {
    CHECK(v < 1.0);
    CHECK(v > -1.0);  // squashing head cannot exceed the normalized rail
  }
}

}  // namespace
}  // namespace clavier
