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

#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eval/eval.hpp"
#include "learn/ppo.hpp"
#include "learn/td3.hpp"
#include "refine/refine.hpp"
#include "score/songs.hpp"
#include "sim/env.hpp"
#include "sim/hand.hpp"
#include "sim/keyboard.hpp"
#include "sim/plan.hpp"
#include "sim/rollout.hpp"
#include "util/artifact.hpp"
#include "util/binio.hpp"
#include "util/errors.hpp"
#include "util/rng.hpp"

namespace clavier {

namespace {

std::string join(const PipelineContext& ctx, const std::string& name) {
  if (ctx.out_dir.empty() || ctx.out_dir == ".") return name;
  return ctx.out_dir + "/" + name;
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

// Missing-input errors always name the command that produces the file.
std::string require_file(const PipelineContext& ctx, const std::string& name,
                         const std::string& producing_stage) {
  std::string path = join(ctx, name);
  if (!file_exists(path)) {
    throw ValidationError("missing " + path + ": run the `" +
                          producing_stage + "` stage first to produce it");
  }
  return path;
}

void log(const PipelineContext& ctx, const std::string& msg) {
  if (ctx.verbose > 0) std::cout << "[clavier] " << msg << "\n";
}

const char* hand_tag(int h) { return h == 0 ? "L" : "R"; }

uint64_t gap_seed(const PipelineContext& ctx) {
  return static_cast<uint64_t>(
      ctx.config.i64("gap.seed", static_cast<int64_t>(ctx.seed)));
}

std::array<GapModel, kNumHands> gap_pair(const PipelineContext& ctx,
                                         const std::string& gap) {
  uint64_t s = gap_seed(ctx);
  return {GapModel::preset(gap, Hand::kLeft, s),
          GapModel::preset(gap, Hand::kRight, s)};
}

void check_tape_matches(const Trajectory& tape, const PianoRoll& roll,
                        const std::string& what) {
  if (tape.num_steps != roll.num_steps) {
    throw ValidationError(
        what + " spans " + std::to_string(tape.num_steps) +
        " steps but the working score \"" + roll.name + "\" has " +
        std::to_string(roll.num_steps) +
        "; re-run its producing stage for this song");
  }
}

// Tape selector shared by refine / rollout / eval / train-residual.
// Named sources: refined | sim | planned | rest.
Trajectory load_tape(const PipelineContext& ctx, const PianoRoll& roll,
                     const std::string& source) {
  Trajectory tape;
  if (source == "refined") {
    tape = load_trajectory(require_file(ctx, "refined_tape.traj", "refine"));
  } else if (source == "sim") {
    tape = load_trajectory(require_file(ctx, "sim_tape.traj", "train-sim"));
  } else if (source == "planned") {
    tape = plan_trajectory(build_keyboard(), roll);
  } else if (source == "rest") {
    tape = rest_trajectory(build_keyboard(), roll);
  } else {
    throw UsageError("unknown trajectory source \"" + source +
                     "\" (expected refined, sim, planned or rest)");
  }
  check_tape_matches(tape, roll, "trajectory \"" + source + "\"");
  return tape;
}

// Default open-loop source: the refined tape when present, else the
// pretrained tape; explicit sources skip the fallback.
std::string default_source(const PipelineContext& ctx) {
  if (file_exists(join(ctx, "refined_tape.traj"))) return "refined";
  if (file_exists(join(ctx, "sim_tape.traj"))) return "sim";
  throw ValidationError(
      "no trajectory artifact in " +
      (ctx.out_dir.empty() ? std::string(".") : ctx.out_dir) +
      ": run the `train-sim` stage (and optionally `refine`) first, or pass "
      "an explicit source (planned, rest)");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Everything a rollout mode needs, with owned storage for what the
// controllers reference.
struct RolloutSetup {
  std::unique_ptr<BimanualEnv> env;
  std::unique_ptr<BimanualEnv> twin;  // hybrid proprioception source
  RolloutOptions opts;
  Trajectory tape;                                  // open-loop / residual base
  std::array<std::optional<Net>, kNumHands> policy; // closed-loop / hybrid
  std::array<std::unique_ptr<ResidualAgent>, kNumHands> agent;
  std::array<std::unique_ptr<HandController>, kNumHands> ctrl;
  std::array<double, 3> delta_max{};
};

RolloutSetup build_rollout(PipelineContext& ctx, const PianoRoll& roll,
                           const std::string& mode, const std::string& gap,
                           const std::string& source) {
  EnvConfig env_cfg = make_env_config(ctx.config);
  auto gaps = gap_pair(ctx, gap);
  RolloutSetup s;
  s.env = std::make_unique<BimanualEnv>(roll, gaps[0], gaps[1], env_cfg);

  if (mode == "open-loop") {
    std::string src = source.empty() ? default_source(ctx) : source;
    log(ctx, "open-loop source: " + src);
    s.tape = load_tape(ctx, roll, src);
    for (int h = 0; h < kNumHands; ++h) {
      s.ctrl[h] = std::make_unique<TrajectoryController>(s.tape.hands[h]);
    }
    return s;
  }

  if (mode == "closed-loop" || mode == "hybrid") {
    s.delta_max = make_ppo_config(ctx.config).delta_max;
    for (int h = 0; h < kNumHands; ++h) {
      if (!roll.has_notes(static_cast<Hand>(h))) {
        s.ctrl[h] = std::make_unique<RestController>();
        continue;
      }
      std::string path = require_file(
          ctx, std::string("sim_policy_") + hand_tag(h) + ".bin", "train-sim");
      auto [header, blob] = read_binary_artifact(path, "policy-checkpoint");
      Net value;
      std::vector<double> log_std;
      s.policy[h].emplace();
      ppo_blob_nets(blob, &*s.policy[h], &value, &log_std);
      s.ctrl[h] = std::make_unique<PolicyController>(*s.policy[h], s.delta_max);
    }
    if (mode == "hybrid") {
      s.twin = std::make_unique<BimanualEnv>(roll, GapModel::identity(),
                                             GapModel::identity(), env_cfg);
      s.opts.nominal_twin = s.twin.get();
    }
    return s;
  }

  if (mode == "residual") {
    Td3Config cfg = make_td3_config(ctx.config);
    s.tape = load_trajectory(
        require_file(ctx, "residual_base.traj", "train-residual"));
    check_tape_matches(s.tape, roll, "residual base tape");
    for (int h = 0; h < kNumHands; ++h) {
      if (!roll.has_notes(static_cast<Hand>(h))) {
        s.ctrl[h] = std::make_unique<TrajectoryController>(s.tape.hands[h]);
        continue;
      }
      std::string path =
          require_file(ctx, std::string("residual_agent_") + hand_tag(h) +
                                ".bin", "train-residual");
      auto [header, blob] = read_binary_artifact(path, "agent-checkpoint");
      BinReader r(blob);
      s.agent[h] = ResidualAgent::deserialize(r, cfg);
      s.ctrl[h] = std::make_unique<ResidualController>(
          s.agent[h]->actor(), s.tape.hands[h],
          residual_bounds(cfg, s.env->hand(static_cast<Hand>(h))
                                   .hand_config()));
    }
    return s;
  }

  throw UsageError("unknown rollout mode \"" + mode +
                   "\" (expected open-loop, closed-loop, hybrid or residual)");
}

struct EvalSummary {
  std::vector<double> per_seed_f1;
  double mean_f1 = 0.0, sd_f1 = 0.0;
  RolloutResult first;  // kept for the roll report
};

EvalSummary run_protocol(RolloutSetup& s, uint64_t seed0, int rollouts) {
  EvalSummary out;
  for (int k = 0; k < rollouts; ++k) {
    RolloutResult r = rollout(*s.env, *s.ctrl[0], *s.ctrl[1], seed0 + k,
                              s.opts);
    out.per_seed_f1.push_back(r.f1.f1);
    if (k == 0) out.first = std::move(r);
  }
  out.mean_f1 = mean_of(out.per_seed_f1);
  out.sd_f1 = sample_sd(out.per_seed_f1);
  return out;
}

int eval_rollouts(const PipelineContext& ctx, int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(ctx.config.i64("eval.rollouts", 5));
}

// Residual training core shared by train-residual and the matrix arms.
// Writes <prefix>_curve.txt, <prefix>_base.traj and per-hand
// <prefix>_agent_<L|R>.bin into the working directory.
ResidualTrainResult run_residual_training(PipelineContext& ctx,
                                          const PianoRoll& roll,
                                          const std::string& base,
                                          const std::string& gap,
                                          const std::string& prefix) {
  EnvConfig env_cfg = make_env_config(ctx.config);
  Td3Config cfg = make_td3_config(ctx.config);
  Trajectory base_tape;
  if (base == "scratch") {
    base_tape = load_tape(ctx, roll, "rest");
    if (!ctx.config.has("td3.full_range_bound")) cfg.full_range_bound = true;
  } else if (base == "refined" || base == "sim" || base == "planned") {
    base_tape = load_tape(ctx, roll, base);
  } else {
    throw UsageError("unknown residual base \"" + base +
                     "\" (expected refined, sim, planned or scratch)");
  }
  cfg.verbose = cfg.verbose || ctx.verbose > 1;
  auto gaps = gap_pair(ctx, gap);
  log(ctx, "training residual (" + prefix + "): base=" + base + " gap=" + gap +
               " episodes=" + std::to_string(cfg.episodes));
  ResidualTrainResult res =
      train_residual(roll, base_tape, gaps[0], gaps[1], env_cfg, cfg,
                     Rng::derive(ctx.seed, "train-residual"));

  auto meta = [&](ArtifactHeader h) {
    h.add("song", roll.name);
    h.add("gap", gap);
    h.add("base", base);
    h.add("best-f1", fmt_f64(res.best_f1));
    h.add("best-episode", std::to_string(res.best_episode));
    h.add("initial-f1", fmt_f64(res.initial_f1));
    return h;
  };

  std::ostringstream curve;
  write_text_header(curve, meta(make_header(ctx, "eval-curve")));
  curve << "# columns: episode mean_f1 sd_f1 per_seed_f1...\n";
  for (const EvalPoint& p : res.curve) {
    curve << p.episode << " " << fmt_f64(p.mean_f1) << " " << fmt_f64(p.sd_f1);
    for (double f : p.per_seed_f1) curve << " " << fmt_f64(f);
    curve << "\n";
  }
  write_file(join(ctx, prefix + "_curve.txt"), curve.str());

  save_trajectory(join(ctx, prefix + "_base.traj"), base_tape,
                  meta(make_header(ctx, "trajectory")));
  for (int h = 0; h < kNumHands; ++h) {
    if (res.best_agent_blob[h].empty()) continue;
    ArtifactHeader ah = meta(make_header(ctx, "agent-checkpoint"));
    ah.add("hand", hand_tag(h));
    write_binary_artifact(
        join(ctx, prefix + "_agent_" + hand_tag(h) + ".bin"), ah,
        res.best_agent_blob[h]);
  }
  log(ctx, prefix + ": best validation F1 " + fmt_f64(res.best_f1) +
               " at episode " + std::to_string(res.best_episode) +
               " (tape alone: " + fmt_f64(res.initial_f1) + ")");
  return res;
}

}  // namespace

ArtifactHeader make_header(const PipelineContext& ctx,
                           const std::string& kind) {
  ArtifactHeader h;
  h.kind = kind;
  h.add("config-hash", ctx.config.hash_hex());
  h.add("seed", std::to_string(ctx.seed));
  h.add("command", ctx.command.empty() ? "-" : ctx.command);
  return h;
}

void stage_parse(PipelineContext& ctx, const std::string& song,
                 const std::string& midi_path,
                 const std::string& fingering_path) {
  PianoRoll roll;
  if (midi_path.empty()) {
    if (song.empty()) {
      throw UsageError(
          "parse needs a bundled song name or a MIDI file; bundled songs: " +
          [] {
            std::string all;
            for (const std::string& n : bundled_song_names()) {
              if (!all.empty()) all += ", ";
              all += n;
            }
            return all;
          }());
    }
    roll = bundled_song(song);
    if (!fingering_path.empty()) {
      load_fingering(roll, read_file(fingering_path));
    }
  } else {
    std::string name = song;
    if (name.empty()) {
      name = std::filesystem::path(midi_path).stem().string();
    }
    roll = parse_midi(read_file(midi_path), name);
    if (!fingering_path.empty()) {
      load_fingering(roll, read_file(fingering_path));
    }
  }
  roll.validate();

  ArtifactHeader rh = make_header(ctx, "piano-roll");
  rh.add("song", roll.name);
  rh.add("steps", std::to_string(roll.num_steps));
  rh.add("notes", std::to_string(roll.notes.size()));
  write_file(join(ctx, "roll.mid"), emit_roll(roll, rh));

  ArtifactHeader fh = make_header(ctx, "fingering");
  fh.add("song", roll.name);
  write_file(join(ctx, "fingering.txt"), fingering_text(roll, fh));
  log(ctx, "parsed \"" + roll.name + "\": " + std::to_string(roll.num_steps) +
               " steps, " + std::to_string(roll.notes.size()) + " notes");
}

PianoRoll load_roll_artifact(const PipelineContext& ctx) {
  std::string roll_path = require_file(ctx, "roll.mid", "parse");
  std::string fing_path = require_file(ctx, "fingering.txt", "parse");
  std::string fing_text = read_file(fing_path);
  std::istringstream fing_in(fing_text);
  ArtifactHeader fh = read_text_header(fing_in, "fingering");
  const std::string* song = fh.find("song");
  PianoRoll roll = parse_midi(read_file(roll_path),
                              song != nullptr ? *song : "roll");
  load_fingering(roll, fing_text);
  return roll;
}

double stage_train_sim(PipelineContext& ctx) {
  PianoRoll roll = load_roll_artifact(ctx);
  EnvConfig env_cfg = make_env_config(ctx.config);
  PpoConfig cfg = make_ppo_config(ctx.config);
  cfg.verbose = cfg.verbose || ctx.verbose > 0;
  Keyboard kb = build_keyboard();

  Trajectory tape = rest_trajectory(kb, roll);  // rest fills silent hands
  tape.song = roll.name;
  for (int h = 0; h < kNumHands; ++h) {
    Hand hand = static_cast<Hand>(h);
    if (!roll.has_notes(hand)) continue;
    uint64_t seed =
        Rng::derive(ctx.seed, h == 0 ? "train-sim-left" : "train-sim-right");
    log(ctx, std::string("pretraining hand ") + hand_tag(h) + " (budget " +
                 std::to_string(cfg.total_steps) + " steps)");
    PpoResult res = train_ppo(roll, hand, env_cfg, cfg, seed);

    ArtifactHeader ph = make_header(ctx, "policy-checkpoint");
    ph.add("song", roll.name);
    ph.add("hand", hand_tag(h));
    ph.add("best-f1", fmt_f64(res.best_f1));
    ph.add("best-step", std::to_string(res.best_step));
    ph.add("steps-done", std::to_string(res.steps_done));
    if (res.diverged) ph.add("diverged", "1");
    write_binary_artifact(
        join(ctx, std::string("sim_policy_") + hand_tag(h) + ".bin"), ph,
        res.checkpoint_blob);

    std::ostringstream curve;
    ArtifactHeader ch = make_header(ctx, "eval-curve");
    ch.add("song", roll.name);
    ch.add("hand", hand_tag(h));
    write_text_header(curve, ch);
    curve << "# columns: env_step f1\n";
    for (const PpoEvalPoint& p : res.curve) {
      curve << p.step << " " << fmt_f64(p.f1) << "\n";
    }
    write_file(join(ctx, std::string("sim_curve_") + hand_tag(h) + ".txt"),
               curve.str());

    tape.hands[h] = std::move(res.best_tape);
    log(ctx, std::string("hand ") + hand_tag(h) + ": best validation F1 " +
                 fmt_f64(res.best_f1) + " after " +
                 std::to_string(res.steps_done) + " steps" +
                 (res.diverged ? " (training diverged and was stopped)" : ""));
  }

  BimanualEnv nominal(roll, GapModel::identity(), GapModel::identity(),
                      env_cfg);
  RolloutResult rr = rollout_trajectory(nominal, tape, ctx.seed);
  tape.nominal_f1 = rr.f1.f1;
  ArtifactHeader th = make_header(ctx, "trajectory");
  th.add("song", roll.name);
  th.add("nominal-f1", fmt_f64(tape.nominal_f1));
  save_trajectory(join(ctx, "sim_tape.traj"), tape, th);
  log(ctx, "pretrained tape scores " + fmt_f64(tape.nominal_f1) +
               " on the nominal setup");
  return tape.nominal_f1;
}

double stage_refine(PipelineContext& ctx, const std::string& gap,
                    const std::string& source) {
  PianoRoll roll = load_roll_artifact(ctx);
  EnvConfig env_cfg = make_env_config(ctx.config);
  RefineParams params = make_refine_params(ctx.config);
  std::string src = source.empty() ? "sim" : source;
  if (src == "refined") {
    throw UsageError("refine cannot take its own output as input; "
                     "use source sim or planned");
  }
  Trajectory input = load_tape(ctx, roll, src);
  auto gaps = gap_pair(ctx, gap);
  log(ctx, "refining " + src + " tape against gap \"" + gap + "\" (" +
               std::to_string(params.iterations) + " iterations)");
  RefineResult res = refine(input, roll, gaps[0], gaps[1], env_cfg, params,
                            Rng::derive(ctx.seed, "refine"));

  res.best.nominal_f1 = -1.0;  // scored on the gapped setup, not the nominal
  ArtifactHeader th = make_header(ctx, "trajectory");
  th.add("song", roll.name);
  th.add("gap", gap);
  th.add("source", src);
  th.add("best-f1", fmt_f64(res.best_f1));
  th.add("best-iteration", std::to_string(res.best_iteration));
  save_trajectory(join(ctx, "refined_tape.traj"), res.best, th);

  std::ostringstream hist;
  ArtifactHeader hh = make_header(ctx, "eval-curve");
  hh.add("song", roll.name);
  hh.add("gap", gap);
  write_text_header(hist, hh);
  hist << "# columns: iteration f1   (iteration 0 = the input tape)\n";
  for (size_t i = 0; i < res.f1_history.size(); ++i) {
    hist << i << " " << fmt_f64(res.f1_history[i]) << "\n";
  }
  write_file(join(ctx, "refine_history.txt"), hist.str());
  log(ctx, "refined F1 " + fmt_f64(res.best_f1) + " (input " +
               fmt_f64(res.f1_history.empty() ? 0.0 : res.f1_history[0]) +
               ") at iteration " + std::to_string(res.best_iteration));
  return res.best_f1;
}

double stage_rollout(PipelineContext& ctx, const std::string& mode,
                     const std::string& gap, const std::string& source) {
  PianoRoll roll = load_roll_artifact(ctx);
  RolloutSetup s = build_rollout(ctx, roll, mode, gap, source);
  RolloutResult r = rollout(*s.env, *s.ctrl[0], *s.ctrl[1],
                            Rng::derive(ctx.seed, "rollout"), s.opts);
  ArtifactHeader h = make_header(ctx, "roll-report");
  h.add("song", roll.name);
  h.add("mode", mode);
  h.add("gap", gap);
  h.add("f1", fmt_f64(r.f1.f1));
  write_roll_report(join(ctx, "report_" + mode + "_" + gap), roll,
                    r.merged_active, r.f1, h);
  log(ctx, mode + " rollout on gap \"" + gap + "\": F1 " + fmt_f64(r.f1.f1) +
               " (precision " + fmt_f64(r.f1.precision) + ", recall " +
               fmt_f64(r.f1.recall) + ")");
  return r.f1.f1;
}

double stage_eval(PipelineContext& ctx, const std::string& mode,
                  const std::string& gap, const std::string& source,
                  int rollouts) {
  PianoRoll roll = load_roll_artifact(ctx);
  int n = eval_rollouts(ctx, rollouts);
  RolloutSetup s = build_rollout(ctx, roll, mode, gap, source);
  EvalSummary sum = run_protocol(s, Rng::derive(ctx.seed, "eval"), n);

  ArtifactHeader h = make_header(ctx, "eval-summary");
  h.add("song", roll.name);
  h.add("mode", mode);
  h.add("gap", gap);
  h.add("rollouts", std::to_string(n));
  std::ostringstream out;
  write_text_header(out, h);
  out << "# per-rollout F1, then mean and sample sd on the x100 scale\n";
  for (size_t k = 0; k < sum.per_seed_f1.size(); ++k) {
    out << "rollout " << k << " " << fmt_f64(sum.per_seed_f1[k]) << "\n";
  }
  out << "mean_f1_x100 " << fmt_f64(100.0 * sum.mean_f1) << "\n";
  out << "sd_f1_x100 " << fmt_f64(100.0 * sum.sd_f1) << "\n";
  std::string prefix = "eval_" + mode + "_" + gap;
  write_file(join(ctx, prefix + ".txt"), out.str());

  ArtifactHeader rh = make_header(ctx, "roll-report");
  rh.add("song", roll.name);
  rh.add("mode", mode);
  rh.add("gap", gap);
  rh.add("f1", fmt_f64(sum.first.f1.f1));
  write_roll_report(join(ctx, prefix + "_rollout0"), roll,
                    sum.first.merged_active, sum.first.f1, rh);
  log(ctx, mode + " eval on gap \"" + gap + "\": F1 x100 = " +
               fmt_f64(100.0 * sum.mean_f1) + " +- " +
               fmt_f64(100.0 * sum.sd_f1) + " over " + std::to_string(n) +
               " rollouts");
  return sum.mean_f1;
}

double stage_train_residual(PipelineContext& ctx, const std::string& base,
                            const std::string& gap) {
  PianoRoll roll = load_roll_artifact(ctx);
  std::string b = base.empty() ? "refined" : base;
  ResidualTrainResult res =
      run_residual_training(ctx, roll, b, gap, "residual");
  return res.best_f1;
}

double stage_matrix(PipelineContext& ctx, const std::string& gap) {
  PianoRoll roll = load_roll_artifact(ctx);
  int n = eval_rollouts(ctx, 0);

  // Prerequisites, produced in place when absent.
  if (!file_exists(join(ctx, "sim_tape.traj"))) {
    log(ctx, "matrix: no pretrained tape yet, running train-sim");
    stage_train_sim(ctx);
  }
  if (!file_exists(join(ctx, "refined_tape.traj"))) {
    log(ctx, "matrix: no refined tape yet, running refine");
    stage_refine(ctx, gap, "sim");
  }

  struct Row {
    std::string arm;
    double f1 = 0.0, sd = 0.0;
    std::string detail;
  };
  std::vector<Row> rows;
  uint64_t eval_seed = Rng::derive(ctx.seed, "eval");

  auto eval_arm = [&](const std::string& arm, const std::string& mode,
                      const std::string& source) {
    RolloutSetup s = build_rollout(ctx, roll, mode, gap, source);
    EvalSummary sum = run_protocol(s, eval_seed, n);
    rows.push_back({arm, sum.mean_f1, sum.sd_f1,
                    "mean of " + std::to_string(n) + " rollouts"});
    log(ctx, "matrix arm " + arm + ": F1 x100 = " +
                 fmt_f64(100.0 * sum.mean_f1));
  };
  auto residual_arm = [&](const std::string& arm, const std::string& base) {
    ResidualTrainResult res =
        run_residual_training(ctx, roll, base, gap, "matrix_" + arm);
    EvalPoint best;
    for (const EvalPoint& p : res.curve) {
      if (p.mean_f1 == res.best_f1) {
        best = p;
        break;
      }
    }
    rows.push_back({arm, res.best_f1, best.sd_f1,
                    "best validation mean, episode " +
                        std::to_string(res.best_episode)});
    log(ctx, "matrix arm " + arm + ": F1 x100 = " +
                 fmt_f64(100.0 * res.best_f1));
  };

  eval_arm("sim-closed-loop", "closed-loop", "");
  residual_arm("scratch-rl", "scratch");
  eval_arm("sim-open-loop", "open-loop", "sim");
  residual_arm("sim-plus-residual", "sim");
  eval_arm("refined-open-loop", "open-loop", "refined");
  residual_arm("full", "refined");

  ArtifactHeader h = make_header(ctx, "matrix-table");
  h.add("song", roll.name);
  h.add("gap", gap);
  std::ostringstream out;
  write_text_header(out, h);
  out << "# F1 x100 per arm; residual arms report their best validation "
         "point\n";
  out << "# columns: arm f1_x100 sd_x100 protocol\n";
  for (const Row& r : rows) {
    out << r.arm << " " << fmt_f64(100.0 * r.f1) << " "
        << fmt_f64(100.0 * r.sd) << " (" << r.detail << ")\n";
  }
  write_file(join(ctx, "matrix.txt"), out.str());
  return rows.back().f1;  // the full pipeline arm
}

}  // namespace clavier
