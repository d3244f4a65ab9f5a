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
// Command line front end. Only the public C API is used, so this file
// doubles as a usage example for embedding the library.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clavier/clavier.h"

namespace {

struct SessionDeleter {
  void operator()(clv_session* s) const { clv_session_free(s); }
};

std::string join_argv(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) line += " ";
    line += argv[i];
  }
  return line;
}

int finish(clv_session* s, clv_status status, bool print_f1) {
  if (status != CLV_OK) {
    std::fprintf(stderr, "clavier: %s\n", clv_last_error(s));
    return static_cast<int>(status);
  }
  if (print_f1) std::printf("f1 %.17g\n", clv_last_f1(s));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  clv_runtime_init(argc, argv);

  CLI::App app{
      "clavier: a desk-scale sim-to-real piano-playing pipeline.\n"
      "Stages share one working directory (--out); each writes the "
      "artifacts the next stage reads."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", clv_version());

  std::vector<std::string> config_files, overrides;
  uint64_t seed = 1;
  std::string out_dir = ".";
  int verbose = 0;
  app.add_option("--config", config_files, "Configuration file (INI)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides,
                 "Override a configuration key, e.g. td3.episodes=20");
  app.add_option("--seed", seed, "Master random seed (default 1)");
  app.add_option("--out", out_dir, "Working directory (default .)");
  app.add_flag("-v,--verbose", verbose, "Progress output (repeat for more)");

  std::string song, midi_path, fingering_path;
  CLI::App* parse = app.add_subcommand(
      "parse", std::string("Normalize a song onto the 100 ms grid. Bundled "
                           "songs: ") +
                   clv_bundled_songs());
  parse->add_option("song", song, "Bundled song name (or a name for --midi)");
  parse->add_option("--midi", midi_path, "Standard MIDI file to ingest")
      ->check(CLI::ExistingFile);
  parse->add_option("--fingering", fingering_path,
                    "Fingering annotation file")
      ->check(CLI::ExistingFile);

  CLI::App* train_sim = app.add_subcommand(
      "train-sim", "Pretrain per-hand policies on the nominal simulator and "
                   "export the best open-loop tape");

  std::string gap = "identity", source, mode = "open-loop", base;
  int rollouts = 0;
  auto add_gap = [&gap](CLI::App* cmd) {
    cmd->add_option("--gap", gap,
                    "Gap preset: identity | bias-only | realistic");
  };

  CLI::App* refine = app.add_subcommand(
      "refine", "Iterative lateral correction of a tape on the gapped setup");
  add_gap(refine);
  refine->add_option("--source", source, "Input tape: sim (default) | planned");

  CLI::App* rollout = app.add_subcommand(
      "rollout", "One seeded rollout with a figure/table report");
  rollout->add_option("--mode", mode,
                      "open-loop | closed-loop | hybrid | residual");
  add_gap(rollout);
  rollout->add_option("--source", source,
                      "Open-loop tape: refined | sim | planned | rest");

  CLI::App* eval = app.add_subcommand(
      "eval", "Scoring protocol: n seeded rollouts, mean and sd");
  eval->add_option("--mode", mode,
                   "open-loop | closed-loop | hybrid | residual");
  add_gap(eval);
  eval->add_option("--source", source,
                   "Open-loop tape: refined | sim | planned | rest");
  eval->add_option("--rollouts", rollouts,
                   "Rollout count (default: eval.rollouts, 5)");

  CLI::App* train_residual = app.add_subcommand(
      "train-residual",
      "Residual learning over a base tape on the gapped setup");
  train_residual->add_option(
      "--base", base, "refined (default) | sim | planned | scratch");
  add_gap(train_residual);

  CLI::App* matrix = app.add_subcommand(
      "matrix", "Run all six baseline arms and write a comparison table");
  add_gap(matrix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage
  }

  std::unique_ptr<clv_session, SessionDeleter> session(clv_session_new());
  if (!session) {
    std::fprintf(stderr, "clavier: could not create a session\n");
    return 3;
  }
  clv_session* s = session.get();
  for (const std::string& path : config_files) {
    if (clv_status st = clv_config_load(s, path.c_str()); st != CLV_OK) {
      return finish(s, st, false);
    }
  }
  for (const std::string& kv : overrides) {
    if (clv_status st = clv_config_set(s, kv.c_str()); st != CLV_OK) {
      return finish(s, st, false);
    }
  }
  clv_set_seed(s, seed);
  clv_set_out_dir(s, out_dir.c_str());
  clv_set_verbose(s, verbose);
  std::string command = join_argv(argc, argv);
  clv_set_command(s, command.c_str());

  if (app.got_subcommand(parse)) {
    return finish(s,
                  clv_parse(s, song.c_str(), midi_path.c_str(),
                            fingering_path.c_str()),
                  false);
  }
  if (app.got_subcommand(train_sim)) {
    return finish(s, clv_train_sim(s), true);
  }
  if (app.got_subcommand(refine)) {
    return finish(s, clv_refine(s, gap.c_str(), source.c_str()), true);
  }
  if (app.got_subcommand(rollout)) {
    return finish(
        s, clv_rollout(s, mode.c_str(), gap.c_str(), source.c_str()), true);
  }
  if (app.got_subcommand(eval)) {
    return finish(
        s, clv_eval(s, mode.c_str(), gap.c_str(), source.c_str(), rollouts),
        true);
  }
  if (app.got_subcommand(train_residual)) {
    return finish(s, clv_train_residual(s, base.c_str(), gap.c_str()), true);
  }
  if (app.got_subcommand(matrix)) {
    return finish(s, clv_matrix(s, gap.c_str()), true);
  }
  std::fprintf(stderr, "clavier: no command\n");
  return 1;
}
