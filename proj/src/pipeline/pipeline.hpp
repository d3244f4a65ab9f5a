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
// Stage orchestration: each stage reads its inputs from, and writes its
// products into, one working directory, so any stage can be re-run or
// inspected in isolation. Every emitted file carries a header with the
// config hash, seed, and producing command.

#ifndef CLAVIER_PIPELINE_PIPELINE_HPP_
#define CLAVIER_PIPELINE_PIPELINE_HPP_

#include <cstdint>
#include <string>

#include "score/score.hpp"
#include "util/config.hpp"

namespace clavier {

struct PipelineContext {
  Config config;
  std::string out_dir = ".";
  uint64_t seed = 1;
  int verbose = 0;
  std::string command;  // recorded in artifact headers
};

// MIDI (+ optional fingering file) or a bundled song name -> normalized
// roll.mid and fingering.txt in the working directory.
void stage_parse(PipelineContext& ctx, const std::string& song,
                 const std::string& midi_path,
                 const std::string& fingering_path);

// The roll pair written by stage_parse.
PianoRoll load_roll_artifact(const PipelineContext& ctx);

// Nominal-sim pretraining of each playing hand; writes per-hand policy
// checkpoints, validation curves, and the merged best open-loop tape.
// Returns the tape's nominal-environment score.
double stage_train_sim(PipelineContext& ctx);

// Iterative lateral correction of a tape against a gap preset. source:
// "sim" (the pretrained tape) or "planned" (the analytic tape). Returns the
// best pseudo-real score.
double stage_refine(PipelineContext& ctx, const std::string& gap,
                    const std::string& source);

// One seeded rollout of a source under a gap preset, with a figure/table
// report. mode: open-loop | closed-loop | hybrid | residual. source picks
// the tape for open-loop ("sim", "refined", "planned", "rest"; default
// refined-if-present). Returns its score.
double stage_rollout(PipelineContext& ctx, const std::string& mode,
                     const std::string& gap, const std::string& source);

// The scoring protocol: n seeded rollouts, mean and sample-sd written to a
// summary file, report emitted for the first rollout. Returns the mean.
double stage_eval(PipelineContext& ctx, const std::string& mode,
                  const std::string& gap, const std::string& source,
                  int rollouts);

// Residual training over a base tape ("refined", "sim", "planned") or from
// "scratch" (rest-pose tape, full-range authority). Writes the validation
// curve and per-hand best-agent checkpoints. Returns the best validation
// mean.
double stage_train_residual(PipelineContext& ctx, const std::string& base,
                            const std::string& gap);

// All six baseline arms on one song/gap, writing a comparison table.
// Returns the full pipeline arm's score.
double stage_matrix(PipelineContext& ctx, const std::string& gap);

// Header carrying {config-hash, seed, command} plus extra stage metadata.
ArtifactHeader make_header(const PipelineContext& ctx, const std::string& kind);

}  // namespace clavier

#endif  // CLAVIER_PIPELINE_PIPELINE_HPP_
