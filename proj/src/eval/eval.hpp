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

#ifndef CLAVIER_EVAL_EVAL_HPP_
#define CLAVIER_EVAL_EVAL_HPP_

#include <string>
#include <vector>

#include "score/score.hpp"
#include "util/artifact.hpp"

namespace clavier {

struct F1Score {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  long long tp = 0, fp = 0, fn = 0;
};

// Micro-aggregated precision/recall/F1 over every (step, key) pair: a key
// sounding during a step where the score demands it is a true positive.
// Undefined ratios (empty denominators) score 0.
F1Score score_f1(const std::vector<std::vector<int>>& active_per_step,
                 const std::vector<std::vector<int>>& goal_per_step);

// Goal key sets per step, both hands merged or one hand only.
std::vector<std::vector<int>> goal_key_sets(const PianoRoll& roll);
std::vector<std::vector<int>> goal_key_sets(const PianoRoll& roll, Hand hand);

// Human-readable rollout report: an SVG piano-roll figure (targets outlined,
// hits/misses/extras color-coded) and a columnar text table, written as
// <prefix>.svg and <prefix>.txt.
void write_roll_report(const std::string& path_prefix, const PianoRoll& roll,
                       const std::vector<std::vector<int>>& active_per_step,
                       const F1Score& score, const ArtifactHeader& header);

}  // namespace clavier

#endif  // CLAVIER_EVAL_EVAL_HPP_
