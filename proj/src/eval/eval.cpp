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

#include "eval/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "sim/keyboard.hpp"
#include "util/errors.hpp"

namespace clavier {

F1Score score_f1(const std::vector<std::vector<int>>& active_per_step,
                 const std::vector<std::vector<int>>& goal_per_step) {
  if (active_per_step.size() != goal_per_step.size()) {
    throw ValidationError("activation log and goal list disagree on length");
  }
  F1Score s;
  for (size_t t = 0; t < goal_per_step.size(); ++t) {
    // A key either sounds during a step or it does not: the unit of
    // account is the (step, key) pair, so repeated mentions count once.
    std::set<int> active(active_per_step[t].begin(), active_per_step[t].end());
    std::set<int> goal(goal_per_step[t].begin(), goal_per_step[t].end());
    for (int k : active) {
      if (goal.count(k)) ++s.tp;
      else ++s.fp;
    }
    for (int k : goal) {
      if (!active.count(k)) ++s.fn;
    }
  }
  if (s.tp + s.fp > 0) {
    s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
  }
  if (s.tp + s.fn > 0) {
    s.recall = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
  }
  if (s.precision + s.recall > 0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

namespace {

std::vector<std::vector<int>> keys_only(
    const std::vector<std::vector<GoalNote>>& goals) {
  std::vector<std::vector<int>> out(goals.size());
  for (size_t t = 0; t < goals.size(); ++t) {
    for (const GoalNote& gn : goals[t]) out[t].push_back(gn.key);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> goal_key_sets(const PianoRoll& roll) {
  auto left = keys_only(roll.goals(Hand::kLeft));
  auto right = keys_only(roll.goals(Hand::kRight));
  for (size_t t = 0; t < left.size(); ++t) {
    left[t].insert(left[t].end(), right[t].begin(), right[t].end());
    std::sort(left[t].begin(), left[t].end());
    left[t].erase(std::unique(left[t].begin(), left[t].end()), left[t].end());
  }
  return left;
}

std::vector<std::vector<int>> goal_key_sets(const PianoRoll& roll, Hand hand) {
  return keys_only(roll.goals(hand));
}

void write_roll_report(const std::string& path_prefix, const PianoRoll& roll,
                       const std::vector<std::vector<int>>& active_per_step,
                       const F1Score& score, const ArtifactHeader& header) {
  auto goals = goal_key_sets(roll);
  int T = roll.num_steps;

  // Key range shown: the union of everything scored or played, padded.
  int lo = kNumKeys - 1, hi = 0;
  auto widen = [&](const std::vector<std::vector<int>>& sets) {
    for (const auto& s : sets) {
      for (int k : s) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
  };
  widen(goals);
  widen(active_per_step);
  if (lo > hi) { lo = 30; hi = 60; }
  lo = std::max(0, lo - 2);
  hi = std::min(kNumKeys - 1, hi + 2);

  // --- SVG: time along x, keys along y (low keys at the bottom) ---
  const int cell = 6, pad = 46, top = 28;
  int width = pad + T * cell + 10;
  int height = top + (hi - lo + 1) * cell + 14;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  char title[160];
  std::snprintf(title, sizeof title,
                "%s - F1 %.3f (precision %.3f, recall %.3f)",
                roll.name.c_str(), score.f1, score.precision, score.recall);
  svg << "<text x='" << pad << "' y='18' font-family='monospace' "
      << "font-size='12'>" << title << "</text>\n";
  auto cx = [&](int t) { return pad + t * cell; };
  auto cy = [&](int k) { return top + (hi - k) * cell; };
  for (int k = lo; k <= hi; ++k) {
    if (is_black_key(k)) {
      svg << "<rect x='" << pad << "' y='" << cy(k) << "' width='"
          << T * cell << "' height='" << cell
          << "' fill='#f2f2f2'/>\n";
    }
    if ((k + kLowestMidiNote) % 12 == 0) {  // label the Cs
      svg << "<text x='4' y='" << cy(k) + cell
          << "' font-family='monospace' font-size='9'>C"
          << (k + kLowestMidiNote) / 12 - 1 << "</text>\n";
    }
  }
  for (int t = 0; t < T; ++t) {
    std::set<int> goal(goals[t].begin(), goals[t].end());
    std::set<int> act;
    if (t < static_cast<int>(active_per_step.size())) {
      act.insert(active_per_step[t].begin(), active_per_step[t].end());
    }
    for (int k = lo; k <= hi; ++k) {
      bool g = goal.count(k), a = act.count(k);
      if (!g && !a) continue;
      const char* fill = g && a ? "#2e8b57" : (a ? "#d9534f" : "none");
      svg << "<rect x='" << cx(t) << "' y='" << cy(k) << "' width='" << cell
          << "' height='" << cell << "' fill='" << fill
          << "' stroke='#2b4a7a' stroke-width='" << (g ? "0.8" : "0")
          << "'/>\n";
    }
  }
  svg << "<text x='" << pad << "' y='" << height - 3
      << "' font-family='monospace' font-size='9'>"
      << "filled green: hit, filled red: extra, outline only: miss; "
      << "one column = 100 ms</text>\n";
  svg << "</svg>\n";
  write_file(path_prefix + ".svg", svg.str());

  // --- columnar text ---
  std::ostringstream txt;
  ArtifactHeader h = header;
  h.kind = "roll-report";
  h.add("song", roll.name);
  h.add("f1", fmt_f64(score.f1));
  h.add("precision", fmt_f64(score.precision));
  h.add("recall", fmt_f64(score.recall));
  write_text_header(txt, h);
  txt << "#   step | goal keys          | played keys        | verdict\n";
  for (int t = 0; t < T; ++t) {
    std::set<int> goal(goals[t].begin(), goals[t].end());
    std::set<int> act;
    if (t < static_cast<int>(active_per_step.size())) {
      act.insert(active_per_step[t].begin(), active_per_step[t].end());
    }
    auto join = [](const std::set<int>& s) {
      std::string out;
      for (int k : s) {
        if (!out.empty()) out += " ";
        out += std::to_string(k);
      }
      return out.empty() ? "-" : out;
    };
    bool miss = std::any_of(goal.begin(), goal.end(),
                            [&](int k) { return !act.count(k); });
    bool extra = std::any_of(act.begin(), act.end(),
                             [&](int k) { return !goal.count(k); });
    const char* verdict =
        miss && extra ? "miss+extra" : miss ? "miss" : extra ? "extra" : "ok";
    char row[128];
    std::snprintf(row, sizeof row, "%8d | %-18s | %-18s | %s\n", t,
                  join(goal).c_str(), join(act).c_str(), verdict);
    txt << row;
  }
  write_file(path_prefix + ".txt", txt.str());
}

}  // namespace clavier
