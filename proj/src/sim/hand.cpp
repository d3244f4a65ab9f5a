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

#include "sim/hand.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "util/errors.hpp"

namespace clavier {

double HandConfig::press_radius() const {
  double f1 = press_flex[0], f2 = press_flex[1];
  return links[0] + links[1] * std::cos(f1) + links[2] * std::cos(f1 + f2) +
         links[3] * std::cos(f1 + f2 + fixed_flex3);
}

double HandConfig::press_reach() const { return press_radius() - base_dx; }

HandConfig make_hand_config(Hand hand) {
  HandConfig cfg;
  cfg.hand = hand;
  constexpr double kSpread = 0.022;  // knuckle spacing along y
  if (hand == Hand::kRight) {
    // Player's right hand: index over the lower keys, ring over the higher.
    cfg.finger_dy = {-kSpread, 0.0, kSpread};
  } else {
    cfg.finger_dy = {kSpread, 0.0, -kSpread};
  }
  return cfg;
}

Vec3 fingertip(const HandConfig& cfg, const Vec3& wrist, int finger,
               const double* q3) {
  double lat = q3[0];
  double phi1 = q3[1];
  double phi2 = phi1 + q3[2];
  double phi3 = phi2 + cfg.fixed_flex3;
  double r = cfg.links[0] + cfg.links[1] * std::cos(phi1) +
             cfg.links[2] * std::cos(phi2) + cfg.links[3] * std::cos(phi3);
  double drop = cfg.links[1] * std::sin(phi1) + cfg.links[2] * std::sin(phi2) +
                cfg.links[3] * std::sin(phi3);
  Vec3 tip;
  tip.x = wrist.x + cfg.base_dx - r * std::cos(lat);
  tip.y = wrist.y + cfg.finger_dy[finger] + r * std::sin(lat);
  tip.z = wrist.z - drop;
  return tip;
}

std::array<Vec3, kNumFingers> forward_kinematics(const HandConfig& cfg,
                                                 const Vec3& wrist,
                                                 const double* q) {
  std::array<Vec3, kNumFingers> tips;
  for (int f = 0; f < kNumFingers; ++f) {
    tips[f] = fingertip(cfg, wrist, f, q + f * kJointsPerFinger);
  }
  return tips;
}

WristTrack script_wrist(const HandConfig& cfg, const Keyboard& kb,
                        const PianoRoll& roll) {
  int hand = static_cast<int>(cfg.hand);
  int num_states = roll.num_steps + 1;
  double reach = cfg.press_reach();
  // Lateral play available to each finger from a given wrist pose.
  double max_dy =
      cfg.press_radius() * std::sin(cfg.joint_hi[0]) * 0.999;

  // Contact requirement per state: pressing during step t needs state t+1,
  // so a note sounding over steps [onset, onset+duration) pins states
  // [onset+1, onset+duration].
  struct Target {
    double wx, wy;
    int step, key, finger;
    double key_y;
  };
  std::vector<std::vector<Target>> pinned(num_states);
  for (const Note& n : roll.notes) {
    if (n.hand != hand) continue;
    if (n.finger == kFingerUnassigned) {
      throw ValidationError("note at step " + std::to_string(n.onset) +
                            " key " + std::to_string(n.key) +
                            " has no finger assignment");
    }
    const KeySpec& ks = kb.keys[n.key];
    Target tg;
    tg.wx = ks.contact_x + reach;
    tg.wy = ks.center_y - cfg.finger_dy[n.finger];
    tg.step = n.onset;
    tg.key = n.key;
    tg.finger = n.finger;
    tg.key_y = ks.center_y;
    for (int s = n.onset + 1; s <= n.onset + n.duration; ++s) {
      pinned[s].push_back(tg);
    }
  }

  WristTrack track;
  track.z = cfg.wrist_z;
  track.x.assign(num_states, 0.0);
  track.y.assign(num_states, 0.0);
  std::vector<uint8_t> is_pinned(num_states, 0);
  for (int s = 0; s < num_states; ++s) {
    if (pinned[s].empty()) continue;
    double sum_y = 0.0, min_x = pinned[s][0].wx;
    for (const Target& tg : pinned[s]) {
      sum_y += tg.wy;
      min_x = std::min(min_x, tg.wx);
    }
    double wy = sum_y / static_cast<double>(pinned[s].size());
    for (const Target& tg : pinned[s]) {
      if (std::abs(tg.key_y - (wy + cfg.finger_dy[tg.finger])) > max_dy) {
        throw ValidationError(
            "note at step " + std::to_string(tg.step) + " key " +
            std::to_string(tg.key) +
            " is unreachable from its group's wrist pose");
      }
    }
    track.x[s] = min_x;
    track.y[s] = wy;
    is_pinned[s] = 1;
  }

  if (std::none_of(is_pinned.begin(), is_pinned.end(),
                   [](uint8_t v) { return v != 0; })) {
    // Hand never plays: park over its end of the keyboard.
    double park_y = cfg.hand == Hand::kLeft ? 15 * kb.white_pitch
                                            : 37 * kb.white_pitch;
    std::fill(track.x.begin(), track.x.end(),
              kb.keys[0].contact_x + reach);
    std::fill(track.y.begin(), track.y.end(), park_y);
    return track;
  }

  // Fill gaps: hold before the first and after the last pinned state,
  // straight-line interpolation in between.
  int first = 0;
  while (!is_pinned[first]) ++first;
  int last = num_states - 1;
  while (!is_pinned[last]) --last;
  for (int s = 0; s < first; ++s) {
    track.x[s] = track.x[first];
    track.y[s] = track.y[first];
  }
  for (int s = last + 1; s < num_states; ++s) {
    track.x[s] = track.x[last];
    track.y[s] = track.y[last];
  }
  int prev = first;
  for (int s = first + 1; s <= last; ++s) {
    if (!is_pinned[s]) continue;
    for (int m = prev + 1; m < s; ++m) {
      double a = static_cast<double>(m - prev) / static_cast<double>(s - prev);
      track.x[m] = track.x[prev] + a * (track.x[s] - track.x[prev]);
      track.y[m] = track.y[prev] + a * (track.y[s] - track.y[prev]);
    }
    prev = s;
  }
  return track;
}

// ---------------------------------------------------------------------------
// Trajectory serialization
// ---------------------------------------------------------------------------

std::string trajectory_text(const Trajectory& t, const ArtifactHeader& hdr) {
  ArtifactHeader h = hdr;
  h.kind = "trajectory";
  h.add("song", t.song);
  h.add("steps", std::to_string(t.num_steps));
  if (t.nominal_f1 >= 0) h.add("nominal-f1", fmt_f64(t.nominal_f1));
  std::ostringstream out;
  write_text_header(out, h);
  for (int hi = 0; hi < kNumHands; ++hi) {
    const HandTrajectory& ht = t.hands[hi];
    out << "hand " << (hi == 0 ? 'L' : 'R') << " " << ht.states.size() << " "
        << fmt_f64(ht.wrist.z) << "\n";
    for (size_t s = 0; s < ht.states.size(); ++s) {
      for (double v : ht.states[s]) out << fmt_f64(v) << " ";
      out << fmt_f64(ht.wrist.x[s]) << " " << fmt_f64(ht.wrist.y[s]) << "\n";
    }
  }
  return out.str();
}

Trajectory parse_trajectory(const std::string& text) {
  std::istringstream in(text);
  ArtifactHeader h = read_text_header(in, "trajectory");
  Trajectory t;
  if (const std::string* song = h.find("song")) t.song = *song;
  if (const std::string* steps = h.find("steps")) t.num_steps = std::stoi(*steps);
  if (const std::string* f1 = h.find("nominal-f1")) t.nominal_f1 = std::stod(*f1);
  if (t.num_steps <= 0) throw ValidationError("trajectory missing steps");
  for (int hi = 0; hi < kNumHands; ++hi) {
    std::string word, hand_s;
    size_t rows = 0;
    double wz = 0;
    if (!(in >> word >> hand_s >> rows >> wz) || word != "hand" ||
        hand_s != (hi == 0 ? "L" : "R")) {
      throw ValidationError("trajectory: expected 'hand " +
                            std::string(hi == 0 ? "L" : "R") + "' block");
    }
    if (rows != static_cast<size_t>(t.num_steps) + 1) {
      throw ValidationError("trajectory: hand block has " +
                            std::to_string(rows) + " states, expected " +
                            std::to_string(t.num_steps + 1));
    }
    HandTrajectory& ht = t.hands[hi];
    ht.wrist.z = wz;
    ht.states.resize(rows);
    ht.wrist.x.resize(rows);
    ht.wrist.y.resize(rows);
    for (size_t s = 0; s < rows; ++s) {
      for (double& v : ht.states[s]) {
        if (!(in >> v)) throw ValidationError("trajectory: truncated state");
      }
      if (!(in >> ht.wrist.x[s] >> ht.wrist.y[s])) {
        throw ValidationError("trajectory: truncated wrist row");
      }
      for (double v : ht.states[s]) {
        if (!std::isfinite(v)) {
          throw ValidationError("trajectory: non-finite joint value");
        }
      }
    }
  }
  return t;
}

void save_trajectory(const std::string& path, const Trajectory& t,
                     const ArtifactHeader& h) {
  write_file(path, trajectory_text(t, h));
}

Trajectory load_trajectory(const std::string& path) {
  return parse_trajectory(read_file(path));
}

}  // namespace clavier
