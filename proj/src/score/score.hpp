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

#ifndef CLAVIER_SCORE_SCORE_HPP_
#define CLAVIER_SCORE_SCORE_HPP_

#include <string>
#include <vector>

#include "util/artifact.hpp"

namespace clavier {

inline constexpr int kNumKeys = 88;          // key 0 = MIDI note 21 (A0)
inline constexpr int kLowestMidiNote = 21;
inline constexpr int kStepsPerSecond = 10;   // fixed 100 ms control grid
inline constexpr int kStepMicros = 100000;

enum class Hand { kLeft = 0, kRight = 1 };
inline constexpr int kNumHands = 2;

// Three playing fingers per hand. Indices name anatomy, not position: for
// the left hand the index finger sits over *higher* keys than the ring.
enum Finger { kIndex = 0, kMiddle = 1, kRing = 2 };
inline constexpr int kNumFingers = 3;
inline constexpr int kFingerUnassigned = -1;

// Keys below this index belong to the left hand when no annotation says
// otherwise (middle of the 88-key range).
inline constexpr int kHandSplitKey = 44;
int default_hand_for_key(int key);

struct Note {
  int onset = 0;     // first grid step at which the key must sound
  int duration = 1;  // steps, >= 1
  int key = 0;       // 0..87
  int hand = 0;      // 0 = left, 1 = right
  int finger = kFingerUnassigned;
};

struct GoalNote {
  int key = 0;
  int finger = kFingerUnassigned;
};

struct PianoRoll {
  std::string name;
  int num_steps = 0;
  std::vector<Note> notes;  // kept sorted by (onset, key)

  // Per-step goal sets for one hand: goals(h)[t] lists the keys that must
  // sound during step t, with their assigned fingers.
  std::vector<std::vector<GoalNote>> goals(Hand hand) const;
  std::vector<int> used_keys(Hand hand) const;  // sorted, unique
  bool has_notes(Hand hand) const;
  bool fully_fingered(Hand hand) const;

  // Ranges, durations, same-key overlaps, per-step finger collisions.
  void validate() const;
  void sort_notes();
};

// Standard MIDI file (format 0 or 1) -> grid. Event times are mapped
// through the tempo map to microseconds and quantized to the nearest step;
// exact half-step ties round down. Durations are at least one step.
// Hands are assigned by the key-split rule; fingers start unassigned.
PianoRoll parse_midi(const std::string& bytes, const std::string& name);

// Grid -> standard MIDI file (format 0, 500 ticks per quarter at 120 bpm,
// so one grid step is exactly 100 ticks). The artifact header rides in a
// text meta event; parse_midi(emit_roll(r)) reproduces r's goal sets.
std::string emit_roll(const PianoRoll& roll, const ArtifactHeader& header);

// Fingering annotations, one note per line: "<onset_step> <key> <L|R>
// <I|M|R|?>" ('?' assigns the hand but leaves the finger open). Unknown
// notes, malformed fields and duplicate assignments are errors.
void load_fingering(PianoRoll& roll, const std::string& text);
std::string fingering_text(const PianoRoll& roll, const ArtifactHeader& h);

}  // namespace clavier

#endif  // CLAVIER_SCORE_SCORE_HPP_
