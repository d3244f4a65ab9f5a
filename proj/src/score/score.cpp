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

#include "score/score.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>

#include "util/errors.hpp"

namespace clavier {

int default_hand_for_key(int key) {
  return key < kHandSplitKey ? 0 : 1;
}

void PianoRoll::sort_notes() {
  std::stable_sort(notes.begin(), notes.end(),
                   [](const Note& a, const Note& b) {
                     if (a.onset != b.onset) return a.onset < b.onset;
                     return a.key < b.key;
                   });
}

void PianoRoll::validate() const {
  if (num_steps <= 0) throw ValidationError("roll has no steps");
  for (const Note& n : notes) {
    if (n.key < 0 || n.key >= kNumKeys) {
      throw ValidationError("note key " + std::to_string(n.key) +
                            " outside the 88-key range");
    }
    if (n.duration < 1) throw ValidationError("note with duration < 1 step");
    if (n.onset < 0 || n.onset + n.duration > num_steps) {
      throw ValidationError("note at step " + std::to_string(n.onset) +
                            " extends outside the roll");
    }
    if (n.hand != 0 && n.hand != 1) throw ValidationError("bad hand index");
    if (n.finger != kFingerUnassigned &&
        (n.finger < 0 || n.finger >= kNumFingers)) {
      throw ValidationError("bad finger index");
    }
  }
  // Same-key overlap: two sounding intervals on one key cannot coexist.
  std::map<int, std::vector<std::pair<int, int>>> spans;
  for (const Note& n : notes) {
    spans[n.key].emplace_back(n.onset, n.onset + n.duration);
  }
  for (auto& [key, sp] : spans) {
    std::sort(sp.begin(), sp.end());
    for (size_t i = 1; i < sp.size(); ++i) {
      if (sp[i].first < sp[i - 1].second) {
        throw ValidationError(
            "overlapping identical notes on key " + std::to_string(key) +
            " at step " + std::to_string(sp[i].first));
      }
    }
  }
  // A finger cannot be asked to hold two keys in the same step.
  for (int h = 0; h < kNumHands; ++h) {
    std::map<std::pair<int, int>, int> finger_at;  // (step, finger) -> key
    for (const Note& n : notes) {
      if (n.hand != h || n.finger == kFingerUnassigned) continue;
      for (int t = n.onset; t < n.onset + n.duration; ++t) {
        auto [it, fresh] = finger_at.try_emplace({t, n.finger}, n.key);
        if (!fresh && it->second != n.key) {
          throw ValidationError("finger " + std::to_string(n.finger) +
                                " assigned two keys at step " +
                                std::to_string(t));
        }
      }
    }
  }
}

std::vector<std::vector<GoalNote>> PianoRoll::goals(Hand hand) const {
  std::vector<std::vector<GoalNote>> g(num_steps);
  for (const Note& n : notes) {
    if (n.hand != static_cast<int>(hand)) continue;
    for (int t = n.onset; t < n.onset + n.duration && t < num_steps; ++t) {
      g[t].push_back({n.key, n.finger});
    }
  }
  for (auto& step : g) {
    std::sort(step.begin(), step.end(),
              [](const GoalNote& a, const GoalNote& b) { return a.key < b.key; });
  }
  return g;
}

std::vector<int> PianoRoll::used_keys(Hand hand) const {
  std::vector<int> keys;
  for (const Note& n : notes) {
    if (n.hand == static_cast<int>(hand)) keys.push_back(n.key);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

bool PianoRoll::has_notes(Hand hand) const {
  for (const Note& n : notes) {
    if (n.hand == static_cast<int>(hand)) return true;
  }
  return false;
}

bool PianoRoll::fully_fingered(Hand hand) const {
  for (const Note& n : notes) {
    if (n.hand == static_cast<int>(hand) && n.finger == kFingerUnassigned) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// MIDI parsing
// ---------------------------------------------------------------------------

namespace {

class ByteReader {
 public:
  ByteReader(const std::string& bytes, size_t pos) : b_(bytes), pos_(pos) {}
  size_t pos() const { return pos_; }
  bool at_end(size_t limit) const { return pos_ >= limit; }

  uint8_t u8() {
    if (pos_ >= b_.size()) throw ParseError("unexpected end of file", pos_);
    return static_cast<uint8_t>(b_[pos_++]);
  }
  uint32_t u16() {
    uint32_t hi = u8();
    return (hi << 8) | u8();
  }
  uint32_t u32() {
    uint32_t v = u16();
    return (v << 16) | u16();
  }
  uint32_t varlen() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      uint8_t c = u8();
      v = (v << 7) | (c & 0x7f);
      if (!(c & 0x80)) return v;
    }
    throw ParseError("variable-length quantity longer than 4 bytes", pos_);
  }
  void skip(uint32_t n) {
    if (pos_ + n > b_.size()) throw ParseError("chunk overruns file", pos_);
    pos_ += n;
  }
  std::string bytes(uint32_t n) {
    if (pos_ + n > b_.size()) throw ParseError("chunk overruns file", pos_);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const std::string& b_;
  size_t pos_;
};

struct RawNote {
  int64_t on_tick;
  int64_t off_tick;
  int midi_key;
  size_t on_offset;  // byte position of the note-on, for error messages
};

struct TempoEvent {
  int64_t tick;
  int64_t us_per_quarter;
};

}  // namespace

PianoRoll parse_midi(const std::string& bytes, const std::string& name) {
  ByteReader r(bytes, 0);
  if (r.bytes(4) != "MThd") throw ParseError("missing MThd chunk", 0);
  uint32_t hlen = r.u32();
  if (hlen < 6) throw ParseError("MThd chunk too short", r.pos());
  uint32_t format = r.u16();
  uint32_t ntrks = r.u16();
  uint32_t division = r.u16();
  r.skip(hlen - 6);
  if (format > 1) {
    throw ParseError("unsupported MIDI format " + std::to_string(format), 8);
  }
  if (division & 0x8000) {
    throw ParseError("SMPTE time division is not supported", 12);
  }
  if (division == 0) throw ParseError("zero time division", 12);

  std::vector<RawNote> raw;
  std::vector<TempoEvent> tempos;
  for (uint32_t trk = 0; trk < ntrks; ++trk) {
    if (r.bytes(4) != "MTrk") {
      throw ParseError("missing MTrk chunk", r.pos() - 4);
    }
    uint32_t len = r.u32();
    size_t limit = r.pos() + len;
    int64_t tick = 0;
    uint8_t status = 0;
    // Open notes per key: byte offset of note-on, FIFO matched.
    std::map<int, std::vector<std::pair<int64_t, size_t>>> open;
    while (r.pos() < limit) {
      tick += r.varlen();
      size_t ev_at = r.pos();
      uint8_t first = r.u8();
      if (first == 0xff) {  // meta
        uint8_t type = r.u8();
        uint32_t mlen = r.varlen();
        std::string data = r.bytes(mlen);
        if (type == 0x51) {
          if (mlen != 3) throw ParseError("bad tempo meta length", ev_at);
          int64_t us = (static_cast<uint8_t>(data[0]) << 16) |
                       (static_cast<uint8_t>(data[1]) << 8) |
                       static_cast<uint8_t>(data[2]);
          tempos.push_back({tick, us});
        } else if (type == 0x2f) {
          break;  // end of track
        }
        continue;
      }
      if (first == 0xf0 || first == 0xf7) {  // sysex
        r.skip(r.varlen());
        continue;
      }
      uint8_t data1;
      if (first & 0x80) {
        status = first;
        data1 = r.u8();
      } else {
        if (!(status & 0x80)) {
          throw ParseError("data byte without running status", ev_at);
        }
        data1 = first;
      }
      uint8_t kind = status & 0xf0;
      switch (kind) {
        case 0x80:    // note off
        case 0x90: {  // note on
          uint8_t vel = r.u8();
          int midi_key = data1;
          bool is_on = (kind == 0x90 && vel > 0);
          if (is_on) {
            open[midi_key].push_back({tick, ev_at});
          } else {
            auto it = open.find(midi_key);
            if (it == open.end() || it->second.empty()) {
              // A release without a matching press carries no sound; skip.
              break;
            }
            auto [on_tick, on_off] = it->second.front();
            it->second.erase(it->second.begin());
            raw.push_back({on_tick, tick, midi_key, on_off});
          }
          break;
        }
        case 0xa0:  // poly aftertouch
        case 0xb0:  // controller
        case 0xe0:  // pitch bend
          r.u8();
          break;
        case 0xc0:  // program change
        case 0xd0:  // channel aftertouch
          break;
        default:
          throw ParseError("unknown status byte", ev_at);
      }
    }
    // Notes still sounding at end of track stop there.
    for (auto& [midi_key, stack] : open) {
      for (auto& [on_tick, on_off] : stack) {
        raw.push_back({on_tick, tick, midi_key, on_off});
      }
    }
    if (r.pos() > limit) throw ParseError("event overruns track", r.pos());
    r.skip(static_cast<uint32_t>(limit - r.pos()));
  }

  // Tick -> microseconds through the tempo map (120 bpm before the first
  // tempo event, per the MIDI default).
  std::sort(tempos.begin(), tempos.end(),
            [](const TempoEvent& a, const TempoEvent& b) {
              return a.tick < b.tick;
            });
  auto to_us = [&](int64_t tick) -> int64_t {
    int64_t us = 0, seg_tick = 0, tempo = 500000;
    for (const TempoEvent& te : tempos) {
      if (te.tick >= tick) break;
      us += (te.tick - seg_tick) * tempo / division;
      seg_tick = te.tick;
      tempo = te.us_per_quarter;
    }
    us += (tick - seg_tick) * tempo / division;
    return us;
  };
  // Nearest grid step; exact half-step ties round down.
  auto to_step = [&](int64_t us) -> int {
    int64_t step = us / kStepMicros;
    if (us % kStepMicros > kStepMicros / 2) ++step;
    return static_cast<int>(step);
  };

  PianoRoll roll;
  roll.name = name;
  for (const RawNote& rn : raw) {
    if (rn.midi_key < kLowestMidiNote ||
        rn.midi_key >= kLowestMidiNote + kNumKeys) {
      throw ParseError(
          "MIDI note " + std::to_string(rn.midi_key) + " outside 88-key range",
          rn.on_offset);
    }
    Note n;
    n.onset = to_step(to_us(rn.on_tick));
    int end = to_step(to_us(rn.off_tick));
    n.duration = std::max(1, end - n.onset);
    n.key = rn.midi_key - kLowestMidiNote;
    n.hand = default_hand_for_key(n.key);
    roll.notes.push_back(n);
    roll.num_steps = std::max(roll.num_steps, n.onset + n.duration);
  }
  if (roll.notes.empty()) throw ValidationError("MIDI file contains no notes");
  roll.sort_notes();
  try {
    roll.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(e.what()) +
                          " (after quantization of " + name + ")");
  }
  return roll;
}

// ---------------------------------------------------------------------------
// MIDI emission
// ---------------------------------------------------------------------------

namespace {

void put_u16(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v & 0xff));
}
void put_u32(std::string& out, uint32_t v) {
  put_u16(out, v >> 16);
  put_u16(out, v & 0xffff);
}
void put_varlen(std::string& out, uint32_t v) {
  char buf[4];
  int n = 0;
  buf[n++] = static_cast<char>(v & 0x7f);
  while (v >>= 7) buf[n++] = static_cast<char>((v & 0x7f) | 0x80);
  while (n--) out.push_back(buf[n]);
}

}  // namespace

std::string emit_roll(const PianoRoll& roll, const ArtifactHeader& header) {
  roll.validate();
  constexpr int kDivision = 500;       // ticks per quarter
  constexpr int kTicksPerStep = 100;   // at 120 bpm: 100 ticks = 100 ms

  struct Ev {
    int64_t tick;
    bool on;
    int key;
  };
  std::vector<Ev> evs;
  for (const Note& n : roll.notes) {
    evs.push_back({static_cast<int64_t>(n.onset) * kTicksPerStep, true,
                   n.key + kLowestMidiNote});
    evs.push_back(
        {static_cast<int64_t>(n.onset + n.duration) * kTicksPerStep, false,
         n.key + kLowestMidiNote});
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.on != b.on) return !a.on;  // releases before presses
    return a.key < b.key;
  });

  std::string track;
  // Artifact header as a text meta event at tick 0.
  std::string block = header_block(header);
  put_varlen(track, 0);
  track += "\xff\x01";
  put_varlen(track, static_cast<uint32_t>(block.size()));
  track += block;
  // Tempo: 120 bpm.
  put_varlen(track, 0);
  track += "\xff\x51\x03";
  track.push_back(0x07);
  track.push_back(static_cast<char>(0xa1));
  track.push_back(0x20);

  int64_t at = 0;
  for (const Ev& e : evs) {
    put_varlen(track, static_cast<uint32_t>(e.tick - at));
    at = e.tick;
    track.push_back(static_cast<char>(e.on ? 0x90 : 0x80));
    track.push_back(static_cast<char>(e.key));
    track.push_back(static_cast<char>(e.on ? 96 : 0));
  }
  put_varlen(track, 0);
  track += "\xff\x2f";
  put_varlen(track, 0);

  std::string out = "MThd";
  put_u32(out, 6);
  put_u16(out, 0);  // format 0
  put_u16(out, 1);  // one track
  put_u16(out, kDivision);
  out += "MTrk";
  put_u32(out, static_cast<uint32_t>(track.size()));
  out += track;
  return out;
}

// ---------------------------------------------------------------------------
// Fingering annotations
// ---------------------------------------------------------------------------

void load_fingering(PianoRoll& roll, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::pair<int, int>, int> seen;  // (onset, key) -> line
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int onset, key;
    std::string hand_s, finger_s;
    if (!(ls >> onset)) continue;  // blank line
    if (!(ls >> key >> hand_s >> finger_s)) {
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": expected <step> <key> <L|R> <I|M|R>");
    }
    std::string extra;
    if (ls >> extra) {
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": trailing content: " + extra);
    }
    int hand;
    if (hand_s == "L") hand = 0;
    else if (hand_s == "R") hand = 1;
    else
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": hand must be L or R, got " + hand_s);
    int finger;
    if (finger_s == "I") finger = kIndex;
    else if (finger_s == "M") finger = kMiddle;
    else if (finger_s == "R") finger = kRing;
    else if (finger_s == "?") finger = kFingerUnassigned;
    else
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": finger must be I, M, R or ?, got " + finger_s);
    auto [it, fresh] = seen.try_emplace({onset, key}, lineno);
    if (!fresh) {
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": duplicate assignment for step " +
                            std::to_string(onset) + " key " +
                            std::to_string(key) + " (first on line " +
                            std::to_string(it->second) + ")");
    }
    bool found = false;
    for (Note& n : roll.notes) {
      if (n.onset == onset && n.key == key) {
        n.hand = hand;
        n.finger = finger;
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError("fingering line " + std::to_string(lineno) +
                            ": no note at step " + std::to_string(onset) +
                            " on key " + std::to_string(key));
    }
  }
  roll.validate();
}

std::string fingering_text(const PianoRoll& roll, const ArtifactHeader& h) {
  std::ostringstream out;
  write_text_header(out, h);
  out << "# <onset_step> <key> <L|R> <I|M|R|?>\n";
  static const char* kFingerNames = "IMR";
  for (const Note& n : roll.notes) {
    out << n.onset << " " << n.key << " " << (n.hand == 0 ? 'L' : 'R') << " "
        << (n.finger == kFingerUnassigned ? '?' : kFingerNames[n.finger])
        << "\n";
  }
  return out.str();
}

}  // namespace clavier
