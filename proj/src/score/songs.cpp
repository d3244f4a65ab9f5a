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

#include "score/songs.hpp"

#include <map>

#include "util/errors.hpp"

namespace clavier {
namespace {

// One row per note: {onset_step, duration_steps, key, hand, finger}.
// hand: 0 = left, 1 = right; finger: 0 = index, 1 = middle, 2 = ring.
struct SongNote {
  int onset, duration, key, hand, finger;
};

struct Song {
  const char* title;
  int steps;
  std::vector<SongNote> notes;
};

const std::map<std::string, Song>& song_table() {
  static const std::map<std::string, Song> songs = {
    {"twinkle",
     {"Twinkle Twinkle", 160,
      {
       {8,2,63,1,0}, {8,10,27,0,1}, {11,2,63,1,0}, {14,2,70,1,2}, {17,2,70,1,2}, {20,2,72,1,2},
       {20,10,27,0,1}, {23,2,72,1,2}, {26,5,70,1,2}, {32,2,68,1,1}, {32,10,32,0,0}, {35,2,68,1,1},
       {38,2,67,1,1}, {41,2,67,1,1}, {44,2,65,1,0}, {44,10,27,0,1}, {47,2,65,1,0}, {50,5,63,1,0},
       {56,2,70,1,2}, {56,10,27,0,1}, {59,2,70,1,2}, {62,2,68,1,1}, {65,2,68,1,1}, {68,2,67,1,1},
       {68,10,22,0,2}, {71,2,67,1,1}, {74,5,65,1,0}, {80,2,70,1,2}, {80,10,27,0,1}, {83,2,70,1,2},
       {86,2,68,1,1}, {89,2,68,1,1}, {92,2,67,1,1}, {92,10,22,0,2}, {95,2,67,1,1}, {98,5,65,1,0},
       {104,2,63,1,0}, {104,10,27,0,1}, {107,2,63,1,0}, {110,2,70,1,2}, {113,2,70,1,2}, {116,2,72,1,2},
       {116,10,27,0,1}, {119,2,72,1,2}, {122,5,70,1,2}, {128,2,68,1,1}, {128,10,32,0,0}, {131,2,68,1,1},
       {134,2,67,1,1}, {137,2,67,1,1}, {140,2,65,1,0}, {140,10,27,0,1}, {143,2,65,1,0}, {146,14,63,1,0}
      }}},
    {"hot-cross-buns",
     {"Hot Cross Buns", 160,
      {
       {0,3,55,1,2}, {0,13,27,0,1}, {4,3,53,1,1}, {8,6,51,1,0}, {16,3,55,1,2}, {16,13,22,0,2},
       {20,3,53,1,1}, {24,6,51,1,0}, {32,3,51,1,0}, {32,13,27,0,1}, {36,3,51,1,0}, {40,3,51,1,0},
       {44,3,51,1,0}, {48,3,53,1,1}, {48,13,22,0,2}, {52,3,53,1,1}, {56,3,53,1,1}, {60,3,53,1,1},
       {64,3,55,1,2}, {64,13,27,0,1}, {68,3,53,1,1}, {72,7,51,1,0}, {80,3,55,1,2}, {80,13,27,0,1},
       {84,3,53,1,1}, {88,6,51,1,0}, {96,3,55,1,2}, {96,13,22,0,2}, {100,3,53,1,1}, {104,6,51,1,0},
       {112,3,51,1,0}, {112,13,27,0,1}, {116,3,51,1,0}, {120,3,51,1,0}, {124,3,51,1,0}, {128,3,53,1,1},
       {128,13,22,0,2}, {132,3,53,1,1}, {136,3,53,1,1}, {140,3,53,1,1}, {144,3,55,1,2}, {144,13,27,0,1},
       {148,3,53,1,1}, {152,8,51,1,0}
      }}},
    {"ode-to-joy",
     {"Ode to Joy", 330,
      {
       {10,4,55,1,1}, {10,16,27,0,1}, {15,4,55,1,1}, {20,4,56,1,1}, {25,4,58,1,2}, {30,4,58,1,2},
       {30,16,22,0,2}, {35,4,56,1,1}, {40,4,55,1,1}, {45,4,53,1,0}, {50,4,51,1,0}, {50,16,27,0,1},
       {55,4,51,1,0}, {60,4,53,1,0}, {65,4,55,1,1}, {70,4,55,1,1}, {70,16,22,0,2}, {75,4,53,1,0},
       {80,9,53,1,0}, {90,4,55,1,1}, {90,16,27,0,1}, {95,4,55,1,1}, {100,4,56,1,1}, {105,4,58,1,2},
       {110,4,58,1,2}, {110,16,22,0,2}, {115,4,56,1,1}, {120,4,55,1,1}, {125,4,53,1,0}, {130,4,51,1,0},
       {130,16,27,0,1}, {135,4,51,1,0}, {140,4,53,1,0}, {145,4,55,1,1}, {150,4,53,1,0}, {150,16,27,0,1},
       {155,4,51,1,0}, {160,9,51,1,0}, {170,4,53,1,0}, {170,16,22,0,2}, {175,4,53,1,0}, {180,4,55,1,1},
       {185,4,51,1,0}, {190,4,53,1,0}, {190,16,22,0,2}, {195,4,55,1,1}, {200,4,56,1,1}, {205,4,55,1,1},
       {210,4,51,1,0}, {210,16,27,0,1}, {215,4,53,1,0}, {220,4,55,1,1}, {225,4,56,1,1}, {230,4,55,1,1},
       {230,16,22,0,2}, {235,4,53,1,0}, {240,9,51,1,0}, {250,4,55,1,1}, {250,16,27,0,1}, {255,4,55,1,1},
       {260,4,56,1,1}, {265,4,58,1,2}, {270,4,58,1,2}, {270,16,22,0,2}, {275,4,56,1,1}, {280,4,55,1,1},
       {285,4,53,1,0}, {290,4,51,1,0}, {290,16,27,0,1}, {295,4,51,1,0}, {300,4,53,1,0}, {305,4,55,1,1},
       {310,4,53,1,0}, {310,16,27,0,1}, {315,4,51,1,0}, {320,10,51,1,0}
      }}},
    {"fur-elise",
     {"Fur Elise", 320,
      {
       {4,2,55,1,2}, {6,2,54,1,1}, {8,2,55,1,2}, {10,2,54,1,1}, {12,2,55,1,2}, {14,2,50,1,0},
       {16,2,53,1,1}, {18,2,51,1,1}, {20,2,24,0,2}, {20,6,48,1,0}, {22,2,31,0,1}, {24,2,36,0,0},
       {28,2,51,1,1}, {30,2,55,1,2}, {32,2,48,1,0}, {34,6,50,1,0}, {42,2,55,1,2}, {44,2,51,1,1},
       {46,2,50,1,0}, {48,2,24,0,2}, {48,6,48,1,0}, {50,2,31,0,1}, {52,2,36,0,0}, {56,2,55,1,2},
       {58,2,54,1,1}, {60,2,55,1,2}, {62,2,54,1,1}, {64,2,55,1,2}, {66,2,50,1,0}, {68,2,53,1,1},
       {70,2,51,1,1}, {72,2,24,0,2}, {72,6,48,1,0}, {74,2,31,0,1}, {76,2,36,0,0}, {80,2,51,1,1},
       {82,2,55,1,2}, {84,2,48,1,0}, {86,6,50,1,0}, {94,2,55,1,2}, {96,2,51,1,1}, {98,2,50,1,0},
       {100,2,24,0,2}, {100,6,48,1,0}, {102,2,31,0,1}, {104,2,36,0,0}, {108,2,55,1,2}, {110,2,54,1,1},
       {112,2,55,1,2}, {114,2,54,1,1}, {116,2,55,1,2}, {118,2,50,1,0}, {120,2,53,1,1}, {122,2,51,1,1},
       {124,2,24,0,2}, {124,6,48,1,0}, {126,2,31,0,1}, {128,2,36,0,0}, {132,2,51,1,1}, {134,2,55,1,2},
       {136,2,48,1,0}, {138,6,50,1,0}, {146,2,55,1,2}, {148,2,51,1,1}, {150,2,50,1,0}, {152,2,24,0,2},
       {152,6,48,1,0}, {154,2,31,0,1}, {156,2,36,0,0}, {160,2,55,1,2}, {162,2,54,1,1}, {164,2,55,1,2},
       {166,2,54,1,1}, {168,2,55,1,2}, {170,2,50,1,0}, {172,2,53,1,1}, {174,2,51,1,1}, {176,2,24,0,2},
       {176,6,48,1,0}, {178,2,31,0,1}, {180,2,36,0,0}, {184,2,51,1,1}, {186,2,55,1,2}, {188,2,48,1,0},
       {190,6,50,1,0}, {198,2,55,1,2}, {200,2,51,1,1}, {202,2,50,1,0}, {204,2,24,0,2}, {204,6,48,1,0},
       {206,2,31,0,1}, {208,2,36,0,0}, {212,2,55,1,2}, {214,2,54,1,1}, {216,2,55,1,2}, {218,2,54,1,1},
       {220,2,55,1,2}, {222,2,50,1,0}, {224,2,53,1,1}, {226,2,51,1,1}, {228,2,24,0,2}, {228,6,48,1,0},
       {230,2,31,0,1}, {232,2,36,0,0}, {236,2,51,1,1}, {238,2,55,1,2}, {240,2,48,1,0}, {242,6,50,1,0},
       {250,2,55,1,2}, {252,2,51,1,1}, {254,2,50,1,0}, {256,2,24,0,2}, {256,6,48,1,0}, {258,2,31,0,1},
       {260,2,36,0,0}, {264,2,55,1,2}, {266,2,54,1,1}, {268,2,55,1,2}, {270,2,54,1,1}, {272,2,55,1,2},
       {274,2,50,1,0}, {276,2,53,1,1}, {278,2,51,1,1}, {280,2,24,0,2}, {280,6,48,1,0}, {282,2,31,0,1},
       {284,2,36,0,0}, {288,2,51,1,1}, {290,2,55,1,2}, {292,2,48,1,0}, {294,6,50,1,0}, {302,2,55,1,2},
       {304,2,51,1,1}, {306,2,50,1,0}, {308,2,24,0,2}, {308,12,48,1,0}, {310,2,31,0,1}, {312,2,36,0,0}
      }}},
    {"prelude-in-c",
     {"Prelude in C", 330,
      {
       {0,2,46,1,0}, {0,9,27,0,1}, {2,2,51,1,1}, {4,2,55,1,2}, {6,2,51,1,1}, {8,2,46,1,0},
       {10,2,46,1,0}, {10,9,27,0,1}, {12,2,51,1,1}, {14,2,55,1,2}, {16,2,51,1,1}, {18,2,46,1,0},
       {20,2,46,1,0}, {20,9,29,0,1}, {22,2,53,1,1}, {24,2,56,1,2}, {26,2,53,1,1}, {28,2,46,1,0},
       {30,2,46,1,0}, {30,9,29,0,1}, {32,2,53,1,1}, {34,2,56,1,2}, {36,2,53,1,1}, {38,2,46,1,0},
       {40,2,46,1,0}, {40,9,26,0,2}, {42,2,53,1,1}, {44,2,56,1,2}, {46,2,53,1,1}, {48,2,46,1,0},
       {50,2,46,1,0}, {50,9,26,0,2}, {52,2,53,1,1}, {54,2,56,1,2}, {56,2,53,1,1}, {58,2,46,1,0},
       {60,2,46,1,0}, {60,9,27,0,1}, {62,2,51,1,1}, {64,2,55,1,2}, {66,2,51,1,1}, {68,2,46,1,0},
       {70,2,46,1,0}, {70,9,27,0,1}, {72,2,51,1,1}, {74,2,55,1,2}, {76,2,51,1,1}, {78,2,46,1,0},
       {80,2,51,1,1}, {80,9,24,0,2}, {82,2,55,1,2}, {84,2,51,1,1}, {86,2,55,1,2}, {88,2,51,1,1},
       {90,2,51,1,1}, {90,9,24,0,2}, {92,2,55,1,2}, {94,2,51,1,1}, {96,2,55,1,2}, {98,2,51,1,1},
       {100,2,44,1,0}, {100,9,29,0,1}, {102,2,53,1,1}, {104,2,56,1,2}, {106,2,53,1,1}, {108,2,44,1,0},
       {110,2,44,1,0}, {110,9,29,0,1}, {112,2,53,1,1}, {114,2,56,1,2}, {116,2,53,1,1}, {118,2,44,1,0},
       {120,2,46,1,0}, {120,9,22,0,2}, {122,2,53,1,1}, {124,2,56,1,2}, {126,2,53,1,1}, {128,2,46,1,0},
       {130,2,46,1,0}, {130,9,22,0,2}, {132,2,53,1,1}, {134,2,56,1,2}, {136,2,53,1,1}, {138,2,46,1,0},
       {140,2,46,1,0}, {140,9,27,0,1}, {142,2,51,1,1}, {144,2,55,1,2}, {146,2,51,1,1}, {148,2,46,1,0},
       {150,2,46,1,0}, {150,9,27,0,1}, {152,2,51,1,1}, {154,2,55,1,2}, {156,2,51,1,1}, {158,2,46,1,0},
       {160,2,51,1,1}, {160,9,24,0,2}, {162,2,55,1,2}, {164,2,51,1,1}, {166,2,55,1,2}, {168,2,51,1,1},
       {170,2,44,1,0}, {170,9,29,0,1}, {172,2,53,1,1}, {174,2,56,1,2}, {176,2,53,1,1}, {178,2,44,1,0},
       {180,2,46,1,0}, {180,9,22,0,2}, {182,2,53,1,1}, {184,2,56,1,2}, {186,2,53,1,1}, {188,2,46,1,0},
       {190,2,46,1,0}, {190,9,27,0,1}, {192,2,51,1,1}, {194,2,55,1,2}, {196,2,51,1,1}, {198,2,46,1,0},
       {200,2,44,1,0}, {200,9,32,0,0}, {202,2,51,1,1}, {204,2,56,1,2}, {206,2,51,1,1}, {208,2,44,1,0},
       {210,2,44,1,0}, {210,9,29,0,1}, {212,2,53,1,1}, {214,2,56,1,2}, {216,2,53,1,1}, {218,2,44,1,0},
       {220,2,46,1,0}, {220,9,22,0,2}, {222,2,53,1,1}, {224,2,56,1,2}, {226,2,53,1,1}, {228,2,46,1,0},
       {230,2,46,1,0}, {230,9,27,0,1}, {232,2,51,1,1}, {234,2,55,1,2}, {236,2,51,1,1}, {238,2,46,1,0},
       {240,2,46,1,0}, {240,9,22,0,2}, {242,2,53,1,1}, {244,2,56,1,2}, {246,2,53,1,1}, {248,2,46,1,0},
       {250,2,46,1,0}, {250,9,22,0,2}, {252,2,53,1,1}, {254,2,56,1,2}, {256,2,53,1,1}, {258,2,46,1,0},
       {260,2,46,1,0}, {260,9,27,0,1}, {262,2,51,1,1}, {264,2,55,1,2}, {266,2,51,1,1}, {268,2,46,1,0},
       {270,2,46,1,0}, {270,9,27,0,1}, {272,2,51,1,1}, {274,2,55,1,2}, {276,2,51,1,1}, {278,2,46,1,0},
       {280,2,46,1,0}, {280,9,22,0,2}, {282,2,53,1,1}, {284,2,56,1,2}, {286,2,53,1,1}, {288,2,46,1,0},
       {290,2,46,1,0}, {290,9,22,0,2}, {292,2,53,1,1}, {294,2,56,1,2}, {296,2,53,1,1}, {298,2,46,1,0},
       {300,2,46,1,0}, {300,9,27,0,1}, {302,2,51,1,1}, {304,2,55,1,2}, {306,2,51,1,1}, {308,2,46,1,0},
       {310,2,46,1,0}, {310,9,27,0,1}, {312,2,51,1,1}, {314,2,55,1,2}, {316,2,51,1,1}, {318,2,46,1,0},
       {320,10,27,0,1}, {320,10,51,1,1}
      }}},
    {"toy3",
     {"Toy Three Keys", 40,
      {
       {0,3,51,1,0}, {5,3,53,1,0}, {10,3,55,1,0}, {15,3,53,1,0}, {20,3,51,1,0}, {25,3,55,1,0},
       {30,3,51,1,0}, {35,5,51,1,0}
      }}},
  };
  return songs;
}

}  // namespace

std::vector<std::string> bundled_song_names() {
  std::vector<std::string> names;
  for (const auto& [name, song] : song_table()) names.push_back(name);
  return names;
}

bool is_bundled_song(const std::string& name) {
  return song_table().count(name) > 0;
}

PianoRoll bundled_song(const std::string& name) {
  auto it = song_table().find(name);
  if (it == song_table().end()) {
    std::string known;
    for (const auto& [n, s] : song_table()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw ValidationError("unknown bundled song \"" + name +
                          "\" (available: " + known + ")");
  }
  PianoRoll roll;
  roll.name = name;
  roll.num_steps = it->second.steps;
  for (const SongNote& sn : it->second.notes) {
    roll.notes.push_back({sn.onset, sn.duration, sn.key, sn.hand, sn.finger});
  }
  roll.sort_notes();
  roll.validate();
  return roll;
}

}  // namespace clavier
