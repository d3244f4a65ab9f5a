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

#ifndef CLAVIER_SCORE_SONGS_HPP_
#define CLAVIER_SCORE_SONGS_HPP_

#include <string>
#include <vector>

#include "score/score.hpp"

namespace clavier {

// Built-in public-domain arrangements, fully fingered for three fingers per
// hand, with the two hands multiple octaves apart. "toy3" is a one-finger
// three-key right-hand exercise used by the smallest training benchmark.
std::vector<std::string> bundled_song_names();
bool is_bundled_song(const std::string& name);
PianoRoll bundled_song(const std::string& name);  // throws on unknown name

}  // namespace clavier

#endif  // CLAVIER_SCORE_SONGS_HPP_
