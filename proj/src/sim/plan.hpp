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

#ifndef CLAVIER_SIM_PLAN_HPP_
#define CLAVIER_SIM_PLAN_HPP_

#include "score/score.hpp"
#include "sim/hand.hpp"
#include "sim/keyboard.hpp"

namespace clavier {

// Analytic open-loop command tape: wrists follow the note script; each
// fingered note aims its finger's lateral joint at the key and dips the
// canonical press pose exactly over the note's sounding steps, hovering in
// the rest pose otherwise. On the nominal device this plays a reachable
// score essentially perfectly; it is the hand-built baseline the learned
// exporters are compared against.
Trajectory plan_trajectory(const Keyboard& kb, const PianoRoll& roll);

// Scripted wrists with every finger held in the rest pose throughout: the
// do-nothing base tape for policies that must learn finger control from
// zero.
Trajectory rest_trajectory(const Keyboard& kb, const PianoRoll& roll);

}  // namespace clavier

#endif  // CLAVIER_SIM_PLAN_HPP_
