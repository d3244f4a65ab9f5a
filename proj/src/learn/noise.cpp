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

#include "learn/noise.hpp"

#include <cmath>

#include "util/errors.hpp"

namespace clavier {

CorrelatedNoise::CorrelatedNoise(int dim, double beta)
    : dim_(dim), beta_(beta), prev_(dim, 0.0) {
  if (dim <= 0) throw ValidationError("noise dimension must be positive");
  if (beta < 0.0 || beta >= 1.0) {
    throw ValidationError("noise correlation must lie in [0, 1)");
  }
}

void CorrelatedNoise::reset() { prev_.assign(dim_, 0.0); }

void CorrelatedNoise::sample(Rng& rng, double* out) {
  const double mix = std::sqrt(1.0 - beta_ * beta_);
  for (int i = 0; i < dim_; ++i) {
    prev_[i] = beta_ * prev_[i] + mix * rng.normal();
    out[i] = prev_[i];
  }
}

void CorrelatedNoise::set_state(const std::vector<double>& s) {
  if (static_cast<int>(s.size()) != dim_) {
    throw ValidationError("noise state size mismatch");
  }
  prev_ = s;
}

void guide_noise(std::vector<double>& noise,
                 const std::vector<std::pair<int, int>>& signs, double prob,
                 Rng& rng) {
  // The branch draw is consumed even when there is nothing to flip, so the
  // stream position does not depend on what the hand pressed.
  const bool guided = rng.uniform() < prob;
  if (!guided) return;
  for (const auto& [idx, dir] : signs) {
    if (idx < 0 || idx >= static_cast<int>(noise.size()) || dir == 0) continue;
    double mag = std::fabs(noise[idx]);
    noise[idx] = dir > 0 ? mag : -mag;
  }
}

}  // namespace clavier
