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

#ifndef CLAVIER_LEARN_NOISE_HPP_
#define CLAVIER_LEARN_NOISE_HPP_

#include <vector>

#include "util/rng.hpp"

namespace clavier {

// Temporally correlated exploration noise per dimension:
//   e_t = beta * e_{t-1} + sqrt(1 - beta^2) * n_t,  n_t ~ N(0, 1).
// The stationary distribution stays unit normal with lag-1 autocorrelation
// beta, so downstream clipping thresholds keep their meaning.
class CorrelatedNoise {
 public:
  CorrelatedNoise(int dim, double beta);

  void reset();  // e_{-1} = 0
  // Draws dim values into out.
  void sample(Rng& rng, double* out);

  int dim() const { return dim_; }
  double beta() const { return beta_; }
  const std::vector<double>& state() const { return prev_; }
  void set_state(const std::vector<double>& s);

 private:
  int dim_;
  double beta_;
  std::vector<double> prev_;
};

// Exploration guidance: with probability prob (one draw per call), the sign
// of each entry listed in `signs` is forced to the sign recorded there;
// magnitudes are untouched, so the L2 norm is preserved exactly. Entries of
// `signs` are (index, direction) with direction +1/-1; indices without a
// defined direction are skipped.
void guide_noise(std::vector<double>& noise,
                 const std::vector<std::pair<int, int>>& signs, double prob,
                 Rng& rng);

}  // namespace clavier

#endif  // CLAVIER_LEARN_NOISE_HPP_
