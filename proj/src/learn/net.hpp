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
//
// Dense networks in 64-bit floats on BLAS matrix products, with exact
// reverse-mode gradients, inverted dropout, an adaptive-moment optimizer
// and Polyak target mixing. Everything a layer owns lives in one flat
// parameter vector (per layer: weight matrix row-major [out x in], then
// bias) so optimizers, target copies and checkpoints treat a network as a
// single vector.

#ifndef CLAVIER_LEARN_NET_HPP_
#define CLAVIER_LEARN_NET_HPP_

#include <cstdint>
#include <vector>

#include "util/binio.hpp"
#include "util/rng.hpp"

namespace clavier {

// Output head; hidden units are always rectified.
enum class Head { kLinear = 0, kTanh = 1 };

class Net {
 public:
  Net() = default;
  Net(std::vector<int> dims, Head head);

  const std::vector<int>& dims() const { return dims_; }
  Head head() const { return head_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  size_t num_params() const { return params_.size(); }

  // Per layer: weights and biases U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void init_uniform(Rng& rng);
  // Overwrite the output layer: U(-bound, bound), or exactly zero.
  void init_last_uniform(double bound, Rng& rng);
  void zero_last_layer();

  double* weight(int layer) { return params_.data() + offset_[layer]; }
  const double* weight(int layer) const {
    return params_.data() + offset_[layer];
  }
  double* bias(int layer) {
    return params_.data() + offset_[layer] +
           static_cast<size_t>(dims_[layer]) * dims_[layer + 1];
  }
  const double* bias(int layer) const {
    return const_cast<Net*>(this)->bias(layer);
  }
  size_t layer_offset(int layer) const { return offset_[layer]; }

  void serialize(BinWriter& w) const;
  static Net deserialize(BinReader& r);

 private:
  std::vector<int> dims_;
  Head head_ = Head::kLinear;
  std::vector<double> params_;
  std::vector<size_t> offset_;  // parameter offset of each layer
};

// One batched forward pass and the state needed to run its backward pass.
// Reusable; buffers are grown once and kept.
class NetPass {
 public:
  // input is [batch x in] row-major. With dropout_p > 0 hidden activations
  // are dropped (inverted scaling) using `rng`; the output head never is.
  const std::vector<double>& forward(const Net& net, const double* input,
                                     int batch, double dropout_p = 0.0,
                                     Rng* rng = nullptr);

  // doutput is dL/dy [batch x out] for the forward just run. Parameter
  // gradients are accumulated into grad (size num_params); the gradient
  // with respect to the input is written to dinput [batch x in] if given.
  // Requires the net's parameters untouched since forward().
  void backward(const Net& net, const double* doutput,
                std::vector<double>& grad, double* dinput = nullptr);

  const std::vector<double>& output() const { return acts_.back(); }
  int batch() const { return batch_; }

 private:
  int batch_ = 0;
  std::vector<std::vector<double>> acts_;  // acts_[0] = input copy
  std::vector<std::vector<double>> mult_;  // hidden backward multipliers
  std::vector<double> dz_, da_, ones_;
};

// Convenience single-input forward with no dropout.
std::vector<double> net_apply(const Net& net, const std::vector<double>& x);

class Adam {
 public:
  Adam() = default;
  Adam(size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);

  void step(std::vector<double>& params, const std::vector<double>& grad);
  int64_t steps() const { return t_; }
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

  void serialize(BinWriter& w) const;
  static Adam deserialize(BinReader& r);

 private:
  double lr_ = 1e-3, b1_ = 0.9, b2_ = 0.999, eps_ = 1e-8;
  int64_t t_ = 0;
  std::vector<double> m_, v_;
};

// target <- (1 - tau) * target + tau * online
void polyak(std::vector<double>& target, const std::vector<double>& online,
            double tau);

}  // namespace clavier

#endif  // CLAVIER_LEARN_NET_HPP_
