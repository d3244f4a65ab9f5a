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

#include "learn/net.hpp"

#include <cblas.h>

#include <cmath>
#include <cstring>

#include "util/errors.hpp"

namespace clavier {

Net::Net(std::vector<int> dims, Head head)
    : dims_(std::move(dims)), head_(head) {
  if (dims_.size() < 2) {
    throw ValidationError("a network needs at least input and output dims");
  }
  size_t total = 0;
  for (int l = 0; l + 1 < static_cast<int>(dims_.size()); ++l) {
    if (dims_[l] <= 0 || dims_[l + 1] <= 0) {
      throw ValidationError("network layer widths must be positive");
    }
    offset_.push_back(total);
    total += static_cast<size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Net::init_uniform(Rng& rng) {
  for (int l = 0; l < num_layers(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
    size_t n = static_cast<size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
    double* p = params_.data() + offset_[l];
    for (size_t i = 0; i < n; ++i) p[i] = rng.uniform(-bound, bound);
  }
}

void Net::init_last_uniform(double bound, Rng& rng) {
  int l = num_layers() - 1;
  size_t n = static_cast<size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  double* p = params_.data() + offset_[l];
  for (size_t i = 0; i < n; ++i) p[i] = rng.uniform(-bound, bound);
}

void Net::zero_last_layer() {
  int l = num_layers() - 1;
  size_t n = static_cast<size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  std::memset(params_.data() + offset_[l], 0, n * sizeof(double));
}

void Net::serialize(BinWriter& w) const {
  w.u32(static_cast<uint32_t>(dims_.size()));
  for (int d : dims_) w.u32(static_cast<uint32_t>(d));
  w.u32(static_cast<uint32_t>(head_));
  w.f64v(params_);
}

Net Net::deserialize(BinReader& r) {
  uint32_t nd = r.u32();
  if (nd < 2 || nd > 64) {
    throw ParseError("implausible network layer count", r.offset());
  }
  std::vector<int> dims(nd);
  for (auto& d : dims) d = static_cast<int>(r.u32());
  uint32_t head = r.u32();
  if (head > 1) throw ParseError("unknown output head tag", r.offset());
  Net net(std::move(dims), static_cast<Head>(head));
  std::vector<double> p = r.f64v();
  if (p.size() != net.num_params()) {
    throw ParseError("parameter count does not match topology", r.offset());
  }
  net.params_ = std::move(p);
  return net;
}

const std::vector<double>& NetPass::forward(const Net& net,
                                            const double* input, int batch,
                                            double dropout_p, Rng* rng) {
  const int L = net.num_layers();
  batch_ = batch;
  acts_.resize(L + 1);
  mult_.resize(L);  // only [0, L-2] used; sized L to keep indexing plain

  acts_[0].assign(input, input + static_cast<size_t>(batch) * net.input_dim());
  for (int l = 0; l < L; ++l) {
    const int in = net.dims()[l], out = net.dims()[l + 1];
    auto& z = acts_[l + 1];
    z.resize(static_cast<size_t>(batch) * out);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, batch, out, in, 1.0,
                acts_[l].data(), in, net.weight(l), in, 0.0, z.data(), out);
    const double* b = net.bias(l);
    for (int r = 0; r < batch; ++r) {
      double* row = z.data() + static_cast<size_t>(r) * out;
      for (int j = 0; j < out; ++j) row[j] += b[j];
    }
    if (l + 1 < L) {
      // Hidden: rectify, then dropout; both folded into one backward
      // multiplier per unit. One mask draw per unit unconditionally, so the
      // stream consumed is a function of shape alone, not of values.
      auto& m = mult_[l];
      m.resize(z.size());
      const bool drop = dropout_p > 0.0 && rng != nullptr;
      const double keep_scale = drop ? 1.0 / (1.0 - dropout_p) : 1.0;
      for (size_t i = 0; i < z.size(); ++i) {
        double g = z[i] > 0.0 ? 1.0 : 0.0;
        if (drop) g *= rng->uniform() < dropout_p ? 0.0 : keep_scale;
        m[i] = g;
        z[i] *= g;
      }
    } else if (net.head() == Head::kTanh) {
      for (auto& v : z) v = std::tanh(v);
    }
  }
  return acts_.back();
}

void NetPass::backward(const Net& net, const double* doutput,
                       std::vector<double>& grad, double* dinput) {
  const int L = net.num_layers();
  if (grad.size() != net.num_params()) {
    throw ValidationError("gradient buffer size does not match the network");
  }
  const int out_dim = net.output_dim();
  dz_.assign(doutput, doutput + static_cast<size_t>(batch_) * out_dim);
  if (net.head() == Head::kTanh) {
    const auto& y = acts_.back();
    for (size_t i = 0; i < dz_.size(); ++i) dz_[i] *= 1.0 - y[i] * y[i];
  }
  ones_.assign(batch_, 1.0);

  for (int l = L - 1; l >= 0; --l) {
    const int in = net.dims()[l], out = net.dims()[l + 1];
    double* dw = grad.data() + net.layer_offset(l);
    double* db = dw + static_cast<size_t>(in) * out;
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, out, in, batch_, 1.0,
                dz_.data(), out, acts_[l].data(), in, 1.0, dw, in);
    cblas_dgemv(CblasRowMajor, CblasTrans, batch_, out, 1.0, dz_.data(), out,
                ones_.data(), 1, 1.0, db, 1);
    if (l == 0 && dinput == nullptr) break;
    da_.resize(static_cast<size_t>(batch_) * in);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, batch_, in, out,
                1.0, dz_.data(), out, net.weight(l), in, 0.0, da_.data(), in);
    if (l == 0) {
      std::memcpy(dinput, da_.data(), da_.size() * sizeof(double));
      break;
    }
    const auto& m = mult_[l - 1];
    dz_.resize(da_.size());
    for (size_t i = 0; i < da_.size(); ++i) dz_[i] = da_[i] * m[i];
  }
}

std::vector<double> net_apply(const Net& net, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != net.input_dim()) {
    throw ValidationError("input size does not match the network");
  }
  NetPass pass;
  return pass.forward(net, x.data(), 1);
}

Adam::Adam(size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ValidationError("optimizer state does not match parameter vector");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
    v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

void Adam::serialize(BinWriter& w) const {
  w.f64(lr_);
  w.f64(b1_);
  w.f64(b2_);
  w.f64(eps_);
  w.i64(t_);
  w.f64v(m_);
  w.f64v(v_);
}

Adam Adam::deserialize(BinReader& r) {
  Adam a;
  a.lr_ = r.f64();
  a.b1_ = r.f64();
  a.b2_ = r.f64();
  a.eps_ = r.f64();
  a.t_ = r.i64();
  a.m_ = r.f64v();
  a.v_ = r.f64v();
  if (a.m_.size() != a.v_.size()) {
    throw ParseError("optimizer moment vectors disagree in size", r.offset());
  }
  return a;
}

void polyak(std::vector<double>& target, const std::vector<double>& online,
            double tau) {
  if (target.size() != online.size()) {
    throw ValidationError("Polyak mix of differently sized vectors");
  }
  for (size_t i = 0; i < target.size(); ++i) {
    target[i] = (1.0 - tau) * target[i] + tau * online[i];
  }
}

}  // namespace clavier
