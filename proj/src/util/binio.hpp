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
// Minimal length-checked binary serialization for checkpoint files.
// Fixed-width little-endian integers and raw IEEE-754 doubles; written and
// read on the same machine class, exact round-trip.

#ifndef CLAVIER_UTIL_BINIO_HPP_
#define CLAVIER_UTIL_BINIO_HPP_

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "util/errors.hpp"

namespace clavier {

class BinWriter {
 public:
  void u32(uint32_t v) { raw(&v, sizeof v); }
  void u64(uint64_t v) { raw(&v, sizeof v); }
  void i64(int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void f64v(const std::vector<double>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
  }
  void str(const std::string& s) {
    u64(s.size());
    buf_.append(s);
  }
  const std::string& buffer() const { return buf_; }

 private:
  void raw(const void* p, size_t n) {
    buf_.append(reinterpret_cast<const char*>(p), n);
  }
  std::string buf_;
};

class BinReader {
 public:
  BinReader(const char* data, size_t size)
      : base_(data), p_(data), end_(data + size) {}
  explicit BinReader(const std::string& s) : BinReader(s.data(), s.size()) {}

  uint32_t u32() { return fixed<uint32_t>(); }
  uint64_t u64() { return fixed<uint64_t>(); }
  int64_t i64() { return fixed<int64_t>(); }
  double f64() { return fixed<double>(); }
  std::vector<double> f64v() {
    uint64_t n = u64();
    need(n * sizeof(double), "f64 array");
    std::vector<double> v(n);
    if (n) std::memcpy(v.data(), p_, n * sizeof(double));
    p_ += n * sizeof(double);
    return v;
  }
  std::string str() {
    uint64_t n = u64();
    need(n, "string");
    std::string s(p_, n);
    p_ += n;
    return s;
  }
  size_t offset() const { return static_cast<size_t>(p_ - base_); }
  bool exhausted() const { return p_ == end_; }

 private:
  template <typename T>
  T fixed() {
    need(sizeof(T), "fixed-width value");
    T v;
    std::memcpy(&v, p_, sizeof(T));
    p_ += sizeof(T);
    return v;
  }
  void need(uint64_t n, const char* what) {
    if (static_cast<uint64_t>(end_ - p_) < n) {
      throw ParseError(std::string("checkpoint truncated reading ") + what,
                       offset());
    }
  }
  const char* base_;
  const char* p_;
  const char* end_;
};

}  // namespace clavier

#endif  // CLAVIER_UTIL_BINIO_HPP_
