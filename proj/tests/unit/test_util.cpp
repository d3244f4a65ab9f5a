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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "util/artifact.hpp"
#include "util/binio.hpp"
#include "util/config.hpp"
#include "util/errors.hpp"
#include "util/rng.hpp"

using namespace clavier;

TEST_CASE("config: ini sections, comments, overrides, typed getters") {
  Config c;
  c.parse_text("# top comment\n"
               "plain = 1\n"
               "[td3]\n"
               "batch = 64   # trailing comment\n"
               "lr = 2.5e-4\n"
               "guided = true\n"
               "name = hello world\n",
               "inline");
  CHECK(c.i64("plain", 0) == 1);
  CHECK(c.i64("td3.batch", 0) == 64);
  CHECK(c.f64("td3.lr", 0.0) == doctest::Approx(2.5e-4));
  CHECK(c.boolean("td3.guided", false));
  CHECK(c.str("td3.name", "") == "hello world");
  CHECK(c.i64("absent", 42) == 42);
  CHECK_FALSE(c.has("absent"));

  c.apply_override("td3.batch=128");
  CHECK(c.i64("td3.batch", 0) == 128);
  CHECK_THROWS_AS(c.apply_override("no_equals_sign"), UsageError);
  CHECK_THROWS_AS(c.apply_override("=value"), UsageError);
}

TEST_CASE("config: hash covers explicit entries only, order-independent") {
  Config a, b, c;
  a.set("x.k", "1");
  a.set("y.k", "2");
  b.set("y.k", "2");
  b.set("x.k", "1");
  CHECK(a.hash_hex() == b.hash_hex());
  c.set("x.k", "1");
  CHECK(a.hash_hex() != c.hash_hex());
  CHECK(Config().hash_hex() != "");
}

TEST_CASE("artifact: text header round trip") {
  ArtifactHeader h;
  h.kind = "eval-curve";
  h.add("config-hash", "deadbeef");
  h.add("seed", "7");
  h.add("command", "clavier eval --mode open-loop");
  std::ostringstream out;
  write_text_header(out, h);
  out << "payload line\n";

  std::istringstream in(out.str());
  ArtifactHeader back = read_text_header(in, "eval-curve");
  CHECK(back.kind == "eval-curve");
  REQUIRE(back.find("seed") != nullptr);
  CHECK(*back.find("seed") == "7");
  REQUIRE(back.find("command") != nullptr);
  CHECK(*back.find("command") == "clavier eval --mode open-loop");
  std::string rest;
  std::getline(in, rest);
  CHECK(rest == "payload line");

  std::istringstream in2(out.str());
  CHECK_THROWS_AS(read_text_header(in2, "trajectory"), ValidationError);
}

TEST_CASE("artifact: binary container round trip and truncation") {
  std::string dir = std::filesystem::temp_directory_path() / "clv_util_test";
  std::filesystem::create_directories(dir);
  std::string path = dir + "/blob.bin";
  ArtifactHeader h;
  h.kind = "agent-checkpoint";
  h.add("seed", "3");
  std::string payload("\x00\x01\xff payload with nul", 20);
  write_binary_artifact(path, h, payload);

  auto [back, data] = read_binary_artifact(path, "agent-checkpoint");
  CHECK(back.kind == "agent-checkpoint");
  CHECK(data == payload);

  std::string all = read_file(path);
  write_file(path, all.substr(0, all.size() / 2));
  CHECK_THROWS_AS(read_binary_artifact(path, "agent-checkpoint"),
                  ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("artifact: fmt_f64 parses back exactly") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 0.1, 1e-300, -2.5e300,
                   3.141592653589793, 0.6913080044096421}) {
    CHECK(std::stod(fmt_f64(v)) == v);
  }
}

TEST_CASE("rng: seeded determinism and substream independence") {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.u64() == b.u64());
  CHECK(a.u64() != c.u64());

  CHECK(Rng::derive(1, "alpha") != Rng::derive(1, "beta"));
  CHECK(Rng::derive(1, "alpha") != Rng::derive(2, "alpha"));
  CHECK(Rng::derive(1, "alpha") == Rng::derive(1, "alpha"));
}

TEST_CASE("rng: state round trip preserves the cached normal deviate") {
  Rng a(99);
  a.normal();  // leaves a cached spare deviate inside
  std::string snap = a.state();
  Rng b(0);
  b.set_state(snap);
  for (int i = 0; i < 50; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("rng: normal sample moments") {
  Rng r(2024);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    s += x;
    s2 += x * x;
  }
  double mean = s / n;
  double var = s2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("binio: round trip and truncation error") {
  BinWriter w;
  w.u32(7);
  w.u64(1ull << 60);
  w.i64(-12345);
  w.f64(0.25);
  w.f64v({1.5, -2.5, 3.5});
  w.str("checkpoint");

  BinReader r(w.buffer());
  CHECK(r.u32() == 7);
  CHECK(r.u64() == (1ull << 60));
  CHECK(r.i64() == -12345);
  CHECK(r.f64() == 0.25);
  CHECK(r.f64v() == std::vector<double>{1.5, -2.5, 3.5});
  CHECK(r.str() == "checkpoint");
  CHECK(r.exhausted());

  BinReader t(w.buffer().data(), 10);
  t.u32();
  CHECK_THROWS_AS(t.u64(), ParseError);
}
