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

#include "util/artifact.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "util/errors.hpp"

namespace clavier {

void ArtifactHeader::add(const std::string& key, const std::string& value) {
  meta.emplace_back(key, value);
}

const std::string* ArtifactHeader::find(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return &v;
  }
  return nullptr;
}

void write_text_header(std::ostream& out, const ArtifactHeader& h) {
  out << header_block(h);
}

std::string header_block(const ArtifactHeader& h) {
  std::ostringstream out;
  out << "# clavier " << h.kind << " v1\n";
  for (const auto& [k, v] : h.meta) {
    out << "# " << k << ": " << v << "\n";
  }
  return out.str();
}

namespace {

ArtifactHeader parse_lines(std::istream& in, const std::string& kind) {
  ArtifactHeader h;
  std::string line;
  bool first = true;
  while (in.peek() == '#') {
    std::getline(in, line);
    std::string body = line.substr(1);
    if (!body.empty() && body.front() == ' ') body.erase(0, 1);
    if (first) {
      first = false;
      const char* prefix = "clavier ";
      if (body.rfind(prefix, 0) != 0 ||
          body.size() < std::strlen(prefix) + 3 ||
          body.substr(body.size() - 3) != " v1") {
        throw ValidationError("not a clavier artifact header: " + line);
      }
      h.kind = body.substr(std::strlen(prefix),
                           body.size() - std::strlen(prefix) - 3);
      if (!kind.empty() && h.kind != kind) {
        throw ValidationError("expected a " + kind + " artifact, found " +
                              h.kind);
      }
      continue;
    }
    size_t colon = body.find(": ");
    if (colon != std::string::npos) {
      h.meta.emplace_back(body.substr(0, colon), body.substr(colon + 2));
    }
  }
  if (first) throw ValidationError("missing clavier artifact header");
  return h;
}

}  // namespace

ArtifactHeader read_text_header(std::istream& in, const std::string& kind) {
  return parse_lines(in, kind);
}

ArtifactHeader parse_header_block(const std::string& block,
                                  const std::string& kind) {
  std::istringstream in(block);
  return parse_lines(in, kind);
}

std::string fmt_f64(double v) {
  char buf[32];
  // Try increasing precision until the round trip is exact.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (v != v && back != back)) return buf;
  }
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

namespace {
constexpr char kBinaryMagic[] = "CLAVIERBIN1\n";
}

void write_binary_artifact(const std::string& path, const ArtifactHeader& h,
                           const std::string& payload) {
  std::string block = header_block(h);
  std::string out(kBinaryMagic);
  uint32_t len = static_cast<uint32_t>(block.size());
  out.append(reinterpret_cast<const char*>(&len), sizeof len);
  out += block;
  out += payload;
  write_file(path, out);
}

std::pair<ArtifactHeader, std::string> read_binary_artifact(
    const std::string& path, const std::string& kind) {
  std::string data = read_file(path);
  const size_t magic_len = sizeof(kBinaryMagic) - 1;
  if (data.size() < magic_len + sizeof(uint32_t) ||
      data.compare(0, magic_len, kBinaryMagic) != 0) {
    throw ValidationError(path + " is not a binary artifact");
  }
  uint32_t len = 0;
  std::memcpy(&len, data.data() + magic_len, sizeof len);
  size_t body = magic_len + sizeof len;
  if (data.size() < body + len) {
    throw ParseError("binary artifact header truncated", body);
  }
  ArtifactHeader h = parse_header_block(data.substr(body, len), kind);
  return {std::move(h), data.substr(body + len)};
}

}  // namespace clavier
