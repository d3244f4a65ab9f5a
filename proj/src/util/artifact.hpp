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

#ifndef CLAVIER_UTIL_ARTIFACT_HPP_
#define CLAVIER_UTIL_ARTIFACT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace clavier {

// Every produced file starts with a self-describing header naming the
// artifact kind plus at least {config-hash, seed, command}. Text artifacts
// use '#'-prefixed lines; binary artifacts embed the same text block after a
// magic string; emitted MIDI carries it in a text meta event.
struct ArtifactHeader {
  std::string kind;  // e.g. "trajectory", "eval-curve", "checkpoint"
  std::vector<std::pair<std::string, std::string>> meta;

  void add(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
};

void write_text_header(std::ostream& out, const ArtifactHeader& h);
// Consumes leading '#' lines; returns the parsed header. Throws
// ValidationError if the first line is not a clavier header of `kind`
// (empty kind accepts any).
ArtifactHeader read_text_header(std::istream& in, const std::string& kind);

// Serialized header block for embedding in non-line-oriented containers.
std::string header_block(const ArtifactHeader& h);
ArtifactHeader parse_header_block(const std::string& block,
                                  const std::string& kind);

// Binary artifact container: magic line, header block, raw payload.
void write_binary_artifact(const std::string& path, const ArtifactHeader& h,
                           const std::string& payload);
std::pair<ArtifactHeader, std::string> read_binary_artifact(
    const std::string& path, const std::string& kind);

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_f64(double v);

// Whole-file helpers.
std::string read_file(const std::string& path);          // throws if missing
void write_file(const std::string& path, const std::string& data);

}  // namespace clavier

#endif  // CLAVIER_UTIL_ARTIFACT_HPP_
