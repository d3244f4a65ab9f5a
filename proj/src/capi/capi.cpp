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

#include "clavier/clavier.h"

#include <exception>
#include <string>

#include "pipeline/pipeline.hpp"
#include "score/songs.hpp"
#include "util/blas_env.hpp"
#include "util/errors.hpp"

struct clv_session {
  clavier::PipelineContext ctx;
  std::string last_error;
  double last_f1 = -1.0;
};

namespace {

std::string arg(const char* s) { return s == nullptr ? std::string() : s; }

template <typename Fn>
clv_status run(clv_session* session, Fn&& fn) noexcept {
  if (session == nullptr) return CLV_USAGE;
  try {
    fn();
    session->last_error.clear();
    return CLV_OK;
  } catch (const clavier::UsageError& e) {
    session->last_error = e.what();
    return CLV_USAGE;
  } catch (const clavier::ValidationError& e) {
    session->last_error = e.what();
    return CLV_VALIDATION;
  } catch (const std::exception& e) {
    session->last_error = e.what();
    return CLV_RUNTIME;
  } catch (...) {
    session->last_error = "unknown internal error";
    return CLV_RUNTIME;
  }
}

}  // namespace

extern "C" {

const char* clv_version(void) { return "0.1.0"; }

void clv_runtime_init(int argc, char** argv) {
  clavier::fix_blas_dispatch(argc, argv);
  clavier::set_blas_threads(1);
}

const char* clv_bundled_songs(void) {
  static const std::string joined = [] {
    std::string all;
    for (const std::string& n : clavier::bundled_song_names()) {
      if (!all.empty()) all += ",";
      all += n;
    }
    return all;
  }();
  return joined.c_str();
}

clv_session* clv_session_new(void) {
  try {
    return new clv_session();
  } catch (...) {
    return nullptr;
  }
}

void clv_session_free(clv_session* session) { delete session; }

const char* clv_last_error(const clv_session* session) {
  return session == nullptr ? "null session" : session->last_error.c_str();
}

double clv_last_f1(const clv_session* session) {
  return session == nullptr ? -1.0 : session->last_f1;
}

clv_status clv_config_load(clv_session* session, const char* path) {
  return run(session, [&] {
    if (path == nullptr || *path == '\0') {
      throw clavier::UsageError("config path must not be empty");
    }
    session->ctx.config.load_file(path);
  });
}

clv_status clv_config_set(clv_session* session, const char* assignment) {
  return run(session,
             [&] { session->ctx.config.apply_override(arg(assignment)); });
}

clv_status clv_set_seed(clv_session* session, uint64_t seed) {
  return run(session, [&] { session->ctx.seed = seed; });
}

clv_status clv_set_out_dir(clv_session* session, const char* dir) {
  return run(session, [&] {
    session->ctx.out_dir = arg(dir).empty() ? "." : arg(dir);
  });
}

clv_status clv_set_verbose(clv_session* session, int level) {
  return run(session, [&] { session->ctx.verbose = level; });
}

clv_status clv_set_command(clv_session* session, const char* line) {
  return run(session, [&] { session->ctx.command = arg(line); });
}

clv_status clv_parse(clv_session* session, const char* song,
                     const char* midi_path, const char* fingering_path) {
  return run(session, [&] {
    clavier::stage_parse(session->ctx, arg(song), arg(midi_path),
                         arg(fingering_path));
  });
}

clv_status clv_train_sim(clv_session* session) {
  return run(session,
             [&] { session->last_f1 = clavier::stage_train_sim(session->ctx); });
}

clv_status clv_refine(clv_session* session, const char* gap,
                      const char* source) {
  return run(session, [&] {
    session->last_f1 = clavier::stage_refine(
        session->ctx, arg(gap).empty() ? "identity" : arg(gap), arg(source));
  });
}

clv_status clv_rollout(clv_session* session, const char* mode,
                       const char* gap, const char* source) {
  return run(session, [&] {
    session->last_f1 = clavier::stage_rollout(
        session->ctx, arg(mode).empty() ? "open-loop" : arg(mode),
        arg(gap).empty() ? "identity" : arg(gap), arg(source));
  });
}

clv_status clv_eval(clv_session* session, const char* mode, const char* gap,
                    const char* source, int rollouts) {
  return run(session, [&] {
    session->last_f1 = clavier::stage_eval(
        session->ctx, arg(mode).empty() ? "open-loop" : arg(mode),
        arg(gap).empty() ? "identity" : arg(gap), arg(source), rollouts);
  });
}

clv_status clv_train_residual(clv_session* session, const char* base,
                              const char* gap) {
  return run(session, [&] {
    session->last_f1 = clavier::stage_train_residual(
        session->ctx, arg(base), arg(gap).empty() ? "identity" : arg(gap));
  });
}

clv_status clv_matrix(clv_session* session, const char* gap) {
  return run(session, [&] {
    session->last_f1 = clavier::stage_matrix(
        session->ctx, arg(gap).empty() ? "identity" : arg(gap));
  });
}

}  // extern "C"
