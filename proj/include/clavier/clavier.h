/* Copyright 2026 The Clavier Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * C interface to the clavier pipeline. A session owns a configuration, a
 * seed, and a working directory; stage calls read their inputs from and
 * write their artifacts into that directory, so stages can run in separate
 * processes. All calls return a status code; the failure message of the
 * last failing call is kept on the session.
 */

#ifndef CLAVIER_CLAVIER_H_
#define CLAVIER_CLAVIER_H_

#include <stdint.h>

#if defined(_WIN32)
#define CLAVIER_API __declspec(dllexport)
#else
#define CLAVIER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct clv_session clv_session;

typedef enum clv_status {
  CLV_OK = 0,
  CLV_USAGE = 1,      /* bad arguments: unknown names, malformed flags */
  CLV_VALIDATION = 2, /* bad input data: files, formats, domain checks */
  CLV_RUNTIME = 3     /* internal failure */
} clv_status;

CLAVIER_API const char* clv_version(void);

/* Process-level numerics setup: call first in main(). Pins the linear
 * algebra backend to one thread (training math is sized for deterministic
 * single-threaded execution) and repairs its kernel dispatch on hosts it
 * misdetects, which may re-execute the process once preserving argv. */
CLAVIER_API void clv_runtime_init(int argc, char** argv);

/* Comma-separated names of the songs compiled into the library. */
CLAVIER_API const char* clv_bundled_songs(void);

CLAVIER_API clv_session* clv_session_new(void);
CLAVIER_API void clv_session_free(clv_session* session);

/* Message of the last failing call on this session ("" after success). */
CLAVIER_API const char* clv_last_error(const clv_session* session);

/* Headline score of the last scoring stage, in [0,1]; -1 before any. */
CLAVIER_API double clv_last_f1(const clv_session* session);

/* Session state. Configuration files use INI-style sections; overrides use
 * the dotted form "section.key=value". */
CLAVIER_API clv_status clv_config_load(clv_session* session, const char* path);
CLAVIER_API clv_status clv_config_set(clv_session* session,
                                      const char* assignment);
CLAVIER_API clv_status clv_set_seed(clv_session* session, uint64_t seed);
CLAVIER_API clv_status clv_set_out_dir(clv_session* session, const char* dir);
CLAVIER_API clv_status clv_set_verbose(clv_session* session, int level);
/* Free-form producing-command line recorded in artifact headers. */
CLAVIER_API clv_status clv_set_command(clv_session* session,
                                       const char* line);

/* Pipeline stages. String arguments may be NULL or "" where a default is
 * documented.
 *
 * parse: bundled song by name (midi_path NULL), or a MIDI file with an
 * optional fingering annotation file. Writes roll.mid + fingering.txt.
 */
CLAVIER_API clv_status clv_parse(clv_session* session, const char* song,
                                 const char* midi_path,
                                 const char* fingering_path);

/* Pretrain both hands on the nominal simulator; writes per-hand policy
 * checkpoints and validation curves plus the best open-loop tape. */
CLAVIER_API clv_status clv_train_sim(clv_session* session);

/* Structured lateral correction of a tape against a gap preset
 * (identity | bias-only | realistic). source: sim (default) | planned. */
CLAVIER_API clv_status clv_refine(clv_session* session, const char* gap,
                                  const char* source);

/* One reported rollout. mode: open-loop | closed-loop | hybrid | residual.
 * source selects the open-loop tape (refined | sim | planned | rest;
 * default: refined when present, else sim). */
CLAVIER_API clv_status clv_rollout(clv_session* session, const char* mode,
                                   const char* gap, const char* source);

/* Scoring protocol: `rollouts` seeded rollouts (0 = configured default),
 * mean and sd written to a summary file plus a report. */
CLAVIER_API clv_status clv_eval(clv_session* session, const char* mode,
                                const char* gap, const char* source,
                                int rollouts);

/* Residual learning over a base tape. base: refined (default) | sim |
 * planned | scratch (rest-pose tape with full-range joint authority). */
CLAVIER_API clv_status clv_train_residual(clv_session* session,
                                          const char* base, const char* gap);

/* All six baseline arms on the working song; writes matrix.txt. */
CLAVIER_API clv_status clv_matrix(clv_session* session, const char* gap);

#ifdef __cplusplus
}
#endif

#endif /* CLAVIER_CLAVIER_H_ */
