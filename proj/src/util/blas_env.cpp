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

#include "util/blas_env.hpp"

#include <cstdlib>
#include <cstring>

#ifdef __linux__
#include <unistd.h>
#endif

extern "C" {
char* openblas_get_corename(void);
void openblas_set_num_threads(int);
}

namespace clavier {

void fix_blas_dispatch(int argc, char** argv) {
  (void)argc;
#if defined(__linux__) && defined(__x86_64__)
  if (std::getenv("OPENBLAS_CORETYPE")) return;      // user chose explicitly
  if (std::getenv("CLAVIER_BLAS_REEXEC")) return;    // already retried once
  if (!__builtin_cpu_supports("avx512f")) return;
  if (std::strcmp(openblas_get_corename(), "Prescott") != 0) return;
  setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 1);
  setenv("CLAVIER_BLAS_REEXEC", "1", 1);
  execv("/proc/self/exe", argv);
  // If exec failed we simply continue on the slow kernels.
#else
  (void)argv;
#endif
}

void set_blas_threads(int n) { openblas_set_num_threads(n); }

const char* blas_corename() { return openblas_get_corename(); }

}  // namespace clavier
