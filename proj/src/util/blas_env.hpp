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

#ifndef CLAVIER_UTIL_BLAS_ENV_HPP_
#define CLAVIER_UTIL_BLAS_ENV_HPP_

namespace clavier {

// Call first thing in main(). Works around OpenBLAS dynamic dispatch picking
// a generic pre-SSE3 kernel on some recent x86 CPUs it does not recognize
// (a >4x slowdown for large matrix products): if the host supports AVX-512
// and dispatch landed on "Prescott", re-executes the process once with
// OPENBLAS_CORETYPE=SKYLAKEX. A guard variable prevents loops; an explicit
// OPENBLAS_CORETYPE in the environment is always respected.
void fix_blas_dispatch(int argc, char** argv);

// Pin the BLAS thread pool (training math is sized for deterministic
// single-threaded execution by default; see [learn] blas_threads).
void set_blas_threads(int n);

// Kernel family name chosen by OpenBLAS dispatch (diagnostic).
const char* blas_corename();

}  // namespace clavier

#endif  // CLAVIER_UTIL_BLAS_ENV_HPP_
