// Copyright 2026 The qbroadcast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#ifdef QBROADCAST_OMP
#include <omp.h>
#define QBROADCAST_OMP_PRAGMA(content) _Pragma(content)
#else
#define QBROADCAST_OMP_PRAGMA(content)
#endif

namespace qbroadcast::parallel {

inline int max_threads() {
#ifdef QBROADCAST_OMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef QBROADCAST_OMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace qbroadcast::parallel
