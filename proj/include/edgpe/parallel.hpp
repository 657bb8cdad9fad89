#pragma once

#ifdef EDGPE_OPENMP
#include <omp.h>
#define EDGPE_OMP_PRAGMA(content) _Pragma(content)
#else
#define EDGPE_OMP_PRAGMA(content)
#endif

namespace edgpe {

// Worker count used by the OpenMP kernels and the FFT plans. Reads
// EDGPE_THREADS once; values <= 0 or unparsable fall back to the OpenMP
// default.
int thread_count();

// Overrides the worker count for the rest of the process (benchmarks, tests).
void set_thread_count(int threads);

}  // namespace edgpe
