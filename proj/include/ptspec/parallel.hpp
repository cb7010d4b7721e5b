#pragma once

#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptspec {

// Runs f(i) for i in [0, n). With parallel == true and OpenMP available the
// iterations are distributed over threads; results must be written to
// per-index slots so output is identical regardless of thread count.
// The serial branch is the reference path the tests compare against.
template <class F>
void parallel_for(int n, bool parallel, F&& f) {
#ifdef _OPENMP
  if (parallel && n > 1) {
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) f(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ptspec
