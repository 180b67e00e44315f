// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace socbir {

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// OpenMP loop over [0, n) that ferries the first exception back to the
// calling thread; exceptions must not unwind out of a parallel region.
template <typename Fn>
void parallel_for(long long n, Fn&& fn) {
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(socbir_parallel_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace socbir
