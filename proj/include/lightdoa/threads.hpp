#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lightdoa {

// LIGHTDOA_THREADS caps worker parallelism; 0 or unset means automatic.
// Results are identical for any setting; this only affects speed.
inline int configure_threads_from_env() {
  const char* v = std::getenv("LIGHTDOA_THREADS");
  if (!v) return 0;
  const int n = std::atoi(v);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
  return n > 0 ? n : 0;
}

inline void set_worker_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace lightdoa
