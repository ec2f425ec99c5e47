#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace intake {

// Loops below this many inner-loop operations stay serial; the fork/join
// cost dominates otherwise.
inline constexpr std::size_t kParallelGrain = 1 << 15;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace intake
