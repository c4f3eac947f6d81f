#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>

#ifdef CURVFLOW_HAVE_OPENMP
#include <omp.h>
#endif

namespace curvflow::detail {

/// Node-level parallelism cap. CURVFLOW_THREADS env var wins; 0 or unset
/// means hardware concurrency. Resolved once per process.
inline int thread_count() {
  static const int n = [] {
    if (const char* env = std::getenv("CURVFLOW_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) return static_cast<int>(std::min<long>(v, 256));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return n;
}

/// Parallel loop over grid rows. Every row writes only its own node slots, so
/// results are bit-identical for any thread count; reductions stay serial in
/// the callers.
template <class F>
void parallel_rows(int rows, F&& body) {
#ifdef CURVFLOW_HAVE_OPENMP
  const int nt = std::min(thread_count(), rows);
  if (nt > 1) {
#pragma omp parallel for num_threads(nt) schedule(static)
    for (int i = 0; i < rows; ++i) body(i);
    return;
  }
#endif
  for (int i = 0; i < rows; ++i) body(i);
}

}  // namespace curvflow::detail
