#pragma once

// Execution-policy switch shared by every data-parallel kernel. Each kernel
// has a serial reference path and an OpenMP path; both must produce
// identical results (outputs are written by index, never appended).

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hypsweep {

enum class Exec { serial, parallel };

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

/// Calls fn(i) for i in [0, n). With Exec::parallel the iterations are
/// distributed by OpenMP; fn must only write to slot i of its outputs.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace hypsweep
