#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>

namespace wg {

// Global worker cap for the element-loop kernels. All parallel loops write to
// disjoint per-element slots and all reductions run serially in element order,
// so results do not depend on this value.
int max_threads();
void set_max_threads(int n);
int hardware_threads();

template <class Body>
void parallel_for(int n, Body&& body) {
#ifdef _OPENMP
  const int nt = std::min(max_threads(), n > 0 ? n : 1);
  if (nt > 1) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

} // namespace wg
