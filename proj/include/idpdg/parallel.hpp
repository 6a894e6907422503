#pragma once

#include <exception>

namespace idpdg {

/// Runs f(i) for i in [0, n), in parallel when OpenMP is enabled. If any call
/// throws, the exception from the smallest index is rethrown after the loop,
/// so error reports do not depend on the thread schedule.
template <class F>
void parallel_for(int n, F&& f) {
  std::exception_ptr error;
  int error_index = n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical(idpdg_parallel_for)
      {
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace idpdg
