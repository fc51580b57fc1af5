#pragma once

#include "msgc/types.hpp"

#include <exception>
#include <mutex>

#include <omp.h>

namespace msgc {

/// Runs body(i) for i in [0, n). Iterations must be independent and write only
/// to their own slots. The serial path is the reference; the parallel path uses
/// an OpenMP dynamic schedule. The exception of the lowest failing index is
/// rethrown, so both paths report the same error.
template <class Body>
void for_each_index(Index n, Execution exec, Body&& body) {
  if (exec == Execution::serial || n < 2) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  Index error_index = n;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace msgc
