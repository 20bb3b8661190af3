#pragma once

#include <cstddef>
#include <exception>
#include <vector>

// Kernels that loop over independent work items (total choices, training
// examples, indicator assignments) come in a serial reference flavour and an
// OpenMP flavour. Both reduce partial results in a fixed order, so they
// return bit-identical values.

namespace plp {

enum class Execution { Serial, Parallel };

int max_threads();

/// Calls fn(i) for i in [0, n). With Parallel the calls are spread over
/// OpenMP threads; the first exception by index is rethrown afterwards.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace plp
